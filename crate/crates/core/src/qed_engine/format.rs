//! Line-oriented certificate text:
//!
//! ```text
//! qed-certificate
//! node 3f2a9c0b4d5e6f70 surface { ... }
//! start 3f2a9c0b4d5e6f70
//! step 1: 3f2a9c0b4d5e6f70 --move[Deformation,family=tori,tori]--> 0a1b2c3d4e5f6071
//! end
//! ```
//!
//! Every hash names a `node` line. Blank lines and `#` comments are ignored.

use std::collections::HashMap;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{BirationalKind, Certificate, MoveKind, QedMove, Step};
use crate::invariants::{parse_descriptor, ParseError, SurfaceDescriptor};

/// First 16 hex digits of the SHA-256 of the canonical descriptor text.
pub fn descriptor_hash(d: &SurfaceDescriptor) -> String {
    let digest = Sha256::digest(d.to_string().as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qed-certificate")?;
        let mut seen = Vec::new();
        for d in
            std::iter::once(&self.start).chain(self.steps.iter().flat_map(|s| [&s.src, &s.dst]))
        {
            let h = descriptor_hash(d);
            if !seen.contains(&h) {
                writeln!(f, "node {h} {d}")?;
                seen.push(h);
            }
        }
        writeln!(f, "start {}", descriptor_hash(&self.start))?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "step {}: {} {} {}",
                i + 1,
                descriptor_hash(&s.src),
                s.mv,
                descriptor_hash(&s.dst)
            )?;
        }
        writeln!(f, "end")
    }
}

#[derive(Debug, Error)]
pub enum CertificateParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: bad descriptor: {source}")]
    Descriptor { line: usize, source: ParseError },
    #[error("line {line}: node {hash} does not match its descriptor")]
    HashMismatch { line: usize, hash: String },
    #[error("line {line}: unknown node {hash}")]
    UnknownNode { line: usize, hash: String },
}

fn syntax<T>(line: usize, message: impl Into<String>) -> Result<T, CertificateParseError> {
    Err(CertificateParseError::Syntax {
        line,
        message: message.into(),
    })
}

fn parse_birational(line: usize, s: &str) -> Result<BirationalKind, CertificateParseError> {
    Ok(match s {
        "MinimalModel" => BirationalKind::MinimalModel,
        "BlowUp" => BirationalKind::BlowUp,
        "BlowDown" => BirationalKind::BlowDown,
        "SmallContraction" => BirationalKind::SmallContraction,
        _ => return syntax(line, format!("unknown birational kind '{s}'")),
    })
}

/// Parses the inside of `--move[...]`.
fn parse_move(line: usize, body: &str) -> Result<QedMove, CertificateParseError> {
    let (Some(first), Some(last)) = (body.find(','), body.rfind(',')) else {
        return syntax(line, "move needs kind, params and lemma");
    };
    if first == last {
        return syntax(line, "move needs kind, params and lemma");
    }
    let (kind, middle, lemma) = (&body[..first], &body[first + 1..last], &body[last + 1..]);
    let mut params: Vec<(String, String)> = Vec::new();
    for p in middle.split(';').filter(|p| !p.is_empty()) {
        let Some((k, v)) = p.split_once('=') else {
            return syntax(line, format!("parameter '{p}' is not key=value"));
        };
        params.push((k.to_string(), v.to_string()));
    }
    let mut take = |key: &str| -> Result<String, CertificateParseError> {
        match params.iter().position(|(k, _)| k == key) {
            Some(i) => Ok(params.remove(i).1),
            None => syntax(line, format!("{kind} move without '{key}'")),
        }
    };
    let kind = match kind {
        "Birational" => MoveKind::Birational(parse_birational(line, &take("sub")?)?),
        "Deformation" => MoveKind::Deformation {
            family_id: take("family")?,
        },
        "QuasiEtaleCover" | "QuasiEtaleQuotient" => {
            let d = take("d")?;
            let Ok(degree) = d.parse() else {
                return syntax(line, format!("bad degree '{d}'"));
            };
            let group = take("group")?;
            if kind == "QuasiEtaleCover" {
                MoveKind::QuasiEtaleCover { degree, group }
            } else {
                MoveKind::QuasiEtaleQuotient { degree, group }
            }
        }
        other => return syntax(line, format!("unknown move kind '{other}'")),
    };
    let mut mv = QedMove::new(kind, lemma);
    mv.params = params;
    Ok(mv)
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertificateParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, "qed-certificate")) => {}
        Some((n, _)) => return syntax(n, "expected 'qed-certificate'"),
        None => return syntax(0, "empty input"),
    }
    let mut nodes: HashMap<String, SurfaceDescriptor> = HashMap::new();
    let lookup = |nodes: &HashMap<String, SurfaceDescriptor>, n: usize, h: &str| {
        nodes
            .get(h)
            .cloned()
            .ok_or_else(|| CertificateParseError::UnknownNode {
                line: n,
                hash: h.to_string(),
            })
    };
    let mut start = None;
    let mut steps = Vec::new();
    let mut ended = false;
    for (n, l) in lines {
        if ended {
            return syntax(n, "content after 'end'");
        }
        let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match head {
            "node" => {
                let (hash, record) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let d = parse_descriptor(record)
                    .map_err(|source| CertificateParseError::Descriptor { line: n, source })?;
                if descriptor_hash(&d) != hash {
                    return Err(CertificateParseError::HashMismatch {
                        line: n,
                        hash: hash.to_string(),
                    });
                }
                nodes.insert(hash.to_string(), d);
            }
            "start" => {
                if start.is_some() {
                    return syntax(n, "duplicate 'start'");
                }
                start = Some(lookup(&nodes, n, rest)?);
            }
            "step" => {
                if start.is_none() {
                    return syntax(n, "'step' before 'start'");
                }
                let Some((index, body)) = rest.split_once(':') else {
                    return syntax(n, "expected 'step i: SRC --move[...]--> DST'");
                };
                if index.trim().parse::<usize>().ok() != Some(steps.len() + 1) {
                    return syntax(n, format!("expected step {}", steps.len() + 1));
                }
                let body = body.trim();
                let (Some(open), Some(close)) = (body.find("--move["), body.rfind("]-->")) else {
                    return syntax(n, "missing '--move[...]-->'");
                };
                if close < open {
                    return syntax(n, "malformed move");
                }
                let src = lookup(&nodes, n, body[..open].trim())?;
                let mv = parse_move(n, &body[open + 7..close])?;
                let dst = lookup(&nodes, n, body[close + 4..].trim())?;
                steps.push(Step { src, mv, dst });
            }
            "end" => ended = true,
            other => return syntax(n, format!("unexpected '{other}'")),
        }
    }
    if !ended {
        return syntax(text.lines().count(), "missing 'end'");
    }
    let Some(start) = start else {
        return syntax(text.lines().count(), "missing 'start'");
    };
    Ok(Certificate { start, steps })
}

#[cfg(test)]
mod tests {
    use super::super::{chain_kod0, chain_kod1};
    use super::*;
    use crate::invariants::standard::{elliptic, enriques, k3};

    #[test]
    fn hash_is_stable_and_short() {
        let h = descriptor_hash(&k3());
        assert_eq!(h.len(), 16);
        assert_eq!(h, descriptor_hash(&k3()));
        assert_ne!(h, descriptor_hash(&enriques()));
    }

    #[test]
    fn round_trip() {
        for c in [
            chain_kod0(&enriques()).unwrap(),
            chain_kod1(&elliptic(0, vec![2, 3, 7], 0, 0)).unwrap(),
        ] {
            let text = c.to_string();
            assert_eq!(parse_certificate(&text).unwrap(), c);
        }
    }

    #[test]
    fn identity_round_trip() {
        let c = Certificate::identity(k3());
        assert_eq!(parse_certificate(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn tampered_node_is_caught() {
        let text = chain_kod0(&enriques())
            .unwrap()
            .to_string()
            .replacen("pg=1", "pg=2", 1);
        assert!(parse_certificate(&text).is_err());
    }

    #[test]
    fn bad_step_numbering() {
        let text = chain_kod0(&enriques())
            .unwrap()
            .to_string()
            .replace("step 2:", "step 5:");
        assert!(matches!(
            parse_certificate(&text),
            Err(CertificateParseError::Syntax { .. })
        ));
    }

    #[test]
    fn group_with_commas_survives() {
        let mv = QedMove::cover(120, "SL(2,5)", "Step-I-orbifold").with_param("note", "x");
        assert_eq!(parse_move(1, &mv.render()).unwrap(), mv);
    }
}
