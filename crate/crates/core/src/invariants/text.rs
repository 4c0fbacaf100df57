//! One-record text format:
//!
//! ```text
//! surface { kod=1 b1=2 q=1 pg=1 k2=0 e=12 minimal=true tag=ProperlyElliptic
//!           fibration { g=1 mult=[2,3] section=false } }
//! ```
//!
//! Optional keys: `name`, `blowups`, `sing=[A1,D4]`, a `fibration` block
//! (`g mult section fibers euler`) and a `cover { deg=N ... }` block holding
//! the body of a second record.

use std::fmt;

use thiserror::Error;

use super::{
    ClassKind, CoverData, FiberType, FibrationData, InvariantError, KodairaDim, RdpType,
    SurfaceDescriptor,
};
use crate::quaternion::ClassTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = self.location(pos);
        Err(ParseError::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.error_at(self.pos, format!("expected '{c}', found '{x}'")),
            None => self.error_at(self.pos, format!("expected '{c}', found end of input")),
        }
    }

    fn word(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_whitespace() || "{}=[]".contains(c) {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return self.error_at(start, "expected a word");
        }
        Ok((self.chars[start..self.pos].iter().collect(), start))
    }

    /// A value: a bracketed list, a parenthesised tag, or a bare word.
    fn value(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0i32;
        while let Some(&c) = self.chars.get(self.pos) {
            match c {
                '[' | '(' => depth += 1,
                ']' | ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return self.error_at(self.pos, format!("unbalanced '{c}'"));
                    }
                }
                '}' if depth == 0 => break,
                c if c.is_whitespace() && depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        if depth != 0 {
            return self.error_at(start, "unterminated value");
        }
        if start == self.pos {
            return self.error_at(start, "expected a value");
        }
        Ok((self.chars[start..self.pos].iter().collect(), start))
    }
}

fn parse_num<T: std::str::FromStr>(
    cur: &Cursor,
    (text, pos): &(String, usize),
    key: &str,
) -> Result<T, ParseError> {
    text.parse()
        .or_else(|_| cur.error_at(*pos, format!("{key}: '{text}' is not a valid number")))
}

fn parse_bool(cur: &Cursor, (text, pos): &(String, usize), key: &str) -> Result<bool, ParseError> {
    match text.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => cur.error_at(*pos, format!("{key}: expected true or false")),
    }
}

fn list_items<'t>(
    cur: &Cursor,
    (text, pos): &'t (String, usize),
    key: &str,
) -> Result<Vec<&'t str>, ParseError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .map_or_else(
            || cur.error_at(*pos, format!("{key}: expected a [list]")),
            Ok,
        )?;
    Ok(inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect())
}

fn split_letter_index(item: &str) -> Option<(char, u32)> {
    let mut chars = item.chars();
    let letter = chars.next()?;
    let n = chars.as_str().parse().ok()?;
    Some((letter, n))
}

fn parse_kod(cur: &Cursor, v: &(String, usize)) -> Result<KodairaDim, ParseError> {
    Ok(match v.0.as_str() {
        "-inf" | "-infinity" => KodairaDim::MinusInfinity,
        "0" => KodairaDim::Zero,
        "1" => KodairaDim::One,
        "2" => KodairaDim::Two,
        other => return cur.error_at(v.1, format!("kod: unknown value '{other}'")),
    })
}

fn parse_tag(cur: &Cursor, v: &(String, usize)) -> Result<ClassKind, ParseError> {
    Ok(match v.0.as_str() {
        "Ruled" => ClassKind::Ruled,
        "Torus" => ClassKind::Torus,
        "K3" => ClassKind::K3,
        "Enriques" => ClassKind::Enriques,
        "Hyperelliptic" => ClassKind::Hyperelliptic,
        "KodairaPrimary" => ClassKind::KodairaPrimary,
        "KodairaSecondary" => ClassKind::KodairaSecondary,
        "ProperlyElliptic" => ClassKind::ProperlyElliptic,
        "GeneralType" => ClassKind::GeneralType,
        other => {
            let inner = other
                .strip_prefix("PolydiskQuotient(")
                .and_then(|t| t.strip_suffix(')'))
                .map_or_else(
                    || cur.error_at(v.1, format!("tag: unknown class '{other}'")),
                    Ok,
                )?;
            let tag: ClassTag = inner
                .parse()
                .or_else(|e| cur.error_at(v.1, format!("tag: {e}")))?;
            ClassKind::PolydiskQuotient(tag)
        }
    })
}

fn parse_fibration(cur: &mut Cursor) -> Result<FibrationData, ParseError> {
    cur.expect('{')?;
    let mut fib = FibrationData::new(0, Vec::new());
    let mut seen: Vec<String> = Vec::new();
    let mut have_g = false;
    let mut have_mult = false;
    loop {
        if cur.peek() == Some('}') {
            cur.pos += 1;
            break;
        }
        let (key, kpos) = cur.word()?;
        if seen.contains(&key) {
            return cur.error_at(kpos, format!("duplicate key '{key}'"));
        }
        cur.expect('=')?;
        let v = cur.value()?;
        match key.as_str() {
            "g" => {
                fib.base_genus = parse_num(cur, &v, "g")?;
                have_g = true;
            }
            "mult" => {
                let mut m = Vec::new();
                for item in list_items(cur, &v, "mult")? {
                    m.push(parse_num(cur, &(item.to_string(), v.1), "mult")?);
                }
                fib.multiplicities = m;
                have_mult = true;
            }
            "section" => fib.has_section = parse_bool(cur, &v, "section")?,
            "fibers" => {
                let mut out = Vec::new();
                for item in list_items(cur, &v, "fibers")? {
                    out.push(match (item, split_letter_index(item)) {
                        ("Other", _) => FiberType::Other,
                        (_, Some(('D', n))) => FiberType::D(n),
                        (_, Some(('E', n))) => FiberType::E(n),
                        _ => {
                            return cur
                                .error_at(v.1, format!("fibers: unknown fibre type '{item}'"))
                        }
                    });
                }
                fib.singular_fibers = out;
            }
            "euler" => fib.euler_contribution = parse_num(cur, &v, "euler")?,
            _ => return cur.error_at(kpos, format!("unknown fibration key '{key}'")),
        }
        seen.push(key);
    }
    if !have_g || !have_mult {
        return cur.error_at(cur.pos, "fibration needs g and mult");
    }
    // Sortedness and bounds are checked by validation, not normalised away.
    Ok(fib)
}

/// Parses the `{ ... }` body of a record.
fn parse_body(
    cur: &mut Cursor,
    allow_deg: bool,
) -> Result<(SurfaceDescriptor, Option<u32>), ParseError> {
    let open = cur.pos;
    cur.expect('{')?;
    let mut seen: Vec<String> = Vec::new();
    let mut d = SurfaceDescriptor::minimal(ClassKind::Ruled, 0, 0, 0, 0, 0);
    let mut kod = None;
    let mut deg = None;
    loop {
        if cur.peek() == Some('}') {
            cur.pos += 1;
            break;
        }
        if cur.peek().is_none() {
            return cur.error_at(cur.pos, "unterminated record");
        }
        let (key, kpos) = cur.word()?;
        if seen.contains(&key) {
            return cur.error_at(kpos, format!("duplicate key '{key}'"));
        }
        match key.as_str() {
            "fibration" => d.fibration = Some(parse_fibration(cur)?),
            "cover" => {
                let (c, n) = parse_body(cur, true)?;
                let Some(n) = n else {
                    return cur.error_at(kpos, "cover needs deg");
                };
                d.cover = Some(CoverData {
                    degree: n,
                    surface: Box::new(c),
                });
            }
            _ => {
                cur.expect('=')?;
                let v = cur.value()?;
                match key.as_str() {
                    "name" => d.name = Some(v.0.clone()),
                    "kod" => kod = Some(parse_kod(cur, &v)?),
                    "b1" => d.b1 = parse_num(cur, &v, "b1")?,
                    "q" => d.q = parse_num(cur, &v, "q")?,
                    "pg" => d.pg = parse_num(cur, &v, "pg")?,
                    "k2" => d.k_squared = parse_num(cur, &v, "k2")?,
                    "e" => d.euler = parse_num(cur, &v, "e")?,
                    "minimal" => d.minimal = parse_bool(cur, &v, "minimal")?,
                    "blowups" => d.blowups = parse_num(cur, &v, "blowups")?,
                    "tag" => d.class_tag = parse_tag(cur, &v)?,
                    "sing" => {
                        let mut out = Vec::new();
                        for item in list_items(cur, &v, "sing")? {
                            out.push(match split_letter_index(item) {
                                Some(('A', n)) => RdpType::A(n),
                                Some(('D', n)) => RdpType::D(n),
                                Some(('E', n)) => RdpType::E(n),
                                _ => {
                                    return cur.error_at(
                                        v.1,
                                        format!("sing: unknown singularity '{item}'"),
                                    )
                                }
                            });
                        }
                        d.singularities = out;
                    }
                    "deg" if allow_deg => deg = Some(parse_num(cur, &v, "deg")?),
                    _ => return cur.error_at(kpos, format!("unknown key '{key}'")),
                }
            }
        }
        seen.push(key);
    }
    for required in ["kod", "b1", "q", "pg", "k2", "e", "minimal", "tag"] {
        if !seen.iter().any(|k| k == required) {
            return cur.error_at(open, format!("missing key '{required}'"));
        }
    }
    d.kodaira_dim = kod.expect("kod is required");
    Ok((d, deg))
}

/// Parses and validates a single `surface { ... }` record.
pub fn parse_descriptor(text: &str) -> Result<SurfaceDescriptor, ParseError> {
    let mut cur = Cursor::new(text);
    let (kw, pos) = cur.word()?;
    if kw != "surface" {
        return cur.error_at(pos, format!("expected 'surface', found '{kw}'"));
    }
    let (d, _) = parse_body(&mut cur, false)?;
    if let Some(c) = cur.peek() {
        return cur.error_at(cur.pos, format!("trailing input starting with '{c}'"));
    }
    d.validate()?;
    Ok(d)
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn write_body(f: &mut fmt::Formatter<'_>, d: &SurfaceDescriptor, deg: Option<u32>) -> fmt::Result {
    f.write_str("{ ")?;
    if let Some(n) = deg {
        write!(f, "deg={n} ")?;
    }
    if let Some(name) = &d.name {
        write!(f, "name={name} ")?;
    }
    write!(
        f,
        "kod={} b1={} q={} pg={} k2={} e={} minimal={} ",
        d.kodaira_dim, d.b1, d.q, d.pg, d.k_squared, d.euler, d.minimal
    )?;
    if d.blowups > 0 {
        write!(f, "blowups={} ", d.blowups)?;
    }
    write!(f, "tag={} ", d.class_tag)?;
    if !d.singularities.is_empty() {
        write!(f, "sing=[{}] ", join(&d.singularities))?;
    }
    if let Some(fib) = &d.fibration {
        write!(
            f,
            "fibration {{ g={} mult=[{}] section={} ",
            fib.base_genus,
            join(&fib.multiplicities),
            fib.has_section
        )?;
        if !fib.singular_fibers.is_empty() {
            write!(f, "fibers=[{}] ", join(&fib.singular_fibers))?;
        }
        if fib.euler_contribution != 0 {
            write!(f, "euler={} ", fib.euler_contribution)?;
        }
        f.write_str("} ")?;
    }
    if let Some(c) = &d.cover {
        f.write_str("cover ")?;
        write_body(f, &c.surface, Some(c.degree))?;
        f.write_str(" ")?;
    }
    f.write_str("}")
}

impl fmt::Display for SurfaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("surface ")?;
        write_body(f, self, None)
    }
}
