//! The `qed-cert` command line. [`run`] never panics on bad input and maps
//! every outcome to an exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | ok, equivalent |
//! | 1 | obstructed, verification or invariant violation |
//! | 2 | unknown |
//! | 3 | usage, syntax or I/O error |

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::invariants::{
    classify_kod0, parse_descriptor, KodairaDim, ParseError, SurfaceDescriptor,
};
use crate::kodaira_group::{
    fixed_point_set, parse_data, verify_presentation, AffineAuto, ExactComplex,
};
use crate::orbifold::{
    exceptional_case, find_good_quotient, presentation, verify_witness, Exceptional, OrbifoldError,
    OrbifoldSignature, SearchBound, DEFAULT_ORDER_BOUND,
};
use crate::qed_engine::{
    decide_equivalence_with, parse_certificate, t_chain, verify_certificate, verify_t_chain,
    Decision,
};
use crate::quaternion::{
    class_tag, construct_s_with, enumerate_classes, split_prime, verify_torsion_free, FieldScope,
    PrimeIdeal, QuaternionError, RamificationSet, RealQuadraticField, Splitting, TorsionCheck,
    SCAN_CAP,
};

pub const SEARCH_BOUND_ENV: &str = "QED_CERT_SEARCH_BOUND";

#[derive(Parser, Debug)]
#[command(
    name = "qed-cert",
    version,
    about = "Q.E.D. certificates for compact complex surfaces"
)]
pub struct Cli {
    /// Print a JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a descriptor and report its invariants.
    Classify { file: PathBuf },
    /// Decide equivalence of two descriptors and emit a certificate.
    Chain {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Largest group order tried in orbifold searches.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Re-check certificates.
    Verify {
        #[arg(required_unless_present = "dir", conflicts_with = "dir")]
        cert: Option<PathBuf>,
        /// Verify every file in a directory.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Presentation and good finite quotient of an orbifold group.
    Orbifold {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',')]
        mult: Vec<u32>,
        #[arg(long)]
        bound: Option<u64>,
    },
    #[command(subcommand)]
    Quaternion(QuaternionCommand),
    #[command(subcommand)]
    Kodaira(KodairaCommand),
    /// The birational/deformation chain from an n-fold to P^n.
    Tchain {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum QuaternionCommand {
    /// Build a torsion-free ramification set.
    Construct {
        #[arg(long)]
        d: i64,
    },
    /// Check a ramification set given as p:f or p:1:index entries.
    Verify {
        #[arg(long)]
        d: i64,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<String>,
    },
    /// List class tags of torsion-free sets below a prime bound.
    Enumerate {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum KodairaCommand {
    /// Check the group law of generator data.
    Verify {
        #[arg(long)]
        data: PathBuf,
    },
    /// Fixed locus of (z1, z2) -> (sigma z1 + h1 z2 + h0, z2 + h2).
    FixedPoint(FixedPointArgs),
}

#[derive(Args, Debug)]
pub struct FixedPointArgs {
    #[arg(long, allow_hyphen_values = true)]
    sigma: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    h1: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    h0: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    h2: String,
}

#[derive(Serialize)]
struct Envelope {
    status: &'static str,
    result: Value,
    violations: Vec<String>,
}

struct Outcome {
    code: i32,
    status: &'static str,
    text: String,
    result: Value,
    violations: Vec<String>,
}

impl Outcome {
    fn new(code: i32, status: &'static str, text: String, result: Value) -> Self {
        Self {
            code,
            status,
            text,
            result,
            violations: Vec::new(),
        }
    }

    fn violations(text: String, violations: Vec<String>) -> Self {
        Self {
            code: 1,
            status: "violation",
            text,
            result: Value::Null,
            violations,
        }
    }
}

/// An error that stops a command before it produces a result.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_descriptor(path: &Path) -> Result<SurfaceDescriptor, Failure> {
    parse_descriptor(&read(path)?).map_err(|e| match e {
        ParseError::Syntax { .. } => usage(format!("{}: {e}", path.display())),
        ParseError::Invariant(_) => Failure {
            code: 1,
            message: format!("{}: {e}", path.display()),
        },
    })
}

fn field(d: i64) -> Result<RealQuadraticField, Failure> {
    RealQuadraticField::new(d).map_err(|e| usage(e.to_string()))
}

/// `--bound` wins over the environment, which wins over the default.
fn search_bound(flag: Option<u64>) -> Result<SearchBound, Failure> {
    if let Some(n) = flag {
        return Ok(SearchBound::Limited(n));
    }
    match std::env::var(SEARCH_BOUND_ENV) {
        Ok(v) if v == "unlimited" => Ok(SearchBound::Unlimited),
        Ok(v) => v
            .parse()
            .map(SearchBound::Limited)
            .map_err(|_| usage(format!("{SEARCH_BOUND_ENV}={v:?} is not a number"))),
        Err(_) => Ok(SearchBound::Limited(DEFAULT_ORDER_BOUND)),
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn classify(file: &Path) -> Result<Outcome, Failure> {
    let d = load_descriptor(file)?;
    let mut text = format!(
        "kod={} class={} chi={} kahler={} minimal={}\n",
        d.kodaira_dim,
        d.class_tag,
        d.chi(),
        d.is_kahler(),
        d.minimal
    );
    if d.kodaira_dim == KodairaDim::Zero && d.minimal {
        if let Ok(c) = classify_kod0(&d) {
            text.push_str(&format!("kappa-0 class from (b1, q, pg): {c}\n"));
        }
    }
    let result = json!({
        "kodaira_dim": d.kodaira_dim.to_string(),
        "class": d.class_tag.to_string(),
        "chi": d.chi(),
        "kahler": d.is_kahler(),
        "descriptor": d.to_string(),
    });
    Ok(Outcome::new(0, "ok", text, result))
}

fn chain(from: &Path, to: &Path, bound: Option<u64>) -> Result<Outcome, Failure> {
    let (a, b) = (load_descriptor(from)?, load_descriptor(to)?);
    Ok(
        match decide_equivalence_with(&a, &b, search_bound(bound)?) {
            Decision::Equivalent(c) => {
                let result = json!({ "certificate": c.to_string(), "steps": c.len(), "algebraic": c.is_algebraic() });
                Outcome::new(0, "equivalent", c.to_string(), result)
            }
            Decision::Obstructed(o) => Outcome::new(
                1,
                "obstructed",
                format!("obstructed: {o}\n"),
                json!({ "reason": o.to_string() }),
            ),
            Decision::Unknown(why) => Outcome::new(
                2,
                "unknown",
                format!("unknown: {why}\n"),
                json!({ "reason": why }),
            ),
        },
    )
}

/// Exit code and violations of one certificate file.
fn verify_file(path: &Path) -> (i32, Vec<String>) {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return (3, vec![e.to_string()]),
    };
    match parse_certificate(&text) {
        Err(e) => (3, vec![e.to_string()]),
        Ok(c) => match verify_certificate(&c) {
            Ok(()) => (0, Vec::new()),
            Err(vs) => (1, vs.iter().map(|v| v.to_string()).collect()),
        },
    }
}

fn verify(cert: Option<&Path>, dir: Option<&Path>) -> Result<Outcome, Failure> {
    if let Some(path) = cert {
        let (code, violations) = verify_file(path);
        return match code {
            0 => Ok(Outcome::new(0, "ok", "ok\n".into(), Value::Null)),
            3 => Err(usage(format!(
                "{}: {}",
                path.display(),
                violations.join("; ")
            ))),
            _ => Ok(Outcome::violations(
                violations.iter().map(|v| format!("{v}\n")).collect(),
                violations,
            )),
        };
    }
    let dir = dir.expect("clap requires cert or dir");
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let results: Vec<(i32, Vec<String>)> = files.par_iter().map(|p| verify_file(p)).collect();
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut all = Vec::new();
    for (path, (code, vs)) in files.iter().zip(&results) {
        let label = match code {
            0 => "ok".to_string(),
            3 => format!("error: {}", vs.join("; ")),
            _ => format!("{} violation(s)", vs.len()),
        };
        text.push_str(&format!("{}: {label}\n", path.display()));
        all.extend(vs.iter().map(|v| format!("{}: {v}", path.display())));
        entries.push(json!({ "file": path.display().to_string(), "code": code, "violations": vs }));
    }
    let code = results.iter().map(|(c, _)| *c).max().unwrap_or(0);
    let status = match code {
        0 => "ok",
        1 => "violation",
        _ => "error",
    };
    Ok(Outcome {
        code,
        status,
        text,
        result: Value::Array(entries),
        violations: all,
    })
}

fn orbifold(genus: u32, mult: Vec<u32>, bound: Option<u64>) -> Result<Outcome, Failure> {
    let sig = OrbifoldSignature::new(genus, mult).map_err(|e| usage(e.to_string()))?;
    let mut text = format!("signature {sig}\n{}", presentation(&sig));
    let ab = presentation(&sig).abelianization();
    text.push_str(&format!("abelianization: {ab}\n"));
    match exceptional_case(&sig) {
        Exceptional::NonExceptional => {}
        e => {
            text.push_str(&format!("exceptional: {e:?}\n"));
            return Ok(Outcome::new(
                1,
                "obstructed",
                text,
                json!({ "exceptional": format!("{e:?}") }),
            ));
        }
    }
    match find_good_quotient(&sig, search_bound(bound)?) {
        Ok(w) => {
            if let Err(e) = verify_witness(&sig, &w) {
                return Ok(Outcome::violations(text, vec![e.to_string()]));
            }
            text.push_str(&w.to_string());
            Ok(Outcome::new(0, "ok", text, to_json(&w)))
        }
        Err(e @ OrbifoldError::NotFoundWithinBound(_)) => {
            text.push_str(&format!("{e}\n"));
            Ok(Outcome::new(2, "unknown", text, Value::Null))
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

fn quaternion_error(e: QuaternionError) -> Failure {
    match e {
        QuaternionError::ScanExhausted(_) => Failure {
            code: 2,
            message: e.to_string(),
        },
        _ => usage(e.to_string()),
    }
}

/// `p:2` inert, `p:1` ramified (or the first split prime), `p:1:i` split.
fn parse_ideal(k: &RealQuadraticField, spec: &str) -> Result<PrimeIdeal, Failure> {
    let bad = || {
        usage(format!(
            "bad prime ideal {spec:?}; expected p:f or p:1:index"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let p: u64 = parts.first().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let f: u8 = parts.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let index: u8 = match parts.get(2) {
        Some(s) => s.parse().map_err(|_| bad())?,
        None => 0,
    };
    if parts.len() > 3 {
        return Err(bad());
    }
    let ideal = match (k.splitting(p), f) {
        (Splitting::Inert, 2) => PrimeIdeal::inert(p),
        (Splitting::Ramified, 1) => PrimeIdeal::ramified(p),
        (Splitting::Split, 1) => PrimeIdeal::split(p, index),
        _ => {
            return Err(usage(format!(
                "{p} has no prime of residue degree {f} in {k}"
            )))
        }
    };
    let valid = split_prime(k, p)
        .map_err(quaternion_error)?
        .contains(&ideal);
    if valid {
        Ok(ideal)
    } else {
        Err(usage(format!("{spec} is not a prime ideal of {k}")))
    }
}

fn quaternion(cmd: QuaternionCommand) -> Result<Outcome, Failure> {
    match cmd {
        QuaternionCommand::Construct { d } => {
            let k = field(d)?;
            let c =
                construct_s_with(&k, FieldScope::Quadratic, SCAN_CAP).map_err(quaternion_error)?;
            let tag = class_tag(&c.set);
            let check = verify_torsion_free(&c.set);
            let mut text = format!("{tag}\n");
            if !check.is_ok() {
                text.push_str(&format!("torsion check failed: {check:?}\n"));
            }
            let result = json!({
                "tag": tag.to_string(),
                "witnesses": c.witnesses.iter().map(|(_, p)| p.to_string()).collect::<Vec<_>>(),
                "padding": c.padding.map(|p| p.to_string()),
                "torsion_free": check.is_ok(),
            });
            Ok(Outcome::new(
                if check.is_ok() { 0 } else { 1 },
                "ok",
                text,
                result,
            ))
        }
        QuaternionCommand::Verify { d, primes } => {
            let k = field(d)?;
            let ideals = primes
                .iter()
                .map(|s| parse_ideal(&k, s))
                .collect::<Result<Vec<_>, _>>()?;
            let set = RamificationSet::new(k, ideals).map_err(quaternion_error)?;
            let tag = class_tag(&set);
            Ok(match verify_torsion_free(&set) {
                TorsionCheck::Ok => Outcome::new(
                    0,
                    "ok",
                    format!("ok {tag}\n"),
                    json!({ "tag": tag.to_string() }),
                ),
                TorsionCheck::FailingTorsion(m) => {
                    let v = format!("torsion of order {m} is not excluded");
                    Outcome::violations(format!("{v}\n"), vec![v])
                }
            })
        }
        QuaternionCommand::Enumerate { d, bound } => {
            let k = field(d)?;
            let tags = enumerate_classes(&k, bound).map_err(quaternion_error)?;
            let text: String = tags.iter().map(|t| format!("{t}\n")).collect();
            let result = Value::Array(tags.iter().map(|t| Value::String(t.to_string())).collect());
            Ok(Outcome::new(0, "ok", text, result))
        }
    }
}

fn exact(flag: &str, s: &str) -> Result<ExactComplex, Failure> {
    s.parse().map_err(|e| usage(format!("--{flag}: {e}")))
}

fn kodaira(cmd: KodairaCommand) -> Result<Outcome, Failure> {
    match cmd {
        KodairaCommand::Verify { data } => {
            let d =
                parse_data(&read(&data)?).map_err(|e| usage(format!("{}: {e}", data.display())))?;
            if let Err(e) = d.validate() {
                return Ok(Outcome::violations(format!("{e}\n"), vec![e.to_string()]));
            }
            Ok(match verify_presentation(&d) {
                Ok(sign) => Outcome::new(
                    0,
                    "ok",
                    format!("ok sign={sign:+}\n"),
                    json!({ "sign": sign }),
                ),
                Err(e) => Outcome::violations(format!("{e}\n"), vec![e.to_string()]),
            })
        }
        KodairaCommand::FixedPoint(a) => {
            let phi = AffineAuto::new(
                exact("sigma", &a.sigma)?,
                exact("h1", &a.h1)?,
                exact("h0", &a.h0)?,
                exact("h2", &a.h2)?,
            );
            Ok(match phi {
                Ok(phi) => {
                    let set = fixed_point_set(&phi);
                    Outcome::new(0, "ok", format!("{set:?}\n"), to_json(&set))
                }
                Err(e) => Outcome::violations(format!("{e}\n"), vec![e.to_string()]),
            })
        }
    }
}

fn tchain(n: u32, d: u32) -> Result<Outcome, Failure> {
    if n == 0 || d == 0 {
        return Err(usage("tchain needs n >= 1 and d >= 1"));
    }
    let steps = t_chain(n, d);
    let mut text: String = steps
        .iter()
        .enumerate()
        .map(|(i, s)| format!("step {}: {s}\n", i + 1))
        .collect();
    let result = to_json(&steps);
    match verify_t_chain(n, &steps) {
        Ok(()) => Ok(Outcome::new(0, "ok", text, result)),
        Err(e) => {
            text.push_str(&format!("{e}\n"));
            Ok(Outcome {
                violations: vec![e],
                ..Outcome::violations(text, Vec::new())
            })
        }
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Classify { file } => classify(&file),
        Command::Chain { from, to, bound } => chain(&from, &to, bound),
        Command::Verify { cert, dir } => verify(cert.as_deref(), dir.as_deref()),
        Command::Orbifold { genus, mult, bound } => orbifold(genus, mult, bound),
        Command::Quaternion(q) => quaternion(q),
        Command::Kodaira(k) => kodaira(k),
        Command::Tchain { n, d } => tchain(n, d),
    }
}

/// Runs one command line; results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    3
                }
            };
        }
    };
    let json_mode = cli.json;
    let outcome = match dispatch(cli) {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if json_mode {
                let env = Envelope {
                    status: "error",
                    result: Value::Null,
                    violations: vec![f.message],
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&env).unwrap_or_default());
            }
            return f.code;
        }
    };
    if json_mode {
        let env = Envelope {
            status: outcome.status,
            result: outcome.result,
            violations: outcome.violations,
        };
        let _ = writeln!(out, "{}", serde_json::to_string(&env).unwrap_or_default());
    } else {
        let _ = write!(out, "{}", outcome.text);
        for v in &outcome.violations {
            if !outcome.text.contains(v.as_str()) {
                let _ = writeln!(err, "{v}");
            }
        }
    }
    outcome.code
}
