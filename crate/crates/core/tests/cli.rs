use std::fs;
use std::path::{Path, PathBuf};

use qed_cert::cli::run;
use qed_cert::invariants::standard::{elliptic, enriques, k3, product_elliptic};
use qed_cert::invariants::SurfaceDescriptor;
use qed_cert::qed_engine::chain_kod0;
use serde_json::Value;
use tempfile::TempDir;

fn qed(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("qed-cert").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn descriptor(dir: &Path, name: &str, d: &SurfaceDescriptor) -> String {
    write(dir, name, &d.to_string()).display().to_string()
}

#[test]
fn classify_reports_invariants() {
    let tmp = TempDir::new().unwrap();
    let f = descriptor(tmp.path(), "k3.txt", &k3());
    let (code, out, _) = qed(&["classify", &f]);
    assert_eq!(code, 0);
    assert!(out.contains("kod=0"), "{out}");
    assert!(out.contains("chi=2"), "{out}");
}

#[test]
fn chain_enriques_to_k3_verifies() {
    let tmp = TempDir::new().unwrap();
    let a = descriptor(tmp.path(), "enriques.txt", &enriques());
    let b = descriptor(tmp.path(), "k3.txt", &k3());
    let (code, cert, _) = qed(&["chain", "--from", &a, "--to", &b]);
    assert_eq!(code, 0);
    assert!(cert.starts_with("qed-certificate"));
    let c = write(tmp.path(), "cert.txt", &cert);
    let (code, out, _) = qed(&["verify", c.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "ok\n"));
}

#[test]
fn chain_across_kodaira_dimensions_is_obstructed() {
    let tmp = TempDir::new().unwrap();
    let a = descriptor(tmp.path(), "k3.txt", &k3());
    let b = descriptor(tmp.path(), "e.txt", &product_elliptic(2));
    let (code, out, _) = qed(&["chain", "--from", &a, "--to", &b]);
    assert_eq!(code, 1);
    assert!(out.contains("Siu invariance"), "{out}");
}

#[test]
fn tampered_certificate_is_a_violation() {
    let tmp = TempDir::new().unwrap();
    let mut c = chain_kod0(&enriques()).unwrap();
    c.steps.swap(0, 1);
    let path = write(tmp.path(), "bad.txt", &c.to_string());
    let (code, out, _) = qed(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!out.is_empty());
}

#[test]
fn malformed_input_exits_with_three() {
    let tmp = TempDir::new().unwrap();
    let junk = write(tmp.path(), "junk.txt", "qed-certificate\nstart 00\nend\n");
    assert_eq!(qed(&["verify", junk.to_str().unwrap()]).0, 3);
    let bad = write(tmp.path(), "bad.txt", "surface { kod=7 }");
    assert_eq!(qed(&["classify", bad.to_str().unwrap()]).0, 3);
    assert_eq!(qed(&["classify", "/nonexistent/file"]).0, 3);
    assert_eq!(qed(&["frobnicate"]).0, 3);
    assert_eq!(qed(&["tchain", "--n", "0", "--d", "3"]).0, 3);
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = qed(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn verify_dir_takes_the_worst_code() {
    let tmp = TempDir::new().unwrap();
    let good = chain_kod0(&enriques()).unwrap().to_string();
    write(tmp.path(), "a.txt", &good);
    write(tmp.path(), "b.txt", &good);
    let (code, out, _) = qed(&["verify", "--dir", tmp.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    write(tmp.path(), "c.txt", "not a certificate");
    assert_eq!(qed(&["verify", "--dir", tmp.path().to_str().unwrap()]).0, 3);
}

#[test]
fn json_envelope_has_fixed_keys() {
    let tmp = TempDir::new().unwrap();
    let a = descriptor(tmp.path(), "k3.txt", &k3());
    let b = descriptor(tmp.path(), "e.txt", &elliptic(0, vec![2, 3, 7], 0, 0));
    let (code, out, _) = qed(&["--json", "chain", "--from", &a, "--to", &b]);
    assert_eq!(code, 1);
    let keys: Vec<&str> = out
        .split('"')
        .filter(|k| ["status", "result", "violations"].contains(k))
        .collect();
    assert_eq!(keys, ["status", "result", "violations"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "obstructed");
}

#[test]
fn quaternion_commands() {
    let (code, out, _) = qed(&["quaternion", "enumerate", "--d", "5", "--bound", "100"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 10, "{out}");
    let (code, out, _) = qed(&["quaternion", "construct", "--d", "2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(qed(&["quaternion", "construct", "--d", "4"]).0, 3);
}

#[test]
fn orbifold_triangle_group() {
    let (code, out, _) = qed(&["orbifold", "--genus", "0", "--mult", "2,3,7"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("abelianization: 0"), "{out}");
    let (code, _, _) = qed(&["orbifold", "--genus", "0", "--mult", "5"]);
    assert_eq!(code, 1);
}

#[test]
fn tchain_has_odd_length() {
    let (code, out, _) = qed(&["tchain", "--n", "3", "--d", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 7);
    assert!(out.trim_end().ends_with("P^3"));
}

#[test]
fn kodaira_fixed_point() {
    let (code, _, _) = qed(&["kodaira", "fixed-point", "--sigma", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(qed(&["kodaira", "fixed-point", "--sigma", "x"]).0, 3);
}
