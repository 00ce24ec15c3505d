use hilb_cli::cert::Report;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hilb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilb")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name).display().to_string()
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("hilb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn compute_examples() {
    let o = hilb(&["compute", "--expr", "[L(2),q(3,l)]", "--vector", "v"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "0".into()));
    let o = hilb(&["compute", "--expr", "q(-1,c)", "--vector", "v"]);
    assert_eq!(stdout(&o), "0");
    let o = hilb(&["compute", "--expr", "G(2,c)", "--vector", "1/2 q(1,1)^2 v"]);
    assert_eq!(stdout(&o), "q(1,1) q(1,c) v");
    let o = hilb(&["compute", "--expr", "q(-2,c) q(2,1)", "--surface", &config("k3_rho1.cfg")]);
    assert_eq!(stdout(&o), "-2 v");
}

#[test]
fn compute_parse_error_has_position() {
    let o = hilb(&["compute", "--expr", "q(1,", "--vector", "v"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at"));
}

#[test]
fn verify_heisenberg_on_config() {
    let out = tmp("heis.json");
    let o = hilb(&["verify", "--suite", "heisenberg", "--max-mode", "3", "--max-weight", "4", "--surface", &config("k3_rho1.cfg"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.schema, 1);
    assert!(r.summary.total > 0 && r.summary.failed == 0);
    assert!(r.certificates.iter().all(|c| c.bounds["max_weight"] == 4));
}

#[test]
fn exit_codes() {
    let o = hilb(&["verify", "--suite", "kimura", "--b", "2", "--b-model", "3", "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL kimura"));
    let o = hilb(&["verify", "--suite", "lqw", "--surface", &config("general_t_nonzero.cfg")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("J/G(k≥4) require c_1 = 0"));
    let o = hilb(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hilb(&["verify", "--suite", "chern", "--max-weight", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_merges_and_dedups() {
    let (a, b) = (tmp("a.json"), tmp("b.json"));
    assert_eq!(hilb(&["verify", "--suite", "kimura", "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(hilb(&["verify", "--suite", "kimura,shapovalov", "--max-level", "3", "--out", b.to_str().unwrap()]).status.code(), Some(0));
    let merged = tmp("m.json");
    let o = hilb(&["report", a.to_str().unwrap(), b.to_str().unwrap(), "--format", "json", "--out", merged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&merged).unwrap()).unwrap();
    // kimura appears in both inputs and is counted once
    assert_eq!(r.summary.by_identity["kimura"], [3, 0]);
    assert_eq!(r.summary.total, 3 + 20 * 2 + 1);

    let bad = tmp("bad.json");
    hilb(&["verify", "--suite", "kimura", "--b", "1", "--b-model", "3", "--out", bad.to_str().unwrap()]);
    assert_eq!(hilb(&["report", a.to_str().unwrap(), bad.to_str().unwrap()]).status.code(), Some(1));
    std::fs::write(tmp("junk.json"), "{").unwrap();
    assert_eq!(hilb(&["report", tmp("junk.json").to_str().unwrap()]).status.code(), Some(2));
}
