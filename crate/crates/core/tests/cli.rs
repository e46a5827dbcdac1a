use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use awarekit::Report;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn awarekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_awarekit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn unaware_of_q_prints_false() {
    let o = awarekit(&["check", p(&fixture("fig1L.model")), "--formula", "a_1 q", "--state", "pq:pq"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "False");
}

#[test]
fn check_without_state_lists_every_state() {
    let o = awarekit(&["check", p(&fixture("fig1R.model")), "--formula", "l_1 q", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 9);
    assert!(out.contains("p,q:pq\tTrue"));
    assert!(out.contains(":*\tUndefined"));
}

#[test]
fn fixtures_validate() {
    for f in ["fig1L.model", "fig1R.model"] {
        let o = awarekit(&["validate", p(&fixture(f)), "--suites"]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
}

#[test]
fn transform_then_equiv_has_no_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.fh");
    let o = awarekit(&["transform", p(&fixture("fig1R.model")), "--to", "fh", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let o = awarekit(&["--format", "data", "equiv", p(&fixture("fig1R.model")), p(&out), "--via", "fh", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let report: Report = serde_json::from_value(v["report"].clone()).unwrap();
    assert!(report.violations.is_empty());
}

#[test]
fn round_trip_through_fh_and_back() {
    let dir = tempfile::tempdir().unwrap();
    let fh = dir.path().join("k.fh");
    let back = dir.path().join("back.model");
    let cat = dir.path().join("cat");
    assert_eq!(awarekit(&["transform", p(&fixture("fig1L.model")), "--to", "fh", "--out", p(&fh)]).status.code(), Some(0));
    let o = awarekit(&["transform", p(&fh), "--to", "hms", "--minimize", "--out", p(&back), "--dump-category", p(&cat)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(cat.join("category.json").exists());
    assert!(cat.join("p_q.model").exists());
    let o = awarekit(&["equiv", p(&fh), p(&back), "--via", "hms"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn input_errors_exit_two() {
    let l = fixture("fig1L.model");
    let cases: [&[&str]; 6] = [
        &["check", p(&l), "--formula", "a_1 ("],
        &["check", p(&l), "--formula", "p", "--state", "nowhere"],
        &["validate", "/no/such/file.model"],
        &["transform", p(&l), "--to", "sideways"],
        &["transform", p(&l), "--to", "hms"],
        &["fuzz", "--caps", "0,1,1"],
    ];
    for args in cases {
        let o = awarekit(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(awarekit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn broken_model_exits_one() {
    let text = std::fs::read_to_string(fixture("fig1L.model")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    // pq no longer considers itself possible under lambda
    v["lambda"]["1"]["p,q:pq"] = serde_json::json!(["p,q:~pq"]);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.model");
    std::fs::write(&f, v.to_string()).unwrap();
    let o = awarekit(&["validate", p(&f)]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn proofs_accept_and_reject() {
    let o = awarekit(&["lpa", "check", p(&fixture("proofs/awareness-double-negation.proof"))]);
    assert_eq!(o.status.code(), Some(0));
    let o = awarekit(&["--format", "data", "lpa", "check", p(&fixture("proofs/corrupted/mp-swapped.proof"))]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failure"]["line"], 5);
}

#[test]
fn small_fuzz_runs_clean() {
    let o = awarekit(&["fuzz", "--trials", "3", "--caps", "2,3,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = awarekit(&["lpa", "fuzz", "--trials", "3", "--class", "implicit"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn gen_writes_a_valid_model() {
    let dir = tempfile::tempdir().unwrap();
    for fam in ["fh", "hms", "implicit-hms"] {
        let f = dir.path().join(format!("{fam}.model"));
        assert_eq!(awarekit(&["gen", "--seed", "11", "--family", fam, "--out", p(&f)]).status.code(), Some(0));
        assert_eq!(awarekit(&["validate", p(&f)]).status.code(), Some(0), "{fam}");
    }
}

#[test]
fn atom_cap_is_configurable() {
    let o = Command::new(env!("CARGO_BIN_EXE_awarekit"))
        .args(["gen", "--seed", "1", "--caps", "2,2,1"])
        .env("AWAREKIT_MAX_ATOMS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dot_export_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("l.dot");
    assert_eq!(awarekit(&["validate", p(&fixture("fig1L.model")), "--dot", p(&dot)]).status.code(), Some(0));
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}
