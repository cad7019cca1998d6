use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superop-norms"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn value_of(o: &Output) -> f64 {
    let v: serde_json::Value = serde_json::from_str(stdout(o).trim()).unwrap();
    v["value"].as_f64().unwrap()
}

fn example_file(dir: &Path, name: &str, difference: bool) -> PathBuf {
    let mut args = vec!["example", name];
    if difference {
        args.push("--difference");
    }
    let o = run(&args);
    assert!(o.status.success());
    write(dir, "channel.json", &stdout(&o))
}

#[test]
fn schatten_of_identity() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "id.json", r#"{"rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}"#);
    let m = m.to_str().unwrap();
    let o = run(&["schatten", m, "--p", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2.000000000000\n");
    let o = run(&["schatten", m, "--p", "inf"]);
    assert_eq!(stdout(&o), "1.000000000000\n");
}

#[test]
fn schatten_of_complex_diagonal() {
    let dir = TempDir::new().unwrap();
    let m = write(
        dir.path(),
        "d.json",
        r#"{"rows":4,"cols":4,"entries":[[0.5,0],[0,0],[0,0],[0,0],[0,0],[0,0.5],[0,0],[0,0],[0,0],[0,0],[-0.5,0],[0,0],[0,0],[0,0],[0,0],[0,-0.5]]}"#,
    );
    let o = run(&["schatten", m.to_str().unwrap(), "--p", "1"]);
    assert_eq!(stdout(&o), "2.000000000000\n");
}

#[test]
fn transpose_norm_grows_with_ancilla() {
    let dir = TempDir::new().unwrap();
    let ch = example_file(dir.path(), "transpose(2)", false);
    let ch = ch.to_str().unwrap();
    let plain = run(&["norm", ch, "--q", "1", "--p", "1"]);
    assert_eq!(plain.status.code(), Some(0));
    assert!((value_of(&plain) - 1.0).abs() < 2e-3);
    let stab = run(&["norm", ch, "--q", "1", "--p", "1", "--stabilize", "2"]);
    assert!((value_of(&stab) - 2.0).abs() < 2e-3);
    let diamond = run(&["stabilized", ch, "--p", "1"]);
    assert!((value_of(&diamond) - 2.0).abs() < 2e-3);
}

#[test]
fn hermitian_restriction_on_dim4_difference() {
    let dir = TempDir::new().unwrap();
    let ch = example_file(dir.path(), "dim4_pair", true);
    let ch = ch.to_str().unwrap();
    let plain = run(&["norm", ch, "--q", "1", "--p", "1"]);
    assert!((value_of(&plain) - 2.0).abs() < 2e-3);
    let herm = run(&["norm", ch, "--q", "1", "--p", "1", "--hermitian"]);
    assert!((value_of(&herm) - 2f64.sqrt()).abs() < 2e-3);
}

#[test]
fn norm_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let ch = example_file(dir.path(), "qinf_nonhermitian", false);
    let args = ["norm", ch.to_str().unwrap(), "--q", "inf", "--p", "2", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert!(v["converged"].is_boolean());
    assert!(v["restarts_used"].as_u64().unwrap() >= 1);
}

#[test]
fn verify_reports_and_exit_codes() {
    let o = run(&["verify", "--suite", "monotone_p", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["claim_id"], "monotone_p");
    assert_eq!(report["passed"], true);
    assert_eq!(report["trials"], 20);
    let o = run(&["verify", "--suite", "no_such_suite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explore_reports_entries() {
    let dir = TempDir::new().unwrap();
    let ch = example_file(dir.path(), "transpose(2)", false);
    let o = run(&["explore", ch.to_str().unwrap(), "--question", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["question"], "ancilla_stability");
    assert_eq!(report["entries"].as_array().unwrap().len(), 4);
    let o = run(&["explore", ch.to_str().unwrap(), "--question", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_input_exits_with_usage_code() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"rows\": 2, \"cols\": 2, \"entries\": [[1, 0]]}");
    let bad = bad.to_str().unwrap();
    assert_eq!(run(&["schatten", bad, "--p", "1"]).status.code(), Some(2));
    assert_eq!(run(&["norm", bad, "--q", "1", "--p", "1"]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["schatten", missing.to_str().unwrap(), "--p", "1"]).status.code(), Some(2));
    let ok = write(dir.path(), "ok.json", r#"{"rows":1,"cols":1,"entries":[[1,0]]}"#);
    let o = run(&["schatten", ok.to_str().unwrap(), "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(run(&["example", "nope"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}
