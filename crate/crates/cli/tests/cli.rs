use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cliffmeas"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TWO_CNOT: &str = "qubits 3\n# two cnots\nCNOT 1 2\nCNOT 2 3\n";

#[test]
fn version_mentions_schema() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(&format!("schema {}", cliffmeas::SCHEMA_VERSION)), "{text}");
}

#[test]
fn compile_then_stats_and_simulate() {
    let dir = TempDir::new().unwrap();
    let circ = write(dir.path(), "c.txt", TWO_CNOT);
    let sched = dir.path().join("s.json");
    let out = run(&["compile", "-i", s(&circ), "-o", s(&sched)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sched).unwrap()).unwrap();
    assert_eq!(json["rounds"].as_array().unwrap().len(), 22);
    assert_eq!(json["inventory"]["4n"], 5);
    assert_eq!(json["inventory"]["2n"], 8);

    let out = run(&["stats", "-i", s(&sched)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rounds            22"), "{text}");

    for state in ["all_zero", "all_plus"] {
        let out = run(&["simulate", "-i", s(&sched), "--state", state, "--seed", "4"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["match"], true);
        assert_eq!(report["rounds_executed"], 22);
    }
}

#[test]
fn eleven_stage_and_prune_flags() {
    let dir = TempDir::new().unwrap();
    let circ = write(dir.path(), "c.txt", "qubits 2\nH 1\n");
    let out = run(&["compile", "-i", s(&circ), "--stage-form", "11"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["stage_form"], 11);
    assert_eq!(json["rounds"].as_array().unwrap().len(), 27);

    // the identity has empty phase and Hadamard rounds
    let id = write(dir.path(), "id.txt", "qubits 2\n");
    let out = run(&["compile", "-i", s(&id), "--prune"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["rounds"].as_array().unwrap().len() < 22);
}

#[test]
fn verify_prints_one_report_per_trial() {
    let dir = TempDir::new().unwrap();
    let circ = write(dir.path(), "c.txt", "qubits 3\nH 1\nP 2\nCNOT 1 3\nX 2\n");
    let out = run(&["verify", "-i", s(&circ), "--trials", "4", "--seed", "9"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<serde_json::Value> =
        String::from_utf8(out.stdout.clone()).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|r| r["verdict"] == "pass"));
    // same seed, same reports
    let again = run(&["verify", "-i", s(&circ), "--trials", "4", "--seed", "9"]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.txt", "qubits 2\nCNOT 1 1\n");
    let out = run(&["verify", "-i", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["compile", "-i", s(&missing)]).status.code(), Some(2));

    let junk = write(dir.path(), "s.json", "{\"schema_version\": 99}");
    assert_eq!(run(&["stats", "-i", s(&junk)]).status.code(), Some(2));
    assert_eq!(run(&["compile"]).status.code(), Some(2));
}

#[test]
fn tampered_schedule_fails_verification() {
    let dir = TempDir::new().unwrap();
    let circ = write(dir.path(), "c.txt", "qubits 2\nH 1\nCNOT 1 2\n");
    let out = run(&["compile", "-i", s(&circ)]);
    let mut json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // claim a different target: a CNOT in the other direction
    json["target"]["matrix"] = serde_json::json!(["1000", "1100", "0011", "0001"]);
    let sched = write(dir.path(), "s.json", &json.to_string());
    let out = run(&["simulate", "-i", s(&sched), "--state", "all_plus"]);
    assert_eq!(out.status.code(), Some(1));
}
