//! Command-line contract: exit codes, diagnostics and deterministic output.

use std::process::Command;

use khlab::cli::run_args;
use serde_json::Value;

const TREFOIL: &str = "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]";

fn run(args: &[&str]) -> khlab::cli::Outcome {
    run_args(std::iter::once("khlab").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn documented_examples() {
    let v = json(&["s", "--braid", "2:1,1,1", "--theory", "lee"]);
    assert_eq!(v["s"], 2);
    let v = json(&["verify-theorem", "--pd", "PD[]", "--panel", "default"]);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["s"], 0);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["s"] == 0));
    let v = json(&["homology", "--pd", TREFOIL, "--ring", "fp:2", "--h", "1", "--t", "0"]);
    assert_eq!(v["total"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["s", "--pd", "PD[X[1,2"]).code, 2);
    assert_eq!(run(&["s", "--pd", "PD[X[4,1,3,2],X[2,3,1,4]]"]).code, 2);
    assert_eq!(run(&["s", "--braid", "2:1,1,1", "--triple", "q/0/0"]).code, 2);
    assert_eq!(run(&["homology", "--file", "/nonexistent/table.csv"]).code, 2);
    assert_eq!(run(&["homology"]).code, 2);
    assert_eq!(run(&["homology", "--pd", "PD[]", "--braid", "2:1"]).code, 2);
    assert_eq!(run(&["homology", "--pd", "PD[]", "--theory", "lee", "--h", "1"]).code, 2);
    assert_eq!(run(&["verify-twist", "--braid", "2:1,1,1", "--src", "q/0/4", "--dst", "q/0/1"]).code, 0);
    // A theory panel whose only member lacks a square root fails verification.
    assert_eq!(run(&["verify-theorem", "--pd", "PD[]", "--triple", "q/0/0"]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn diagnostics_name_the_input() {
    let out = run(&["s", "--pd", "PD[X[4,1,3,2],X[2,3,1,4]]"]);
    assert_eq!(out.stderr.lines().count(), 1);
    assert!(out.stderr.contains("PD[X[4,1,3,2],X[2,3,1,4]]") && out.stderr.contains("NOT_A_KNOT"), "{}", out.stderr);
}

#[test]
fn bad_rows_are_reported_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    std::fs::write(&path, "name,input\nu,PD[]\nbad,\"PD[X[1,2,3]]\"\n").unwrap();
    let out = run(&["homology", "--file", path.to_str().unwrap(), "--theory", "lee"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3") && out.stderr.contains("MALFORMED_PD"), "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn torsion_verdicts() {
    let v = json(&["verify-torsion", "--braid", "2:1,1,1", "--prime", "2", "--prime", "3"]);
    let verdicts: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["HYPOTHESIS_VIOLATED", "PASS", "PASS", "PASS"]);
}

#[test]
fn output_is_byte_stable_across_thread_counts() {
    let args = |threads: &'static str| ["table", "--bundled", "reidemeister", "--triple", "q/0/1", "--threads", threads];
    let one = run(&args("1"));
    let four = run(&args("4"));
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.stdout, four.stdout);
    let again = run(&["homology", "--bundled", "links", "--theory", "bar-natan", "--threads", "3"]);
    assert_eq!(again, run(&["homology", "--bundled", "links", "--theory", "bar-natan", "--threads", "1"]));
}

#[test]
fn out_file_and_table_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let out = run(&["s", "--braid", "2:1,1,1", "--out", path.to_str().unwrap()]);
    assert_eq!((out.code, out.stdout.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["s"], 2);
    let out = run(&["canonical", "--pd", "PD[X[4,1,3,2],X[2,3,1,4]]", "--format", "table"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.ends_with("PASS\n"), "{}", out.stdout);
}

#[test]
fn binary_exit_status_and_env_threads() {
    let bin = env!("CARGO_BIN_EXE_khlab");
    let ok = Command::new(bin).args(["s", "--braid", "2:1,1,1"]).env("KHLAB_THREADS", "2").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["s"], 2);
    let bad = Command::new(bin).args(["s", "--pd", "PD[X[1,2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("MALFORMED_PD"));
}
