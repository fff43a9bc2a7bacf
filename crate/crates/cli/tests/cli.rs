use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const EXAMPLE: &str = "p cnf 3 5\n1 -2 0\n2 3 0\n-1 -3 0\n-1 -2 3 0\n1 2 -3 0\n";

fn clifsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clifsat"))
        .args(args)
        .env_remove("CLIFSAT_MAX_N")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn example_is_unsat_for_every_method() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "example.cnf", EXAMPLE);
    for method in ["dnf", "symmetry", "o1n-cover", "oracle"] {
        let out = clifsat(&["solve", file.to_str().unwrap(), "--method", method]);
        assert_eq!(out.status.code(), Some(20), "{method}");
        let r = json(&out);
        assert_eq!(r["status"], "UNSAT");
        assert_eq!(r["method"], method);
        assert!(r["witness"].is_null());
    }
}

#[test]
fn sat_instance_and_verify() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "sat.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
    let out = clifsat(&["solve", file.to_str().unwrap(), "--method", "symmetry"]);
    assert_eq!(out.status.code(), Some(10));
    assert_eq!(json(&out)["witness"], serde_json::json!([-1, 2]));

    let report = write(dir.path(), "report.json", std::str::from_utf8(&out.stdout).unwrap());
    let ok = clifsat(&["verify", file.to_str().unwrap(), report.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    let bad = write(dir.path(), "bad.txt", "v 1 2 0\n");
    let fail = clifsat(&["verify", file.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(fail.status.code(), Some(1));
}

#[test]
fn verify_unsat_claims() {
    let dir = TempDir::new().unwrap();
    let unsat = write(dir.path(), "example.cnf", EXAMPLE);
    let claim = write(dir.path(), "claim.txt", "s UNSATISFIABLE\n");
    let out = clifsat(&["verify", unsat.to_str().unwrap(), claim.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let sat = write(dir.path(), "sat.cnf", "p cnf 1 1\n1 0\n");
    let out = clifsat(&["verify", sat.to_str().unwrap(), claim.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn empty_formula_text_output() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "empty.cnf", "p cnf 3 0\n");
    let out = clifsat(&["solve", file.to_str().unwrap(), "--format", "text"]);
    assert_eq!(out.status.code(), Some(10));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("s SATISFIABLE"));
    assert!(text.contains("v -1 -2 -3 0"));
}

#[test]
fn errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.cnf", "p cnf 2 1\n1 5 0\n");
    let out = clifsat(&["solve", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 3"));

    let file = write(dir.path(), "example.cnf", EXAMPLE);
    let out = clifsat(&["solve", file.to_str().unwrap(), "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = clifsat(&["solve", dir.path().join("missing.cnf").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn env_guard() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "example.cnf", EXAMPLE);
    let out = Command::new(env!("CARGO_BIN_EXE_clifsat"))
        .args(["solve", file.to_str().unwrap()])
        .env("CLIFSAT_MAX_N", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_is_deterministic_and_solvable() {
    let a = clifsat(&["gen", "--n", "8", "--m", "34", "--k", "3", "--seed", "7"]);
    let b = clifsat(&["gen", "--n", "8", "--m", "34", "--k", "3", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "g.cnf", std::str::from_utf8(&a.stdout).unwrap());
    let codes: Vec<_> = ["dnf", "symmetry", "o1n-cover", "oracle"]
        .iter()
        .map(|m| clifsat(&["solve", file.to_str().unwrap(), "--method", m]).status.code())
        .collect();
    assert!(codes.iter().all(|c| *c == codes[0] && matches!(c, Some(10) | Some(20))));

    let bad = clifsat(&["gen", "--n", "2", "--m", "1", "--k", "3"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn expand_and_unsat_test() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "or.cnf", "p cnf 2 1\n1 2 0\n");
    let out = clifsat(&["expand", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    let r = json(&out);
    assert_eq!(r["count"], 3);
    assert_eq!(r["atoms"][0], serde_json::json!([1, -2]));

    let example = write(dir.path(), "example.cnf", EXAMPLE);
    for backend in ["atomset", "multivector"] {
        let out = clifsat(&["unsat-test", example.to_str().unwrap(), "--backend", backend]);
        assert_eq!(out.status.code(), Some(20));
        assert_eq!(json(&out)["symmetric_under"], serde_json::json!(vec![true; 6]));
    }
    let empty = write(dir.path(), "empty.cnf", "p cnf 2 0\n");
    assert_eq!(clifsat(&["unsat-test", empty.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn cover_reports() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "or.cnf", "p cnf 2 1\n1 2 0\n");
    let out = clifsat(&["cover", file.to_str().unwrap(), "--seed", "3", "--givens-steps", "8"]);
    assert_eq!(out.status.code(), Some(10));
    let r = json(&out);
    assert_eq!(r["experimental"], true);
    assert_eq!(r["details"]["witnesses_verified"], true);

    let example = write(dir.path(), "example.cnf", EXAMPLE);
    let out = clifsat(&["cover", example.to_str().unwrap(), "--group", "o1n"]);
    assert_eq!(out.status.code(), Some(20));
    assert_eq!(json(&out)["details"]["covered"], 8);
    let out = clifsat(&["cover", example.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "UNKNOWN");
}

#[test]
fn bench_table() {
    let out = clifsat(&["bench", "--ns", "4", "--ratios", "2", "--instances", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("o1n-cover"));
}
