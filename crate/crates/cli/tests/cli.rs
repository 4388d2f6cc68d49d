use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn movoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_movoid")).args(args).output().expect("binary runs")
}

fn construct(q: &str, family: &str, out: &Path) -> Output {
    movoid(&["construct", "--q", q, "--family", family, "--out", out.to_str().unwrap()])
}

fn points(path: &Path) -> Vec<Value> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["points"].as_array().unwrap().clone()
}

#[test]
fn construct_writes_point_sets() {
    let dir = tempfile::tempdir().unwrap();
    let m7 = dir.path().join("m7.json");
    let out = construct("7", "qminus1", &m7);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("|M| = 150"));
    assert_eq!(points(&m7).len(), 150);
    let m5 = dir.path().join("m5.json");
    assert_eq!(construct("5", "qplus1", &m5).status.code(), Some(0));
    assert_eq!(points(&m5).len(), 78);
}

#[test]
fn parameter_errors_exit_2() {
    let out = movoid(&["construct", "--q", "3", "--family", "qminus1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no admissible a"));
    assert_eq!(movoid(&["construct", "--q", "7", "--family", "qplus1"]).status.code(), Some(2));
    assert_eq!(movoid(&["construct", "--q", "15"]).status.code(), Some(2));
    // 1 + 3^2 = 3 is a nonsquare mod 7
    assert_eq!(movoid(&["construct", "--q", "7", "--a", "3"]).status.code(), Some(2));
    assert_eq!(movoid(&["census"]).status.code(), Some(2));
    assert_eq!(movoid(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let m7 = dir.path().join("m7.json");
    construct("7", "qminus1", &m7);
    let out = movoid(&["verify", m7.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains(r#"{"histogram":{"3":400},"lines":400}"#));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&m7).unwrap()).unwrap();
    v["points"].as_array_mut().unwrap().pop();
    let mutated = dir.path().join("m7_mutated.json");
    std::fs::write(&mutated, serde_json::to_string(&v).unwrap()).unwrap();
    let report = dir.path().join("report.json");
    let out = movoid(&["verify", mutated.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["verdict"], "fail");
    let lines = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "lines").unwrap();
    assert_eq!(lines["witnesses"][0]["kind"], "line");
    assert_eq!(lines["witnesses"][0]["meets"], 2);

    std::fs::write(&mutated, "{ not json").unwrap();
    assert_eq!(movoid(&["verify", mutated.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(movoid(&["verify", "/nonexistent/m.json"]).status.code(), Some(2));
}

#[test]
fn verify_sections_reports_residues() {
    let dir = tempfile::tempdir().unwrap();
    let m7 = dir.path().join("m7.json");
    construct("7", "qminus1", &m7);
    let out = movoid(&["--json", "verify", "--sections", m7.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let modp = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "elliptic_mod_p").unwrap();
    assert_eq!(modp["observed"]["residues"], serde_json::json!({ "3": 1176 }));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    construct("11", "qminus1", &a);
    movoid(&["--threads", "2", "construct", "--q", "11", "--family", "qminus1", "--out", b.to_str().unwrap()]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn census_and_selftest() {
    let out = movoid(&["census", "--q", "7", "--family", "qminus1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("13 orbits, 400 points"));
    let out = movoid(&["--json", "census", "--q", "11"]);
    let v: Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(v["points"], 1464);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 18);
    assert_eq!(movoid(&["selftest", "--q", "7,11,5,9"]).status.code(), Some(0));
}
