use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permutadkit")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let value = serde_json::from_slice(&out.stdout).expect("JSON report");
    (value, out.status.code().unwrap())
}

fn fixture(name: &str) -> String {
    format!("file:{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn enumerate_counts_rows() {
    let (two, code) = json(&["enumerate", "2", "2"]);
    assert_eq!(code, 0);
    assert_eq!(two["results"]["count"], 2);
    let (four, _) = json(&["enumerate", "4", "2"]);
    assert_eq!(four["results"]["rows"].as_array().unwrap().len(), 14);
    assert_eq!(four["command"], "enumerate");
}

#[test]
fn enumerate_rejects_bad_sizes() {
    assert_eq!(run(&["enumerate", "3", "5"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "10", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn koszul_verdicts() {
    let (peras, code) = json(&["koszul", "peras", "--nmax", "4"]);
    assert_eq!((peras["verdict"].as_str(), code), (Some("koszul"), 0));
    let (anti, code) = json(&["koszul", "anti", "--nmax", "5"]);
    assert_eq!((anti["verdict"].as_str(), code), (Some("not koszul"), 1));
    assert_eq!(anti["results"]["first_failure"], "⟨1,2,3,4,5⟩");
}

#[test]
fn koszul_from_a_file() {
    let (report, code) = json(&["koszul", &fixture("not_koszul.json"), "--nmax", "4"]);
    assert_eq!(code, 1);
    assert_eq!(report["results"]["first_failure"], 4);
    let (report, code) = json(&["koszul", &fixture("not_koszul.json"), "--nmax", "3"]);
    assert_eq!((report["verdict"].as_str(), code), (Some("koszul"), 0));
    assert_eq!(run(&["koszul", "file:/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn caps_need_unsafe() {
    assert_eq!(run(&["koszul", "peras", "--nmax", "8"]).status.code(), Some(2));
    assert_eq!(run(&["minmodel", "1 2 3 4 5 6 7 8 9"]).status.code(), Some(2));
}

#[test]
fn series_of_peras() {
    let (report, code) = json(&["series", "peras", "--terms", "5"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["coefficients"], serde_json::json!(["1", "1/2", "1/6", "1/24", "1/120"]));
    assert_eq!(report["results"]["functional_equation"], true);
}

#[test]
fn shrel_renders() {
    let out = run(&["shrel", "1 2 3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "∂π⟨1,2,3⟩ = π⟨1,1,2⟩∘1π⟨1,2⟩ − π⟨1,2,2⟩∘2π⟨1,2⟩\n");
    assert_eq!(run(&["shrel", "1"]).status.code(), Some(2));
    assert_eq!(run(&["shrel", "1 3"]).status.code(), Some(2));
}

#[test]
fn minmodel_is_acyclic() {
    let (report, code) = json(&["minmodel", "1 2 3 4"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["dims"], serde_json::json!({"0": 5, "1": 5, "2": 1}));
    assert_eq!(report["results"]["betti"], serde_json::json!({"0": 1}));
}

#[test]
fn verify_passes() {
    let (report, code) = json(&["verify", "--nmax", "3"]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["results"]["failing"], serde_json::json!([]));
}

#[test]
fn reports_are_deterministic_and_can_go_to_a_file() {
    let a = run(&["--json", "koszul", "oneper", "--nmax", "3"]).stdout;
    let b = run(&["--json", "koszul", "oneper", "--nmax", "3"]).stdout;
    assert_eq!(a, b);
    let path = std::env::temp_dir().join(format!("permutadkit-{}.json", std::process::id()));
    let out = run(&["--json", "--out", path.to_str().unwrap(), "enumerate", "3", "1"]);
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["results"]["count"], 1);
    std::fs::remove_file(path).unwrap();
}
