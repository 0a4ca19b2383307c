use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn arithext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arithext")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("arithext-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
    path
}

#[test]
fn catalog_lists_at_least_twelve_entries() {
    let out = arithext(&["catalog", "list", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let names = json(&out);
    let names = names.as_array().unwrap();
    assert!(names.len() >= 12);
    for n in -3..=3 {
        let want = format!("p1-O{n}-fubini-study");
        assert!(names.iter().any(|e| e["name"] == want.as_str()), "{want}");
    }
    assert!(names.iter().any(|e| e["kind"] == "torus"));
    assert!(names.iter().any(|e| e["kind"] == "fiber-config"));
}

#[test]
fn fubini_study_degree_three() {
    let out = arithext(&["run", "--catalog", "p1-O3-fubini-study", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let chern = r["predicates"].as_array().unwrap().iter().find(|p| p["check"] == "chern-number").unwrap();
    for key in ["quadrature", "residue"] {
        assert!((chern["values"][key].as_f64().unwrap() - 3.0).abs() <= 1e-6);
    }
}

#[test]
fn square_two_torsion() {
    let out = arithext(&["run", "--catalog", "torus-square-2torsion", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let preds = r["predicates"].as_array().unwrap();
    let get = |c: &str| preds.iter().find(|p| p["check"] == c).unwrap()["values"].clone();
    assert_eq!(get("torsion")["order"], 2);
    assert_eq!(get("compact")["compact"], true);
}

#[test]
fn emitted_entries_run_from_files() {
    let out = arithext(&["catalog", "emit", "kodaira-I5"]);
    assert_eq!(out.status.code(), Some(0));
    let path = temp_file("i5.json", std::str::from_utf8(&out.stdout).unwrap());
    let run = arithext(&["run", path.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
}

#[test]
fn toml_scenarios_are_accepted() {
    let text = r#"
kind = "fiber-config"
name = "two-components"

[config]
n = [1, 1]
q = [[-2, 2], [2, -2]]

[[predicates]]
check = "decompose"
m = ["3/2", "3/2"]
expected = "3/2"
"#;
    let path = temp_file("two.toml", text);
    assert_eq!(arithext(&["run", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn predicate_failure_exits_one() {
    let text = r#"{"kind":"torus","name":"wrong","lattice":{"g":1,"generators":[[[1,0]],[[0,1]]]},
        "class":{"values":[[0,3.141592653589793],[0,0]]},
        "predicates":[{"check":"torsion","expected":3},{"check":"compact","expected":true}]}"#;
    let path = temp_file("wrong.json", text);
    let out = arithext(&["run", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    // every predicate is evaluated even after a failure
    assert_eq!(r["predicates"].as_array().unwrap().len(), 2);
    assert_eq!(r["predicates"][1]["passed"], true);
}

#[test]
fn input_errors_exit_two() {
    let bad = temp_file("bad.json", "{\"kind\": \"torus\",\n \"name\": 3}");
    let out = arithext(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert_eq!(arithext(&["run", "/nonexistent/scenario.json"]).status.code(), Some(2));
    assert_eq!(arithext(&["run", "--catalog", "no-such-entry"]).status.code(), Some(2));
    assert_eq!(arithext(&["catalog", "emit", "no-such-entry"]).status.code(), Some(2));
    assert_eq!(arithext(&["verify-suite", "--tol-structural", "-1"]).status.code(), Some(2));
    assert_eq!(arithext(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let a = arithext(&["run", "--catalog", "p1-triangular-O1-O2", "--json", "--seed", "7"]);
    let b = arithext(&["run", "--catalog", "p1-triangular-O1-O2", "--json", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["settings"]["seed"], 7);
}

#[test]
fn tolerance_flags_reach_the_report() {
    let out = arithext(&["run", "--catalog", "torus-hex-irrational", "--json", "--nmax-torsion", "50", "--tol-quadrature", "1e-5"]);
    let r = json(&out);
    assert_eq!(r["settings"]["nmax_torsion"], 50);
    assert_eq!(r["settings"]["tol_quadrature"], 1e-5);
}
