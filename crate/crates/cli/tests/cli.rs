use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spherica(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherica"))
        .args(args)
        .env_remove("SPHERICA_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn close(v: &Value, re: f64, im: f64) -> bool {
    (v[0].as_f64().unwrap() - re).abs() < 1e-10 && (v[1].as_f64().unwrap() - im).abs() < 1e-10
}

#[test]
fn check_builtin_and_file() {
    let out = spherica(&["check", "--builtin", "sym:3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["gelfand"], true);
    assert_eq!(v["double_cosets"], 2);

    let v = stdout_json(&spherica(&["check", "--builtin", "sym:4"]));
    assert_eq!(v["double_cosets"], 2);
    assert_eq!(v["subgroup_order"], 6);

    let dir = tempfile::tempdir().unwrap();
    let s4 = write(
        dir.path(),
        "s4.json",
        r#"{"degree": 4, "group_generators": [[1,2,3,0],[1,0,2,3]], "subgroup_generators": []}"#,
    );
    let out = spherica(&["check", &s4]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["gelfand"], false);
    assert_eq!(v["double_cosets"], 24);
    assert!(v["defect"].as_f64().unwrap() > 0.0);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let junk = write(dir.path(), "junk.json", "{ not json");
    assert_eq!(spherica(&["check", &junk]).status.code(), Some(2));
    assert_eq!(spherica(&["check", "--builtin", "tri:3"]).status.code(), Some(2));
    assert_eq!(spherica(&["check"]).status.code(), Some(2));
    assert_eq!(spherica(&["check", "/nonexistent/group.json"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_spherica"))
        .args(["check", "--builtin", "sym:6"])
        .env("SPHERICA_MAX_ORDER", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("too large"));
}

#[test]
fn spherical_tables() {
    let v = stdout_json(&spherica(&["spherical", "--builtin", "sym:3"]));
    let rows = v["values"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(close(&rows[1][1], -0.5, 0.0));
    assert!((v["weights"][1].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let v = stdout_json(&spherica(&["spherical", "--builtin", "cyc:4"]));
    assert_eq!(v["values"].as_array().unwrap().len(), 4);
    for w in v["weights"].as_array().unwrap() {
        assert!((w.as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    let v = stdout_json(&spherica(&["spherical", "--builtin", "full:5"]));
    assert_eq!(v["values"], serde_json::json!([[[1.0, 0.0]]]));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = spherica(&["spherical", "--builtin", "dih:5", "--format", "csv", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(csv).unwrap().lines().count(), 4);
}

#[test]
fn transform_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", r#"{"basis": "coset", "values": [[0.3, -1.0], [2.0, 0.5], [-0.25, 0.0]]}"#);
    let spec = dir.path().join("spec.json");
    let out = spherica(&["transform", "--builtin", "dih:4", "--input", &f, "--out", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let back = spherica(&["transform", "--builtin", "dih:4", "--inverse", "--input", spec.to_str().unwrap()]);
    let v = stdout_json(&back);
    assert_eq!(v["basis"], "coset");
    assert!(close(&v["values"][0], 0.3, -1.0));
    assert!(close(&v["values"][1], 2.0, 0.5));
    assert!(close(&v["values"][2], -0.25, 0.0));

    let bad = write(dir.path(), "bad.json", r#"{"values": [[1, 0]]}"#);
    assert_eq!(spherica(&["transform", "--builtin", "dih:4", "--input", &bad]).status.code(), Some(2));
}

#[test]
fn apply_identity_projects() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", r#"{"convention": "plancherel", "values": [[1,0],[1,0]]}"#);
    let f = write(dir.path(), "f.json", r#"{"values": [[6,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#);
    let out = spherica(&["apply", "--builtin", "sym:3", "--multiplier", &m, "--function", &f]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["basis"], "group");
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 6);
    // Projection of 6·δ_e onto S₂-bi-invariant functions is 3 on K and 0 elsewhere.
    let on_k = values.iter().filter(|x| close(x, 3.0, 0.0)).count();
    let off_k = values.iter().filter(|x| close(x, 0.0, 0.0)).count();
    assert_eq!((on_k, off_k), (2, 4));

    let short = write(dir.path(), "short.json", r#"{"convention": "plancherel", "values": [[1,0]]}"#);
    assert_eq!(
        spherica(&["apply", "--builtin", "sym:3", "--multiplier", &short, "--function", &f]).status.code(),
        Some(2)
    );
}

#[test]
fn schatten_counting_example() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", r#"{"convention": "counting", "values": [[1,0],[1,0]]}"#);
    let out = spherica(&["schatten", "--builtin", "sym:3", "--multiplier", &m, "--p-grid", "1,2,inf"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let sv = v["singular_values"].as_array().unwrap();
    assert!((sv[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((sv[1].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["schatten"][0][1].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((v["schatten"][1][1].as_f64().unwrap() - 1.25f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["schatten"][2][0], Value::Null);
    assert!((v["trace"][0].as_f64().unwrap() - 1.5).abs() < 1e-12);

    let out = spherica(&[
        "schatten", "--builtin", "sym:3", "--multiplier", &m, "--convention", "plancherel", "--sampled", "2:2",
    ]);
    let v = stdout_json(&out);
    assert!((v["op_norm_2_2"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["sampled_norms"][0]["value"].as_f64().unwrap() <= 1.0 + 1e-12);
    assert_eq!(spherica(&["schatten", "--builtin", "sym:3", "--multiplier", &m, "--p-grid", "0.5"]).status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    for spec in ["sym:4", "dih:8"] {
        let out = spherica(&["verify", "--builtin", spec]);
        assert_eq!(out.status.code(), Some(0), "{spec}");
    }
    let report = dir.path().join("cyc12.json");
    let out = spherica(&["verify", "--builtin", "cyc:12", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    let v15 = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "V15").unwrap();
    assert!(v15["worst"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["pair"]["name"], "cyc:12");

    // An impossible tolerance makes identity checks fail and the exit code 1.
    let out = spherica(&["verify", "--builtin", "sym:3", "--trials", "5", "--tol=-1"]);
    assert_eq!(out.status.code(), Some(1));
}
