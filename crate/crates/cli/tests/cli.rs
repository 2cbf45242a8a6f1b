use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn flatform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatform")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flatform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn hcc_klein_json_passes() {
    let o = flatform(&["hcc", "--catalog", "klein", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["k"], 1);
    assert_eq!(v["hcc"]["sum_bound"]["pass"], true);
    assert!(v["hcc"]["per_degree"].as_array().unwrap().iter().all(|d| d["pass"] == true));
    assert_eq!(v["hcc"]["homologically_injective"], "pass");
    assert_eq!(v["splitting_subgroup"]["index"], 4);
    assert_eq!(v["splitting_subgroup"]["verified_direct_product"], true);
}

#[test]
fn wrong_arity_is_an_input_error_with_line_number() {
    let path = temp_file("bad.txt", "dim 2\ngen\n1 0 0\n0 -1\nvec 1/2 0\n");
    let o = flatform(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn torsion_is_a_check_failure_with_witness() {
    let path = temp_file("inversion.txt", "dim 2\ngen\n-1 0\n0 -1\nvec 0 0\n");
    let o = flatform(&["validate", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&Value> =
        v["validation"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "torsion_free");
    assert!(failed[0]["witness"].is_string());
}

#[test]
fn report_all_covers_the_catalog_in_order() {
    let o = flatform(&["report", "--all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<String> =
        v.as_array().unwrap().iter().map(|r| r["group_name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, flatform::catalog::list());
    assert!(v.as_array().unwrap().iter().all(|r| r["passed"] == true));

    let text = flatform(&["report", "--all"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).ends_with("18/18 passed\n"));
}

#[test]
fn json_output_round_trips() {
    for args in [
        &["report", "--catalog", "b4", "--format", "json"][..],
        &["calabi", "--catalog", "g3", "--format", "json"],
        &["invariants", "--catalog", "hantzsche-wendt", "--format", "json"],
        &["bott", "4", "101100", "--format", "json"],
    ] {
        let out = stdout(&flatform(args));
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), out, "{args:?}");
    }
}

#[test]
fn rationals_are_strings() {
    let out = stdout(&flatform(&["calabi", "--catalog", "b1", "--format", "json"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let lambda = v["certificate"]["lambda"].as_object().unwrap();
    assert!(lambda.values().flat_map(|r| r.as_array().unwrap()).all(Value::is_string));
}

#[test]
fn catalog_get_emits_a_parseable_group() {
    let o = flatform(&["catalog", "get", "g2"]);
    assert_eq!(o.status.code(), Some(0));
    let path = temp_file("g2.txt", &stdout(&o));
    let v = flatform(&["validate", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));

    let list = stdout(&flatform(&["catalog", "list"]));
    assert_eq!(list.lines().count(), 18);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(flatform(&["hcc", "--catalog", "nope"]).status.code(), Some(2));
    assert_eq!(flatform(&["validate", "/nonexistent/group.txt"]).status.code(), Some(2));
    assert_eq!(flatform(&["validate", "--catalog", "klein", "--bogus"]).status.code(), Some(2));
    assert_eq!(flatform(&["validate"]).status.code(), Some(2));
    assert_eq!(flatform(&["bott", "3", "11"]).status.code(), Some(2));
}

#[test]
fn bott_from_matrix_file() {
    let path = temp_file("bott.txt", "0 1 1\n0 0 0\n0 0 0\n");
    let o = flatform(&["bott", "3", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("== bott3-110 "));
}
