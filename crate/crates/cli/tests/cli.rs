use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matroid-kit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn put(&self, name: &str, body: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    }
}

const U24: &str = r#"{"construct": "uniform", "args": [2, 4]}"#;
const U25: &str = r#"{"construct": "uniform", "args": [2, 5]}"#;
const ONES_GF2: &str = r#"{"field": "gf2", "rows": [1, 2], "cols": [3, 4], "entries": [["1", "1"], ["1", "1"]]}"#;

#[test]
fn info_on_u24() {
    let f = Files::new();
    let m = f.put("u24.json", U24);
    let o = run(&["info", &m]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("rank: 2"));
    assert!(text.contains("3-connected: true"));

    let o = run(&["--format", "json", "info", &m]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["elements"], 4);
    assert_eq!(v["three_connected"], true);
    assert_eq!(v["triads"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_json_is_a_usage_error() {
    let f = Files::new();
    let m = f.put("bad.json", "{ not json");
    let o = run(&["info", &m]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(run(&["info", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn u25_is_fragile_against_u24() {
    let f = Files::new();
    let m = f.put("u25.json", U25);
    let n = f.put("u24.json", U24);
    let o = run(&["fragility", &m, "--against", &n]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("fragile"));

    let u36 = f.put("u36.json", r#"{"construct": "uniform", "args": [3, 6]}"#);
    let o = run(&["--format", "json", "fragility", &u36, "--against", &n]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["fragile"], false);
    assert_eq!(v["flexible"].as_array().unwrap().len(), 6);
}

#[test]
fn u24_incrimination_over_gf2() {
    let f = Files::new();
    let m = f.put("u24.json", U24);
    let a = f.put("a.json", ONES_GF2);
    let o = run(&["--format", "json", "incriminate", &m, &a]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "INCRIMINATED");
    assert_eq!(v["z"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(v["condition"], "DET_ZERO_BUT_BASIS");
}

#[test]
fn represents_case_exits_zero() {
    let f = Files::new();
    let m = f.put("u23.json", r#"{"construct": "uniform", "args": [2, 3]}"#);
    let a = f.put("a.json", r#"{"field": "gf2", "rows": [1, 2], "cols": [3], "entries": [["1"], ["1"]]}"#);
    let o = run(&["incriminate", &m, &a]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "REPRESENTS");
}

#[test]
fn pivot_on_zero_entry_is_a_usage_error() {
    let f = Files::new();
    let a = f.put("a.json", r#"{"field": "gf3", "rows": [1, 2], "cols": [3, 4], "entries": [["1", "0"], ["1", "1"]]}"#);
    let o = run(&["pivot", &a, "--x", "1", "--y", "4"]);
    assert_eq!(o.status.code(), Some(2));

    let a = f.put("ones.json", ONES_GF2);
    let o = run(&["pivot", &a, "--x", "1", "--y", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"], serde_json::json!([3, 2]));
    assert_eq!(v["cols"], serde_json::json!([1, 4]));
    assert_eq!(v["entries"], serde_json::json!([["1", "1"], ["1", "0"]]));
}

#[test]
fn p_matrix_check_and_matroid_extraction() {
    let f = Files::new();
    let bad = f.put("bad.json", r#"{"field": "regular", "rows": [1, 2], "cols": [3, 4], "entries": [["1", "1"], ["-1", "1"]]}"#);
    let o = run(&["check-pmatrix", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["matroid-from", &bad]).status.code(), Some(2));

    let good = f.put("good.json", r#"{"field": "gf3", "rows": [1, 2], "cols": [3, 4, 5], "entries": [["1", "1", "1"], ["1", "2", "1"]]}"#);
    assert_eq!(run(&["check-pmatrix", &good]).status.code(), Some(0));
    let o = run(&["matroid-from", &good]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let bases = v["bases"].as_array().unwrap();
    assert_eq!(bases.len(), 9);
    assert!(!bases.contains(&serde_json::json!([3, 5])));
}

#[test]
fn minor_search() {
    let f = Files::new();
    let m = f.put("u25.json", U25);
    let n = f.put("u24.json", U24);
    let k4 = f.put("k4.json", r#"{"construct": "mk4"}"#);
    assert_eq!(run(&["minor", &m, &n]).status.code(), Some(0));
    assert_eq!(run(&["minor", &k4, &n]).status.code(), Some(1));
}

#[test]
fn gadget_on_an_undersized_context() {
    let f = Files::new();
    let ctx = f.put(
        "ctx.json",
        r#"{"matroid": {"construct": "uniform", "args": [2, 5]}, "N": {"construct": "uniform", "args": [2, 4]},
            "a": 4, "b": 5, "B": [1, 2], "x": 1, "y": 2,
            "A": {"field": "gf3", "rows": [1, 2], "cols": [3, 4, 5], "entries": [["1", "1", "1"], ["1", "2", "2"]]}}"#,
    );
    let o = run(&["gadget", &ctx]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("HYPOTHESES_UNMET deletion_has_minor"));
}

#[test]
fn delta_wye_round_trip_through_files() {
    let f = Files::new();
    let k4 = f.put("k4.json", r#"{"construct": "mk4"}"#);
    assert_eq!(run(&["deltay", &k4, "--triple", "1,2,3"]).status.code(), Some(2));
    assert_eq!(run(&["deltay", &k4, "--triple", "1,2"]).status.code(), Some(2));
    let o = run(&["deltay", &k4, "--triple", "1,2,4"]);
    assert_eq!(o.status.code(), Some(0));
    let y = f.put("y.json", &stdout(&o));
    let o = run(&["--format", "json", "info", &y]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 4);
    let o = run(&["deltay", &y, "--triple", "1,2,4", "--wye"]);
    assert_eq!(o.status.code(), Some(0));
    let back: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(back["bases"].as_array().unwrap().len(), 16);
}

#[test]
fn verify_core_is_clean_and_reproducible() {
    let f = Files::new();
    let out1 = f.put("r1.jsonl", "");
    let out2 = f.put("r2.jsonl", "");
    let o = run(&["verify", "--suite", "core", "--max-n", "8", "--seed", "3", "--random", "40", "--output", &out1]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" fail 0 "));
    let o = run(&["--threads", "2", "verify", "--suite", "core", "--max-n", "8", "--seed", "3", "--random", "40", "--output", &out2]);
    assert_eq!(o.status.code(), Some(0));
    let (a, b) = (std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let header: Value = serde_json::from_str(std::str::from_utf8(&a).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(header["config"]["seed"], 3);
}

#[test]
fn verify_rejects_unknown_suite_and_bad_budget() {
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    let o = bin().args(["verify", "--suite", "representation", "--max-n", "4"]).env("MATROID_KIT_BUDGET", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
