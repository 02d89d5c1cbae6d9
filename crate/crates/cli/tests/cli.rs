use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run_job(job: &Value, dir: &Path, extra: &[&str]) -> Output {
    let spec = dir.join("job.json");
    std::fs::write(&spec, job.to_string()).unwrap();
    Command::new(env!("CARGO_BIN_EXE_thermoshift"))
        .arg("--spec")
        .arg(&spec)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("out/report.json")).unwrap()).unwrap()
}

fn ok(job: Value) -> (tempfile::TempDir, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = run_job(&job, dir.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path());
    (dir, r)
}

fn rows(r: &Value) -> &Vec<Value> {
    r["table"]["rows"].as_array().unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn bowen_quarter() -> (f64, f64) {
    let (_d, r) = ok(json!({
        "model": {"family": "staircase", "f": "ceil_n_over:4"},
        "command": "bowen-root",
        "params": {"gamma": 0.5, "tol": 1e-3}
    }));
    assert_eq!(r["result"]["verdict"], "finite");
    let k = &r["result"]["root"]["kind"];
    (num(&k["t_lo"]), num(&k["t_hi"]))
}

#[test]
fn full_shift_pressure_rows_have_upper_log2() {
    let (_d, r) = ok(json!({"model": {"family": "full"}, "command": "pressure", "params": {"n_max": 10}}));
    let rows = rows(&r);
    assert_eq!(rows.len(), 10);
    for row in rows {
        assert_eq!(num(&row["upper"]), 2f64.ln());
        assert_eq!(num(&row["lower"]), 2f64.ln());
    }
}

#[test]
fn constant_staircase_bowen_root_is_infinite() {
    let (_d, r) = ok(json!({"model": {"family": "staircase", "f": "const:1"}, "command": "bowen-root"}));
    assert_eq!(r["result"]["verdict"], "infinite");
}

#[test]
fn hyperbolicity_flips_across_the_root_bracket() {
    let (t_lo, t_hi) = bowen_quarter();
    let grid = [t_lo - 0.3, t_lo - 0.1, t_hi + 0.1, t_hi + 0.3];
    let (_d, r) = ok(json!({
        "model": {"family": "staircase", "f": "ceil_n_over:4"},
        "potential": {"kind": "minus_indicator", "t": 1.0},
        "command": "hyperbolicity",
        "params": {"n_max": 16, "t_grid": grid}
    }));
    let verdicts: Vec<&str> = rows(&r).iter().map(|x| x["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["HYPERBOLIC", "HYPERBOLIC", "NOT-HYPERBOLIC", "NOT-HYPERBOLIC"]);
}

#[test]
fn csv_and_json_carry_the_same_values() {
    let (dir, r) = ok(json!({
        "model": {"family": "golden_mean"},
        "potential": {"kind": "table", "values": [0.25, -1.5]},
        "command": "pressure",
        "params": {"n_max": 8, "t_grid": [0.5, 1.0, 2.0]}
    }));
    let mut rdr = csv::Reader::from_path(dir.path().join("out/report.csv")).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let columns: Vec<String> = r["table"]["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
    assert_eq!(header, columns);
    let csv_rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(csv_rows.len(), rows(&r).len());
    for (rec, row) in csv_rows.iter().zip(rows(&r)) {
        for (field, col) in rec.iter().zip(&columns) {
            let text = match &row[col] {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                v => v.to_string(),
            };
            assert_eq!(field, text, "column {col}");
        }
    }
}

#[test]
fn embedded_spec_reruns_to_identical_output() {
    let (_d, first) = ok(json!({
        "model": {"family": "staircase", "f": "ceil_log2"},
        "potential": {"kind": "minus_indicator", "t": 0.7},
        "command": "approach",
        "params": {"n_max": 9}
    }));
    let (_d2, second) = ok(first["spec"].clone());
    assert_eq!(first, second);
}

#[test]
fn thread_count_does_not_change_output() {
    let job = json!({
        "model": {"family": "staircase", "f": "ceil_n_over:4"},
        "potential": {"kind": "minus_indicator", "t": 1.0},
        "command": "pressure",
        "params": {"n_max": 12, "t_grid": [0.2, 0.9, 1.7, 2.5]}
    });
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run_job(&job, a.path(), &["--threads", "1"]).status.success());
    assert!(run_job(&job, b.path(), &["--threads", "4"]).status.success());
    assert_eq!(report(a.path()), report(b.path()));
}

fn error_of(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap();
    serde_json::from_str(line).unwrap()
}

#[test]
fn failures_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let bad = run_job(&json!({"model": {"family": "full"}, "command": "pressure", "params": {"n_max": 3, "extra": 1}}), dir.path(), &[]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(error_of(&bad)["error"]["kind"], "schema");

    let capped = run_job(&json!({"model": {"family": "full"}, "command": "enumerate", "params": {"n_max": 12}}), dir.path(), &["--cap", "100"]);
    assert_eq!(capped.status.code(), Some(2));
    assert_eq!(error_of(&capped)["error"]["kind"], "cap_exhausted");

    let unknown = run_job(&json!({"model": {"family": "staircase", "f": "ceil_n_over:4"}, "command": "bowen-root"}), dir.path(), &[]);
    assert_eq!(unknown.status.code(), Some(3));
    assert_eq!(error_of(&unknown)["error"]["kind"], "uncertifiable");
    assert_eq!(report(dir.path())["result"]["verdict"], "unknown");
    assert!(dir.path().join("out/error.json").exists());
}

#[test]
fn decipher_reports_truncation() {
    let (_d, r) = ok(json!({"model": {"family": "staircase", "f": "ceil_n_over:4"}, "command": "decipher", "params": {"truncate": 8}}));
    assert_eq!(r["result"]["verdict"], "unique");
    assert_eq!(r["result"]["truncation"], 8);
}

#[test]
fn gap_lab_modes() {
    let (_d, f) = ok(json!({"model": {"family": "full"}, "command": "gap-lab", "params": {"mode": "formula", "g": "const:1"}}));
    assert_eq!(f["result"]["bounds"]["gap_positive"], true);
    assert_eq!(f["result"]["delta_doubled"]["gap_positive"], false);
    let (_d, t) = ok(json!({
        "model": {"family": "full"},
        "potential": {"kind": "minus_indicator", "t": 1.0},
        "command": "gap-lab",
        "params": {"mode": "toy", "g": "const:1", "toy": {"beta": 0.25, "m": 4, "gamma": 0.01, "l": 9, "delta_exp": 40, "n": 24, "instances": 10}}
    }));
    assert_eq!(t["result"]["all_checks_pass"], true);
}

#[test]
fn factor_emits_the_transfer_formula() {
    let (_d, r) = ok(json!({
        "model": {"family": "golden_mean"},
        "command": "factor",
        "params": {"code": {"radius": 0, "rule": "identity"}, "g": "const:2", "n_max": 6}
    }));
    assert_eq!(r["result"]["formula"], "(4r+3)g(n+2r)+4r");
    for row in rows(&r) {
        assert_eq!(row["source_count"], row["image_count"]);
        assert_eq!(row["g_tilde"].as_i64().unwrap(), 3 * row["g"].as_i64().unwrap());
    }
}
