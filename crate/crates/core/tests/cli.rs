//! End-to-end tests of the command-line binary: output formats, exit
//! codes, determinism, and the datafile emit/verify cycle.

use std::path::Path;
use std::process::{Command, Output};

fn g2quat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2quat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn count_csv_matches_reference_table() {
    let out = g2quat(&["count", "--from", "3", "--to", "52", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,g2c_term,correction,total,jl_pairs"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    let fixture: std::collections::BTreeMap<String, i64> =
        serde_json::from_str(include_str!("../data/table1.json")).unwrap();
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        let k = fields[0];
        let total: i64 = fields[3].parse().unwrap();
        assert_eq!(total, fixture[k], "k = {k}");
        let g2c: i64 = fields[1].parse().unwrap();
        let corr: i64 = fields[2].parse().unwrap();
        assert_eq!(g2c + corr, total);
    }
}

#[test]
fn output_is_deterministic() {
    let a = g2quat(&["count", "--from", "3", "--to", "30", "--format", "table"]);
    let b = g2quat(&["count", "--from", "3", "--to", "30", "--format", "table"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "byte-identical output across runs");
    let c = g2quat(&["count", "--from", "3", "--to", "30", "--format", "json", "--jobs", "2"]);
    let d = g2quat(&["count", "--from", "3", "--to", "30", "--format", "json", "--jobs", "1"]);
    assert_eq!(c.stdout, d.stdout, "order is stable regardless of worker count");
}

#[test]
fn json_format_round_trips() {
    let out = g2quat(&["count", "--from", "10", "--to", "12", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    assert_eq!(arr[2]["k"], 12);
    assert_eq!(arr[2]["total"], 9);
    assert_eq!(arr[2]["jl_note"], "even_addition");
}

#[test]
fn weight_range_is_a_usage_error() {
    let out = g2quat(&["count", "--from", "2", "--to", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(msg.contains("greater than 2"), "stderr: {msg}");
}

#[test]
fn invariant_and_dims_values() {
    let out = g2quat(&["invariant", "--weight", "3", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");

    let out = g2quat(&["invariant", "--weight", "12", "4"]);
    assert_eq!(stdout(&out).trim(), "1");

    let out = g2quat(&["dims", "--weight", "3", "1"]);
    assert_eq!(stdout(&out).trim(), "14");

    let out = g2quat(&["modforms", "--k", "12"]);
    assert_eq!(stdout(&out).trim(), "1");

    // Odd-parity weights are rejected as usage errors.
    let out = g2quat(&["invariant", "--weight", "1", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = g2quat(&["dims", "--weight", "1", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_against_builtin_and_perturbed_fixtures() {
    let out = g2quat(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("50 entries match"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"6": 1, "12": 8}"#).unwrap();
    let out = g2quat(&["verify", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("k = 12") && text.contains("fixture 8") && text.contains("computed 9"));

    let missing = dir.path().join("nope.json");
    let out = g2quat(&["verify", "--fixture", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "{}").unwrap();
    let out = g2quat(&["verify", "--fixture", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classes_emit_reproduces_the_checked_in_datafile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("classes.json");
    let out = g2quat(&["classes", "--emit", path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let emitted = std::fs::read_to_string(&path).unwrap();
    let reference =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/g2c_classes.json"))
            .unwrap();
    assert_eq!(emitted, reference, "regenerated datafile is byte-identical");

    // The emitted file is accepted as a --data source.
    let out = g2quat(&["count", "--from", "6", "--to", "6", "--format", "csv", "--data", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("6,1,0,1,0"));
}

#[test]
fn classes_verify_passes() {
    let out = g2quat(&["classes", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("12096"));
}

#[test]
fn selftest_passes() {
    let out = g2quat(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("selftest passed"));
}
