//! End-to-end checks of the command-line binary: exit codes, report
//! content and CSV byte stability.

use std::f64::consts::SQRT_2;
use std::path::Path;
use std::process::{Command, Output};

use seqchsh::catalog::{self, CatalogParams};
use seqchsh::io::{self, StrategyFile};
use seqchsh::scenario::{evaluate_strategy, StateKind};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqchsh"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write_catalog_file(path: &Path, id: &str) {
    let strategy = catalog::from_id(id, CatalogParams::default()).unwrap();
    let file = StrategyFile::from_strategy(StateKind::MaximallyEntangled, &strategy).unwrap();
    io::save_strategy(path, &file).unwrap();
}

#[test]
fn evaluate_round_trips_the_equalizing_mixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("appendix_c.json");
    write_catalog_file(&path, "appendixC");

    let strategy = catalog::from_id("appendixC", CatalogParams::default()).unwrap();
    let expected = evaluate_strategy(&strategy).unwrap();

    let output = run(&["evaluate", path.to_str().unwrap(), "--output", "json"]);
    assert!(output.status.success(), "{output:?}");
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let mixed: Vec<f64> = doc["mixed"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    for (a, b) in mixed.iter().zip(expected.values()) {
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    let target = 6.0 * 10.0_f64.sqrt() / (5.0 * SQRT_2 + 5.0_f64.sqrt());
    assert!((mixed[0] - target).abs() <= 1e-9);
    assert!((mixed[1] - target).abs() <= 1e-9);
    assert!(doc["verdicts"][0]["violation"].as_bool().unwrap());
    assert!(doc["verdicts"][1]["violation"].as_bool().unwrap());
}

#[test]
fn evaluate_reports_the_saturating_chain() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("saturating.json");
    let strategy = catalog::from_id(
        "maxent.case_i",
        CatalogParams {
            angle: Some(0.0),
            ..CatalogParams::default()
        },
    )
    .unwrap();
    let file = StrategyFile::from_strategy(StateKind::MaximallyEntangled, &strategy).unwrap();
    io::save_strategy(&path, &file).unwrap();

    let output = run(&["evaluate", path.to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    let text = stdout(&output);
    assert!(text.contains("mixed: S = [2.828427, 1.414214]"), "{text}");
    assert!(text.contains("pair 1: S = 2.828427  violation"), "{text}");
    assert!(text.contains("pair 2: S = 1.414214  no violation"), "{text}");
    assert!(text.contains("completeness residual"), "{text}");
}

#[test]
fn evaluate_exit_codes_follow_the_error_class() {
    // Unreadable file.
    let output = run(&["evaluate", "/nonexistent/strategy.json"]);
    assert_eq!(output.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();

    // Schema violation.
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"state\": 3}").unwrap();
    let output = run(&["evaluate", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));

    // Invariant violation: weights sum to 0.9.
    let path = dir.path().join("underweight.json");
    write_catalog_file(&path, "appendixC");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let weight = doc["branches"][0]["weight"].as_f64().unwrap();
    doc["branches"][0]["weight"] = serde_json::json!(weight - 0.1);
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let output = run(&["evaluate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(3), "{output:?}");
}

#[test]
fn reproduce_rejects_unknown_targets() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["reproduce", "nosuch", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn reproduce_triple_passes() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["reproduce", "triple", "--out", dir.path().to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    let text = stdout(&output);
    assert!(text.contains("PASS triple violation"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
    assert!(dir.path().join("triple.csv").exists());
}

#[test]
fn boundary_csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let first = run(&["boundary", "--grid", "200", "--out", out]);
    assert!(first.status.success());
    let bytes_first = std::fs::read(dir.path().join("boundary.csv")).unwrap();

    let second = run(&["boundary", "--grid", "200", "--out", out]);
    assert!(second.status.success());
    let bytes_second = std::fs::read(dir.path().join("boundary.csv")).unwrap();
    assert_eq!(bytes_first, bytes_second);

    let text = String::from_utf8(bytes_first).unwrap();
    assert!(text.starts_with("s1,s2,provenance\n"));
    assert_eq!(text.lines().count(), 201);
}

#[test]
fn noise_prints_both_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "noise",
        "--grid",
        "11",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let text = stdout(&output);
    assert!(text.contains("fixed-point mixture: v* = 0.948683"), "{text}");
    assert!(text.contains("single-pair control: v* = 0.707107"), "{text}");
}
