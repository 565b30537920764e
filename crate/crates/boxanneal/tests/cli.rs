//! End-to-end smoke tests of the command-line binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boxanneal"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("boxanneal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn rejects_invalid_mu_with_config_exit_code() {
    let out = run(&["potential", "--mu", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("multiple of four"), "stderr: {err}");
}

#[test]
fn missing_required_parameter_is_a_config_error() {
    let out = run(&["spectrum", "--sgrid", "log:0:2:5", "--levels", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_reference_spec_is_rejected() {
    let out = run(&[
        "anneal", "--mu", "8", "--ndim", "64", "--si", "1", "--sf", "10", "--T", "10",
        "--eref", "level-two",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn potential_tabulates_csv() {
    let out = run(&["potential", "--mu", "12", "--a", "0.2", "--points", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,V"));
    assert_eq!(lines.count(), 9);
    // Midpoint value: cosine comb vanishes at x = L/2 for mu = 12, envelope
    // contributes 2a.
    let mid: Vec<&str> = text.lines().nth(5).unwrap().split(',').collect();
    let v: f64 = mid[1].parse().unwrap();
    assert!((v - 0.4).abs() < 1e-12);
}

#[test]
fn oracle_emits_json_value() {
    let out = run(&["oracle", "--formula", "zero-point", "--mu", "12", "--s", "1e4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let expected = boxanneal::oracles::zero_point_energy(12, 1e4, 1.0, 1.0, 1.0);
    assert_eq!(doc["formula"], "zero-point");
    assert!((doc["value"].as_f64().unwrap() - expected).abs() < 1e-15);
}

#[test]
fn fractional_exponent_values_parse() {
    let out = run(&["oracle", "--formula", "zero-point", "--mu", "8", "--s", "1e4.5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let expected = boxanneal::oracles::zero_point_energy(8, 10f64.powf(4.5), 1.0, 1.0, 1.0);
    assert!((doc["value"].as_f64().unwrap() - expected).abs() < 1e-15);
}

#[test]
fn first_order_oracle_matches_pinned_location() {
    let out = run(&["oracle", "--formula", "first-order", "--mu", "12", "--a", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let v = doc["value"].as_f64().unwrap();
    assert!((v.log10() - 4.8565).abs() < 1e-3, "log10 s* = {}", v.log10());
}

#[test]
fn preset_resolves_through_experiments_dir() {
    let experiments = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../experiments");
    let out = bin()
        .env("BOXANNEAL_EXPERIMENTS_DIR", &experiments)
        .args(["potential", "--preset", "concave-mu12-depth4p5", "--points", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("x,V"));
}

#[test]
fn unknown_preset_reports_config_error() {
    let out = bin()
        .env("BOXANNEAL_EXPERIMENTS_DIR", std::env::temp_dir())
        .args(["potential", "--preset", "no-such-preset"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_comes_with_manifest() {
    let data = scratch("spec.csv");
    let out = run(&[
        "spectrum", "--mu", "8", "--ndim", "128", "--sgrid", "log:0:2:5", "--levels", "3",
        "--out", data.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&data).unwrap();
    assert!(table.starts_with("s,E_0,E_1,E_2"), "header: {}", table.lines().next().unwrap());
    let manifest_path = data.with_extension("csv.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["schema"], "boxanneal.manifest/1");
    assert_eq!(manifest["subcommand"], "spectrum");
}

#[test]
fn anneal_reports_residual_json() {
    let out = run(&[
        "anneal", "--mu", "8", "--ndim", "96", "--si", "1", "--sf", "100", "--T", "50",
        "--eref", "index:0", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["residual"].as_f64().unwrap() > 0.0);
    assert!(doc["norm_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn variational_lists_branches() {
    let out = run(&["variational", "--logm", "3.5"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("m,branch"), "got: {text}");
    // Branch ids 1 (localized center) and 2 (local minimum) both survive at
    // this mass.
    let ids: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(ids.contains(&1.0) && ids.contains(&2.0), "branches: {ids:?}");
}
