// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end behaviour of the `acmag` binary.

use std::process::{Command, Output};

fn acmag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acmag"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(acmag(&["--help"]).status.code(), Some(0));
    assert_eq!(acmag(&["--version"]).status.code(), Some(0));
}

#[test]
fn unknown_subcommand_is_config_error() {
    assert_eq!(acmag(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(acmag(&["sweep", "--mode", "fast"]).status.code(), Some(1));
}

#[test]
fn sweep_without_grid_is_config_error() {
    let o = acmag(&["sweep"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--config"));
}

#[test]
fn malformed_config_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "L = 1\nflux = 3\n").unwrap();
    let o = acmag(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn missing_config_file_is_io_error() {
    let o = acmag(&["sweep", "--config", "/nonexistent/grid.cfg"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unwritable_output_is_io_error() {
    let o = acmag(&["sensitivity", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_preset_is_config_error() {
    assert_eq!(acmag(&["sweep", "--preset", "fig9"]).status.code(), Some(1));
}

#[test]
fn sensitivity_prints_one_row_per_scheme() {
    let o = acmag(&["sensitivity", "-L", "8", "--m", "1.1", "--gamma", "1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], acmag::sweep::CSV_HEADER);
    assert_eq!(lines.len(), 3);
    assert!(lines[1..].iter().any(|l| l.contains(",ghz,")));
    assert!(lines[1..].iter().any(|l| l.contains(",individual,")));
}

#[test]
fn sensitivity_json_parses() {
    let o = acmag(&[
        "sensitivity",
        "-L",
        "4",
        "--noise",
        "depolarizing",
        "--scheme",
        "ghz",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["noise"], "depolarizing");
    assert_eq!(rows[0]["L"], 4);
    assert!(rows[0]["t_opt"].as_f64().unwrap() > 0.0);
}

#[test]
fn probability_trace_has_requested_length() {
    let o = acmag(&[
        "probability",
        "-L",
        "2",
        "--scheme",
        "ghz",
        "--points",
        "11",
        "--t-final",
        "5",
        "--mode",
        "compare",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 11);
    for r in rows {
        let a = r["p_analytic"].as_f64().unwrap();
        let n = r["p_numeric"].as_f64().unwrap();
        assert!((a - n).abs() < 1e-5, "{r}");
    }
}

#[test]
fn preset_sweep_writes_full_surface() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = acmag(&[
        "sweep",
        "--preset",
        "fig2",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let cfg = acmag::sweep::presets::preset("fig2").unwrap();
    assert_eq!(text.lines().count(), 1 + cfg.row_count());
}

#[test]
fn verify_json_reports_every_check() {
    let o = acmag(&["verify", "--format", "json", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 5);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn injected_fault_names_the_failing_check() {
    let o = acmag(&["verify", "--inject-fault", "window-sign"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));
    assert!(stdout(&o).contains("FAIL"));
}
