//! End-to-end tests of the command-line binary: output contract (sorted
//! JSON, CSV rows, exact rationals), determinism, exit-status contract,
//! and usage-error reporting.

use gaplab::{render, Format, Report};
use serde_json::Value;
use std::process::{Command, Output};

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaplab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn equal_configs_produce_byte_identical_output() {
    for args in [
        vec!["--scenario", "kretschmer-gap", "--format", "json"],
        vec!["--scenario", "kretschmer-gap", "--format", "csv"],
        vec!["--scenario", "sublinear-checks", "--seed", "42"],
        vec!["--scenario", "hilbert", "--trunc", "8"],
    ] {
        let first = run_cli(&args);
        let second = run_cli(&args);
        assert_eq!(
            first.stdout, second.stdout,
            "reruns of {args:?} must not differ"
        );
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn json_report_parses_and_round_trips_with_sorted_keys() {
    let out = run_cli(&["--scenario", "kretschmer-gap"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let doc: Value = serde_json::from_str(&text).expect("valid json");

    // Round trip: serializing the parsed document reproduces the text,
    // which also proves the keys were already in sorted order.
    let mut again = serde_json::to_string_pretty(&doc).expect("serializable");
    again.push('\n');
    assert_eq!(text, again);

    assert_eq!(doc["scenario"], "kretschmer-gap");
    assert_eq!(doc["results"]["gap"], "1/1");
    assert_eq!(doc["results"]["analytic-val-p"], "2/1");
    assert_eq!(doc["results"]["analytic-val-d"], "1/1");
    let checks = doc["checks"].as_array().expect("checks array");
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == Value::Bool(true)));
}

#[test]
fn gap_scenario_csv_contains_the_unit_gap_row() {
    let out = run_cli(&["--scenario", "kretschmer-gap", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.lines().any(|l| l == "gap,1/1"),
        "expected a `gap,1/1` row in:\n{text}"
    );
    assert!(text.lines().next() == Some("scenario,kretschmer-gap"));
    assert!(text.lines().any(|l| l.starts_with("check,") && l.contains(",pass,")));
}

#[test]
fn rendering_an_empty_report_yields_a_valid_document() {
    let report = Report {
        scenario: "soc",
        params: Vec::new(),
        results: Vec::new(),
        checks: Vec::new(),
    };
    let text = render(&report, Format::Json);
    let doc: Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(doc["checks"], Value::Array(Vec::new()));
    assert_eq!(doc["scenario"], "soc");
}

#[test]
fn cone_scenario_reports_the_closed_form_and_the_semicontinuity_failure() {
    let out = run_cli(&["--scenario", "soc"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(doc["results"]["value"], "3/1");
    assert_eq!(doc["results"]["biconjugate-value"], "0/1");
    assert_eq!(doc["results"]["liminf-estimate"], "0/1");
    let checks = doc["checks"].as_array().expect("checks array");
    let lsc = checks
        .iter()
        .find(|c| c["name"] == "lsc-violated-along-boundary")
        .expect("lsc check present");
    assert_eq!(lsc["pass"], Value::Bool(true));
}

#[test]
fn pathology_scenario_reports_both_witness_gaps() {
    let out = run_cli(&["--scenario", "pathology"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    // Upward gap: 0 along the witness vs -1 at the base.
    assert_eq!(doc["results"]["usc-liminf"], "0/1");
    assert_eq!(doc["results"]["usc-value"], "-1/1");
    // Downward gap: -2 along the witness vs -1 at the base.
    assert_eq!(doc["results"]["lsc-liminf"], "-2/1");
    assert_eq!(doc["results"]["lsc-value"], "-1/1");
}

#[test]
fn failing_check_exits_one_but_still_prints_the_report() {
    // A two-node brute grid misses the cone entirely, so the agreement
    // check fails while the report is still rendered in full.
    let out = run_cli(&["--scenario", "soc", "--cells", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    let checks = doc["checks"].as_array().expect("checks array");
    assert!(checks
        .iter()
        .any(|c| c["name"] == "brute-agrees-with-closed-form" && c["pass"] == Value::Bool(false)));
    assert!(checks
        .iter()
        .any(|c| c["name"] == "closed-form-value" && c["pass"] == Value::Bool(true)));
}

#[test]
fn usage_errors_exit_two_and_name_the_offending_field() {
    let cases: &[(&[&str], &str)] = &[
        (&["--scenario", "warp"], "scenario"),
        (&["--scenario", "soc", "--alpha", "2"], "alpha"),
        (&["--scenario", "kretschmer", "--delta", "1/3"], "delta"),
        (&["--scenario", "kretschmer-gap", "--gamma", "0,1/2"], "gamma"),
        (&["--scenario", "kretschmer-gap", "--format", "yaml"], "format"),
        (&["--scenario", "kretschmer", "--mode", "fast"], "mode"),
        (&["--scenario", "hilbert", "--witness-m", "99"], "witness-m"),
        (&["--scenario", "hilbert", "--trunc", "0"], "trunc"),
        (&["--scenario", "unbounded", "--eta0", "0"], "eta0"),
        (&["--scenario", "unbounded", "--levels", "0"], "levels"),
        (&["--scenario", "soc", "--tol", "-1"], "tol"),
        (&["--scenario", "kretschmer", "--b-file", "/nonexistent/b.csv"], "b-file"),
    ];
    for (args, field) in cases {
        let out = run_cli(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        let err = stderr_of(&out);
        assert!(
            err.contains(field),
            "stderr for {args:?} must name `{field}`: {err}"
        );
        assert!(out.stdout.is_empty(), "no report on usage error");
    }
}

#[test]
fn malformed_flags_are_rejected_by_the_parser() {
    let out = run_cli(&["--scenario", "soc", "--cells", "many"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("--cells"));

    let out = run_cli(&["--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("--no-such-flag"));
}

#[test]
fn grid_function_files_feed_the_discretization() {
    let dir = std::env::temp_dir().join("gaplab-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("rhs.csv");
    std::fs::write(&path, "cells=4\n1/1\n1/1\n0/1\n0/1\n").expect("write rhs");
    let p = path.to_str().expect("utf8 path");

    let out = run_cli(&["--scenario", "kretschmer", "--b-file", p]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    // chi_[0,1/2] at four cells: exact primal 1/2 + 1/8, dual 1/2.
    assert_eq!(doc["results"]["discrete-val-p"], "5/8");
    assert_eq!(doc["results"]["discrete-val-d"], "1/2");
    assert_eq!(doc["results"]["gap"], "1/8");

    // The cells flag must agree with the file when both are given.
    let out = run_cli(&["--scenario", "kretschmer", "--b-file", p, "--cells", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("cells"));

    let out = run_cli(&["--scenario", "kretschmer", "--b-file", p, "--cells", "4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sampled_mode_reports_the_under_approximation() {
    let out = run_cli(&[
        "--scenario",
        "kretschmer",
        "--mode",
        "sampled",
        "--cells",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(doc["results"]["discrete-val-p"], "9/16");
    assert_eq!(doc["results"]["discrete-val-p-sampled"], "7/16");
    assert_eq!(doc["results"]["discrete-val-d"], "1/2");
}
