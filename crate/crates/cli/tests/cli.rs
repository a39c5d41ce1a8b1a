//! End-to-end checks of the command-line surface: flags, formats, and the
//! exit-code contract (0 ok, 1 no-theorem/mismatch, 2 usage, 3 unsupported).

use std::process::{Command, Output};

fn stiefel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stiefel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn cohomology_markdown_large_prime() {
    let out = stiefel(&[
        "cohomology", "--space", "PW", "--n", "5", "--k", "2", "--p", "7", "--format", "markdown",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Lambda(gamma_5)"));
    assert!(text.contains("x^5"));
    assert!(text.contains("| 15 | 1 |"));
}

#[test]
fn cohomology_stiefel_exterior_degrees() {
    let out = stiefel(&["cohomology", "--space", "W", "--n", "3", "--k", "2", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let degrees: Vec<u64> = v["presentation"]["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["degree"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees, vec![3, 5]);
}

#[test]
fn cohomology_cyclic_quotient_table() {
    let out = stiefel(&[
        "cohomology", "--space", "WM", "--n", "4", "--k", "2", "--m", "10", "--p", "5",
        "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("2,0,1"), "torsion Z/5 in degree 2:\n{text}");
    assert!(text.contains("12,1,"), "top free class in degree 12:\n{text}");
}

#[test]
fn usage_errors_exit_2() {
    // k > n
    let out = stiefel(&["cohomology", "--space", "PW", "--n", "3", "--k", "4", "--p", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // even prime
    let out = stiefel(&["cohomology", "--space", "PW", "--n", "3", "--k", "2", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown flag (clap defaults to 2)
    let out = stiefel(&["cohomology", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
    // gcd of weights not 1
    let out = stiefel(&[
        "cohomology", "--space", "PLW", "--n", "3", "--k", "2", "--l", "2,4", "--p", "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unsupported_regime_exits_3() {
    // cyclic quotient with p | m but p <= n
    let out = stiefel(&[
        "cohomology", "--space", "WM", "--n", "6", "--k", "2", "--m", "10", "--p", "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // weighted quotient with a vanishing symmetric sum
    let out = stiefel(&[
        "cohomology", "--space", "PLW", "--n", "4", "--k", "2", "--l", "1,-1", "--p", "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cyclic_quotient_reduction_notice() {
    // p does not divide m: supported, reduces to the Stiefel manifold
    let out = stiefel(&[
        "cohomology", "--space", "WM", "--n", "4", "--k", "2", "--m", "9", "--p", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert!(v["notice"].as_str().unwrap().contains("does not divide"));
}

#[test]
fn verdict_exit_codes() {
    let applies = stiefel(&["verdict", "--space", "PW", "--n", "9", "--k", "3", "--p", "11"]);
    assert_eq!(applies.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&applies)).expect("json");
    assert_eq!(v["strongest"], serde_json::json!("C-unsplit"));
    assert_eq!(v["conclusion"]["space"]["space"], serde_json::json!("Y"));

    let stable = stiefel(&["verdict", "--space", "PW", "--n", "9", "--k", "8", "--p", "11"]);
    assert_eq!(stable.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&stable)).expect("json");
    assert_eq!(v["strongest"], serde_json::json!("B-projstsplit"));
    assert_eq!(v["stable_only"], serde_json::json!(true));

    let none = stiefel(&["verdict", "--space", "PW", "--n", "5", "--k", "2", "--p", "3"]);
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn verify_single_point_and_perturbation() {
    let ok = stiefel(&["verify", "--space", "PW", "--n", "3", "--k", "2", "--p", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).expect("json");
    assert_eq!(v["mismatches"], serde_json::json!(0));

    let bad = stiefel(&[
        "verify", "--space", "PW", "--n", "3", "--k", "2", "--p", "3", "--perturb",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&bad)).expect("json");
    assert_eq!(v["mismatches"], serde_json::json!(1));
    assert_eq!(v["points"][0]["first_mismatch_degree"], serde_json::json!(2));
}

#[test]
fn verify_trace_contains_pages() {
    let out = stiefel(&[
        "verify", "--space", "PW", "--n", "3", "--k", "2", "--p", "3", "--trace",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let pages = v["trace"]["pages"].as_array().expect("pages");
    assert!(!pages.is_empty());
    assert!(v["trace"]["dsquared_ok"].as_bool().unwrap());
}

#[test]
fn verify_grid_cap_enforced() {
    let out = stiefel(&["verify", "--grid", "9", "13"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_csv_round_trips_through_json() {
    let args_base = [
        "table", "--n-range", "2..4", "--k-range", "1..4", "--p-set", "5,7",
    ];
    let csv_out = stiefel(&[&args_base[..], &["--format", "csv"]].concat());
    let json_out = stiefel(&[&args_base[..], &["--format", "json"]].concat());
    assert_eq!(csv_out.status.code(), Some(0));
    assert_eq!(json_out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&json_out)).expect("json");
    let rows = v["rows"].as_array().expect("rows");
    let csv = stdout(&csv_out);
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines.len(), rows.len() + 1, "header plus one line per row");
    for (line, row) in lines[1..].iter().zip(rows) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[1], row["n"].to_string());
        assert_eq!(fields[2], row["k"].to_string());
        assert_eq!(fields[3], row["p"].to_string());
        assert_eq!(fields[5], row["strongest"].as_str().unwrap());
    }
}

#[test]
fn lens_space_cohomology() {
    let out = stiefel(&[
        "cohomology", "--space", "Lens", "--m", "5", "--dim", "5", "--p", "5", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0,1,"));
    assert!(text.contains("2,0,1"));
    assert!(text.contains("5,1,"));
}
