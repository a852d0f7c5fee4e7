//! The `analytic-content` binary: reports, CSV output and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_analytic-content"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("report is JSON")
}

#[test]
fn content_reports_and_certifies_annulus() {
    let out = run(&["content", config("annulus.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "content");
    let lambda = r["results"]["content"]["lambda_hat"].as_f64().unwrap();
    assert!((lambda - 1.0).abs() < 1e-3);
    assert_eq!(r["results"]["certificates"]["lp_crosscheck"]["sandwich_holds"], true);
    assert_eq!(r["results"]["certificates"]["interior"]["below_lambda_hat"], true);
    assert_eq!(r["results"]["certificates"]["interior"]["seed"], 7);
}

#[test]
fn out_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let csv_path = dir.path().join("residuals.csv");
    let out = run(&[
        "content",
        config("square.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
        "--samples",
        "128",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["config"]["solver"]["samples"], 128);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,component,abs_residual"));
    assert!(lines.count() >= 128);
}

#[test]
fn bounds_of_the_square() {
    let r = report(&run(&["bounds", config("square.json").to_str().unwrap()]));
    let b = &r["results"]["domain"]["bounds"];
    assert!((b["lower"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((b["upper"].as_f64().unwrap() - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
}

#[test]
fn classify_ellipse_is_not_extremal() {
    let out = run(&["classify", config("ellipse.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = &report(&out)["results"]["classification"];
    assert_eq!(c["is_extremal"], false);
    assert!(c["gap"].as_f64().unwrap() >= 0.03);
}

#[test]
fn unconverged_classify_exits_three_without_a_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(
        &path,
        r#"{"domain": {"outer": {"type": "polygon", "vertices": [[-1,-1],[1,-1],[1,1],[-1,1]]}},
            "solver": {"max_iterations": 2, "max_refinements": 0, "lp_directions": 0}}"#,
    )
    .unwrap();
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert!(r["results"]["classification"].is_null());
    assert!(r["results"]["diagnostic"].is_string());
}

#[test]
fn covariance_command() {
    let out = run(&["covariance", config("covariance.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = &report(&out)["results"]["covariance"];
    assert!((c["lambda_ratio"].as_f64().unwrap() - 2f64.sqrt()).abs() < 2e-3);
}

#[test]
fn verify_connection_and_overrides() {
    let out = run(&["verify-connection", "--r1", "2", "--r2", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["config"]["connection"]["r1"], 2.0);
    let out = run(&["verify-connection", "--r1", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quantize_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("q.csv");
    let out = run(&["quantize", "--lambda", "0.5", "--n-max", "4", "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn sweep_rows() {
    let out = run(&["sweep", config("sweep.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = report(&out)["results"]["rows"].as_array().unwrap().len();
    assert_eq!(rows, 7);
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"domain": {"outer": {"type": "circle", "center": [0, 0], "radius": 3},
            "holes": [{"type": "circle", "center": [0, 0], "radius": "one"}]}}"#,
    )
    .unwrap();
    let out = run(&["content", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("domain.holes[0].radius"), "{stderr}");
    assert!(stderr.contains("bad.json:"), "{stderr}");
}

#[test]
fn invalid_geometry_and_arguments_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bowtie.json");
    std::fs::write(&path, r#"{"domain": {"outer": {"type": "polygon", "vertices": [[0,0],[1,1],[1,0],[0,1]]}}}"#).unwrap();
    let out = run(&["content", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-intersects"));
    assert_eq!(run(&["transmogrify"]).status.code(), Some(2));
    assert_eq!(run(&["content"]).status.code(), Some(2));
    assert_eq!(run(&["content", "/nonexistent/x.json"]).status.code(), Some(2));
}
