mod common;

use std::process::{Command, Output};

fn calabi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calabi")).args(args).output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

#[test]
fn preset_list() {
    let out = calabi(&["preset-list"]);
    assert_eq!(out.status.code(), Some(0));
    let s = text(&out.stdout);
    for name in ["tetra_sphere", "icosahedron", "one_vertex_torus", "genus2_one_vertex", "flat_torus_16"] {
        assert!(s.contains(name), "{s}");
    }
}

#[test]
fn flow_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let summary = dir.path().join("summary.txt");
    let out = calabi(&[
        "flow",
        "--preset",
        "tetra_sphere",
        "--structure",
        "cp-euclidean",
        "--s",
        "1",
        "--target",
        "uniform",
        "--u0",
        "random(3,0.4)",
        "--trace",
        trace.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let t = std::fs::read_to_string(&trace).unwrap();
    assert!(t.starts_with("# format=1\n"));
    assert!(t.lines().count() > 3);
    let s = std::fs::read_to_string(&summary).unwrap();
    assert!(s.contains("converged=true"), "{s}");
}

#[test]
fn negative_orders_parse() {
    let out = calabi(&["flow", "--preset", "icosahedron", "--structure", "cp-hyperbolic", "--target", "derived", "--u0", "random(1,0.2)", "--s", "-0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("s=-0.5"));
}

#[test]
fn invalid_target_is_a_usage_error() {
    let out = calabi(&["flow", "--preset", "tetra_sphere", "--structure", "cp-euclidean", "--target", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("InvalidTarget"), "{}", text(&out.stderr));
}

#[test]
fn bad_flags_fail() {
    assert_eq!(calabi(&["flow", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(calabi(&["bogus"]).status.code(), Some(1));
    let out = calabi(&["flow", "--preset", "klein_bottle", "--structure", "cp-euclidean"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_reports_spectrum() {
    let out = calabi(&["check", "--preset", "one_vertex_torus", "--structure", "vs-euclidean"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let s = text(&out.stdout);
    assert!(s.contains("zero_eigenvalues=1"), "{s}");
    assert!(s.contains("structure_condition=ok"));
}

#[test]
fn check_and_sweep_from_config() {
    let cfg = common::experiments_dir().join("torus_surgery_one_vertex.cfg");
    let out = calabi(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let out = calabi(&["sweep", "--config", cfg.to_str().unwrap(), "--s", "-1,0,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let table = text(&out.stdout);
    assert_eq!(table.lines().filter(|l| l.contains("converged")).count(), 3, "{table}");
}
