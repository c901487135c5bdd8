//! End-to-end tests of the binary: command grammar, documented exit codes,
//! and byte-identical reruns.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphlim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("graphlim-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn generate_paley_writes_a_valid_edge_list() {
    let out = tmp("paley.el");
    let path = out.to_str().unwrap();
    stdout(&["generate", "--family", "paley", "--p", "13", "--out", path]);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("13 39"));
    assert_eq!(lines.count(), 39);
    std::fs::remove_file(&out).unwrap();
}

#[test]
fn density_emits_a_single_exact_csv_row() {
    let text = stdout(&["density", "--kind", "t", "--F", "triangle", "--G", "k4"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "kind,F,G,value");
    // t(K3, K4) = 4*3*2 / 4^3 = 3/8
    assert_eq!(lines[1], "t,triangle,k4,0.375");
}

#[test]
fn converge_uniform_attachment_edge_density_approaches_one_third() {
    let text = stdout(&[
        "converge",
        "--family",
        "uniform-attachment",
        "--sizes",
        "500,1000,2000",
        "--F",
        "edge",
        "--seed",
        "7",
    ]);
    let last = text.lines().last().unwrap();
    let mean: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
    assert!((mean - 1.0 / 3.0).abs() < 0.02, "last row mean {mean}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "graphon",
        "--W",
        "ua",
        "--F",
        "triangle",
        "--samples",
        "5000",
        "--seed",
        "42",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn missing_seed_for_stochastic_command_is_a_usage_error() {
    let out = run(&["generate", "--family", "er", "--n", "5", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_arguments_exit_2() {
    let out = run(&["density", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn size_bound_violations_exit_3_and_name_the_bound() {
    let out = run(&["count", "--F", "k10", "--G", "k5"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("size bound"), "stderr: {err}");
    assert!(err.contains("10 > 9"), "stderr: {err}");
}

#[test]
fn certificate_round_trips_through_the_binary() {
    let cert = tmp("goodman.json");
    let path = cert.to_str().unwrap();
    stdout(&["algebra", "goodman", "--out", path]);
    let report = stdout(&["algebra", "verify-certificate", "--cert", path]);
    assert!(report.contains("\"matches\": true"));
    std::fs::remove_file(&cert).unwrap();
}

#[test]
fn paper_check_flag_reports_a_criterion() {
    let out = run(&["--paper-check", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("criterion 01 [PASS]"), "stdout: {text}");
}

#[test]
fn version_includes_a_build_hash() {
    let text = stdout(&["--version"]);
    // "graphlim <semver>+<hash>"
    assert!(text.trim().contains('+'), "version line: {text}");
}
