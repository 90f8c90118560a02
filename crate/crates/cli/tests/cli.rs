use std::io::Write as _;
use std::process::{Command, Output, Stdio};

use bbd_core::{build_d10, build_d8, BipartiteDigraph};
use tempfile::NamedTempFile;

fn bbd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbd")).args(args).output().expect("bbd runs")
}

fn file_with(d: &BipartiteDigraph) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(d.to_bbd().as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let d8 = file_with(&build_d8());
    let out = bbd(&["check", path(&d8), "--condition", "max_dominating", "--bound", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["holds"], true);

    let out = bbd(&["check", path(&d8), "--condition", "Bk", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["condition"], "Bk");
    assert_eq!(report["witness"]["u"], "X0");
    assert_eq!(report["witness"]["degree_u"], 3);
    for key in ["condition", "params", "holds", "vacuous", "witness"] {
        assert!(report.get(key).is_some(), "{key}");
    }
}

#[test]
fn malformed_input_exits_with_2() {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(b"a=4\nX0 -> X1\n").unwrap();
    let out = bbd(&["analyze", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(bbd(&["check", "/nonexistent.bbd", "--condition", "strong"]).status.code(), Some(2));
    assert_eq!(bbd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bbd(&["experiment", "no_such_experiment"]).status.code(), Some(2));
}

#[test]
fn stdin_is_accepted() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bbd"))
        .args(["hamiltonian", "-", "--format", "text"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(build_d8().to_bbd().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "hamiltonian: none\n");
}

#[test]
fn analyze_reports_the_reference_digraphs() {
    let d8 = file_with(&build_d8());
    let r = json(&bbd(&["analyze", path(&d8), "--k", "2"]));
    assert_eq!(r["strong"]["holds"], true);
    assert_eq!(r["hamiltonian"]["hamiltonian"], false);
    assert_eq!(r["bk"]["holds"], false);
    assert_eq!(r["cycle_factor"]["outcome"], "factor");

    let d10 = file_with(&build_d10());
    let r = json(&bbd(&["analyze", path(&d10)]));
    assert_eq!(r["two_connectivity"]["verdict"], "cut_vertex");
    let spectrum: Vec<u64> = r["even_cycle_spectrum"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert!(!spectrum.contains(&8));
}

#[test]
fn cycle_factor_text_lines() {
    let d8 = file_with(&build_d8());
    let out = bbd(&["cycle-factor", path(&d8), "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 1);
    assert!(text.lines().all(|l| l.starts_with("cycle: X")));
}

#[test]
fn bypass_and_spectrum() {
    let d10 = file_with(&build_d10());
    let out = bbd(&["bypass", path(&d10), "--cycle", "X0 Y0", "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bbd(&["bypass", path(&d10), "--cycle", "X1 Y1 X3 Y3 X2 Y2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(bbd(&["bypass", path(&d10), "--cycle", "X0 X1"]).status.code(), Some(2));
    let out = bbd(&["spectrum", path(&d10), "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2\n4\n6\n");
}

#[test]
fn gen_stream_parses_back() {
    let out = bbd(&["gen", "--a", "4", "--k", "2", "--seed", "9", "--count", "5", "--bk", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let digraphs = bbd_core::format::parse_bbd_stream(&text).unwrap();
    assert_eq!(digraphs.len(), 5);
    assert!(digraphs.iter().all(|d| bbd_core::check_condition_bk(d, 2).holds && d.is_strongly_connected()));

    let mut config = NamedTempFile::new().unwrap();
    config.write_all(br#"{"a": 3, "seed": 9, "arc_probability": 0.5}"#).unwrap();
    let from_file = bbd(&["gen", "--config", path(&config), "--format", "text"]);
    let from_flags = bbd(&["gen", "--a", "3", "--seed", "9", "--arc-prob", "0.5", "--format", "text"]);
    assert_eq!(from_file.stdout, from_flags.stdout);
    assert_eq!(bbd(&["gen", "--arc-prob", "1.5"]).status.code(), Some(2));
}

#[test]
fn stable_experiment_output_is_byte_identical() {
    let args = ["experiment", "all", "--a", "5", "--k", "2", "--seed", "12", "--count", "150", "--stable"];
    let first = bbd(&args);
    let second = Command::new(env!("CARGO_BIN_EXE_bbd")).args(args).env("BBD_THREADS", "1").output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let lines: Vec<_> = std::str::from_utf8(&first.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 5);
    for line in lines {
        let r: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(r.get("wall_time_ms").is_none());
        assert_eq!(r["generator"], "xoshiro256++/splitmix64-seeded");
    }
}

#[test]
fn wang_search_rejects_small_orders_and_reports_coverage() {
    assert_eq!(bbd(&["wang-search", "--a", "3", "--k", "1"]).status.code(), Some(2));
    assert_eq!(bbd(&["wang-search", "--a", "6", "--k", "4"]).status.code(), Some(2));
    let out = bbd(&["wang-search", "--a", "4", "--k", "2", "--count", "200", "--seed", "5", "--stable"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["checks"]["wang_problem.checked"], 200);
    assert_eq!(r["complete"], true);
}

#[test]
fn reference_verification_passes() {
    let out = bbd(&["verify-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["assertion_count"], r["passed"]);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out =
        Command::new(env!("CARGO_BIN_EXE_bbd")).args(["verify-paper"]).env("BBD_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
