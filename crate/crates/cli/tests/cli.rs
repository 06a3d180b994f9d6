//! End-to-end tests of the command-line surface.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_smoothext"))
}

fn write_tmp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("smoothext-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn omega_1d() -> PathBuf {
    write_tmp("omega1.json", r#"{"boxes": [[[-2.0, 2.0]]], "open": true}"#)
}

fn window_1d() -> PathBuf {
    write_tmp("win1.json", r#"{"boxes": [[[-1.25, 1.25]]], "open": false}"#)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn smooth_term_count_matches_enumeration() {
    let omega = omega_1d();
    let window = window_1d();
    let out = run(&[
        "smooth",
        "--fn",
        "sin(x1)",
        "--order",
        "1",
        "--scale",
        "8",
        "--domain",
        omega.to_str().unwrap(),
        "--window",
        window.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let terms = v["terms"].as_array().unwrap();
    // Φ_8([-1.25, 1.25]) on Ω = (-2,2): supp h_{8,z} ∩ window ≠ ∅ means
    // |z/8| < 1.25 + 1/8, and every such cube fits in Ω: z ∈ {-10..10}
    assert_eq!(terms.len(), 21);
    assert_eq!(v["ell"], 1);
    assert_eq!(v["m"], 1);
}

#[test]
fn identical_invocations_identical_bytes() {
    let omega = omega_1d();
    let window = window_1d();
    let args = [
        "smooth",
        "--fn",
        "exp(0.5*x1)",
        "--order",
        "2",
        "--scale",
        "4",
        "--domain",
        omega.to_str().unwrap(),
        "--window",
        window.to_str().unwrap(),
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let report_args = [
        "report",
        "--kind",
        "bound",
        "--dim",
        "1",
        "--order",
        "1",
        "--scale",
        "8",
    ];
    let a = run(&report_args);
    let b = run(&report_args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn convergence_csv_lists_scales_verbatim() {
    let omega = omega_1d();
    let out = run(&[
        "report",
        "--kind",
        "convergence",
        "--fn",
        "sin(x1)",
        "--domain",
        omega.to_str().unwrap(),
        "--order",
        "1",
        "--scales",
        "4,8,16,32",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first_col: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(first_col, vec!["4", "8", "16", "32"]);
    // header row present, LF endings, dot decimals
    assert!(text.starts_with("n,err_C0,err_C1\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn bound_report_prints_profile_provenance() {
    let out = run(&[
        "report", "--kind", "bound", "--dim", "1", "--order", "0", "--scale", "8",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# profile: xi(x) = prod_i g(x_i)"));
    assert!(text.contains("# h0_cl_norm"));
    assert!(text.contains("# constant"));
}

#[test]
fn extend_reports_face_diagnostics() {
    let out = run(&[
        "extend",
        "--fn",
        "exp(x1)",
        "--source",
        "cube",
        "--order",
        "1",
        "--dim",
        "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let diag = text
        .lines()
        .find(|l| l.starts_with("# max_one_sided_jet_mismatch"))
        .expect("diagnostic line");
    let value: f64 = diag.split(',').nth(1).unwrap().parse().unwrap();
    assert!(value < 1e-4, "face mismatch {value}");
}

#[test]
fn corner_source_spec() {
    let out = run(&[
        "extend",
        "--fn",
        "x1+x2",
        "--source",
        "corner:2",
        "--order",
        "1",
        "--dim",
        "2",
        "--grid",
        "5",
    ]);
    assert!(out.status.success());
}

#[test]
fn dugundji_report_runs() {
    let set = write_tmp(
        "set1.json",
        r#"{"boxes": {"boxes": [[[0.0, 1.0]]], "open": false}, "points": [[-2.0]]}"#,
    );
    let window = write_tmp("dwin.json", r#"{"boxes": [[[-1.0, 2.0]]], "open": false}"#);
    let out = run(&[
        "dugundji",
        "--fn",
        "sin(x1)",
        "--set",
        set.to_str().unwrap(),
        "--window",
        window.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("query,d_Y,shell,value_0,hull_ok\n"));
    assert!(text.contains("# sup_ratio"));
}

#[test]
fn selftest_exits_zero() {
    let out = run(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("suites passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["report", "--kind", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["--definitely-not-a-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown flags on a subcommand are rejected
    let out = run(&["selftest", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_domain_reports_context() {
    let bad = write_tmp("bad.json", r#"{"boxen": []}"#);
    let window = window_1d();
    let out = run(&[
        "smooth",
        "--fn",
        "sin(x1)",
        "--order",
        "1",
        "--scale",
        "4",
        "--domain",
        bad.to_str().unwrap(),
        "--window",
        window.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("parsing box union"));
}
