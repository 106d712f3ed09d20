use std::process::{Command, Output};

use goldbach_core::scanner::{ScanReport, Status, CSV_HEADER};

fn goldbach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goldbach"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn scan_at_400_reports_p23() {
    let out = goldbach(&["scan", "ubh", "--at", "400", "--json"]);
    assert_eq!(code(&out), 1);
    let report = ScanReport::from_json(&stdout(&out)).unwrap();
    assert!(report
        .verdicts
        .iter()
        .any(|v| v.p == Some(23) && v.status == Status::Violated));
    assert_eq!(ScanReport::from_json(&report.to_json().unwrap()).unwrap(), report);
}

#[test]
fn scan_is_deterministic_across_workers() {
    let run = |w: &str| goldbach(&["scan", "ubh", "--from", "312", "--to", "700", "--workers", w, "--json"]);
    let (a, b) = (run("1"), run("3"));
    assert_eq!(code(&a), 1);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_has_fixed_header() {
    let out = goldbach(&["scan", "ubh", "--at", "1000", "--csv"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 8));
}

#[test]
fn checkpoint_resume_skips_finished_n() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("scan.tsv");
    let ck = ck.to_str().unwrap();
    goldbach(&["scan", "ubh", "--from", "312", "--to", "350", "--checkpoint", ck, "--stride", "5"]);
    let out = goldbach(&["scan", "ubh", "--from", "312", "--to", "400", "--checkpoint", ck, "--json"]);
    let report = ScanReport::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.summary.resumed, 39);
    assert_eq!(report.summary.checked, 89);
    let lines = std::fs::read_to_string(dir.path().join("scan.tsv")).unwrap();
    assert_eq!(lines.lines().count(), 89);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--suite", "bogus"],
        vec!["scan", "ubh"],
        vec!["scan", "ubh", "--from", "10", "--to", "5"],
        vec!["scan", "ubh", "--at", "6000000"],
        vec!["scan", "twin", "--at", "1"],
        vec!["scan", "twin", "--at", "3", "--m", "6"],
        vec!["eval", "error", "--n", "4", "--p", "15", "--x", "7"],
        vec!["eval", "density", "--n", "4", "--p", "12"],
        vec!["eval", "spectrum", "--n", "4"],
    ] {
        assert_eq!(code(&goldbach(&args)), 2, "{args:?}");
    }
}

#[test]
fn eval_examples() {
    let line = |args: &[&str]| stdout(&goldbach(args)).trim().to_string();
    assert_eq!(line(&["eval", "spectrum", "--n", "4", "--p-limit-product", "15", "--k", "1"]), "1.618033988750");
    assert_eq!(line(&["eval", "density", "--n", "4", "--p", "15"]), "1/5 (0.200000000000)");
    assert_eq!(line(&["eval", "witness", "--n", "5"]), "n=2 3+7");
    assert_eq!(line(&["eval", "witness", "--n", "1", "--m", "5"]), "n=12 13-11");
    assert_eq!(line(&["eval", "count", "--n", "4", "--p", "15", "--x", "20.5"]), "4");
    assert_eq!(line(&["eval", "error", "--n", "4", "--p", "15", "--x", "41/2"]), "-2/5 (-0.400000000000)");

    let out = goldbach(&["eval", "density", "--n", "4", "--p", "15", "--slice", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["omega"]["exact"], "2/15");
}

#[test]
fn verify_suites_pass() {
    for suite in ["sets", "modset", "spectra", "counting", "deduction", "density"] {
        let out = goldbach(&["verify", "--suite", suite, "--max-p", "2310", "--seed", "42"]);
        assert_eq!(code(&out), 0, "{suite}: {}", stdout(&out));
        assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
    }
}

#[test]
fn twin_scan_exit_follows_verdicts() {
    let out = goldbach(&["scan", "twin", "--n", "1", "--m", "11"]);
    assert_eq!(code(&out), 0);
    let out = goldbach(&["scan", "twin", "--n", "1", "--m", "101"]);
    assert_eq!(code(&out), 1);
}
