use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn moneygraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moneygraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("moneygraph-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn run_bundled_scenario() {
    let dir = scratch("run");
    let trace = dir.join("trace.jsonl");
    let csv = dir.join("series.csv");
    let path = scenarios().join("endogenous.mgs");
    let out = moneygraph(&[
        "run",
        path.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains(": ok ("));
    let series = std::fs::read_to_string(csv).unwrap();
    assert!(series.starts_with("step,base,broad,net\n"));
    for line in std::fs::read_to_string(trace).unwrap().lines() {
        serde_json::from_str::<Value>(line).unwrap();
    }
}

#[test]
fn every_bundled_scenario_exits_zero() {
    for entry in std::fs::read_dir(scenarios()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "mgs") {
            let out = moneygraph(&["run", path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn missing_file() {
    let out = moneygraph(&["run", "/nonexistent/none.mgs"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no such file"));
}

#[test]
fn failed_assert_names_the_line() {
    let dir = scratch("assert");
    let path = dir.join("bad.mgs");
    std::fs::write(
        &path,
        "regime fiat\nagent cb kind=central_bank issues=DOM\nagent b1 kind=bank\nagent h1 kind=nonbank\n\
         op create_loan bank=b1 borrower=h1 amount=100\nassert broad_money == 99\n",
    )
    .unwrap();
    let out = moneygraph(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 6"), "{err}");
    assert!(err.contains("actual 100"), "{err}");
}

#[test]
fn parse_error_has_position() {
    let dir = scratch("parse");
    let path = dir.join("bad.mgs");
    std::fs::write(&path, "regime fiat\nagent cb kind=wizard\n").unwrap();
    let out = moneygraph(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column"), "{err}");
}

#[test]
fn pegsim_matches_oracle() {
    let out = moneygraph(&[
        "pegsim", "--reserves", "2", "--deltas", "+1:1/2,-1:1/2", "--horizon", "4", "--trials", "100000",
        "--seed", "42", "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["exact"], "3/8");
    assert_eq!(doc["trials"], 100000);
    let dev = doc["deviation"].as_f64().unwrap();
    let p: f64 = 3.0 / 8.0;
    assert!(dev <= 3.0 * (p * (1.0 - p) / 1e5).sqrt(), "{doc}");
}

#[test]
fn pegsim_is_reproducible() {
    let dir = scratch("peg");
    let csv = dir.join("steps.csv");
    let args = [
        "pegsim", "--reserves", "3", "--deltas", "+1:1/2,-1:1/2", "--horizon", "20", "--trials", "2000",
        "--seed", "9", "--steps-csv", csv.to_str().unwrap(),
    ];
    let a = moneygraph(&args);
    let first = std::fs::read(&csv).unwrap();
    let b = moneygraph(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first, std::fs::read(&csv).unwrap());
}

#[test]
fn pegsim_rejects_bad_input() {
    let bad_sum = moneygraph(&["pegsim", "--reserves", "2", "--deltas", "+1:3/4,-1:3/4", "--horizon", "4", "--trials", "10"]);
    assert_eq!(bad_sum.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_sum.stderr).contains("ErrBadDistribution"));
    let no_trials = moneygraph(&["pegsim", "--reserves", "2", "--deltas", "+1:1/2,-1:1/2", "--horizon", "4", "--trials", "0"]);
    assert_eq!(no_trials.status.code(), Some(2));
}
