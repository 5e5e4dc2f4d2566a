use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn edl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn construct_d_nrs_as_adm() {
    let o = edl(&[
        "construct",
        "--family",
        "d-nrs",
        "--n",
        "10",
        "--r",
        "4",
        "--s",
        "1",
        "--format",
        "adm",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 11);
    assert_eq!(
        text.lines()
            .skip(1)
            .flat_map(|l| l.chars())
            .filter(|&c| c == '1')
            .count(),
        50
    );
}

#[test]
fn construct_json_reports_partition_and_flag() {
    let o = edl(&["construct", "--family", "d-nrs-bipartite", "--n", "8", "--r", "4"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["arc_count"], 18);
    assert_eq!(v["first_class"].as_array().unwrap().len(), 4);
}

#[test]
fn construct_rejects_bad_parameters() {
    let o = edl(&["construct", "--family", "gamma-bar", "--d", "5", "--s", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--s"));
    let o = edl(&["construct", "--family", "d-nrs", "--n", "10"]);
    assert_eq!(o.status.code(), Some(1));
    let o = edl(&["construct", "--family", "no-such-family"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn metrics_of_bundled_figure() {
    let o = edl(&["metrics", &data("fig8-left.adm")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\"wiener\":45"));
    assert!(text.contains("\"rad2\":5"));
}

#[test]
fn formula_values() {
    let o = edl(&["formula", "--bound", "vizing-f", "--n", "10", "--r", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 24);
    let o = edl(&["formula", "--bound", "gamma-2r1", "--rad2", "6"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 27);
    let o = edl(&["formula", "--bound", "vizing-f", "--n", "4", "--r", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(edl(&["metrics", "--bogus"]).status.code(), Some(1));
    assert_eq!(edl(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(edl(&["--help"]).status.code(), Some(0));
    assert_eq!(edl(&["search", "--n", "1"]).status.code(), Some(1));
}

#[test]
fn convert_round_trip_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("d.json");
    let o = edl(&["convert", &data("fig9-left.adm"), "--to", "json"]);
    assert!(o.status.success());
    std::fs::write(&json, stdout(&o)).unwrap();
    let back = edl(&["convert", json.to_str().unwrap(), "--to", "adm"]);
    assert_eq!(stdout(&back), std::fs::read_to_string(data("fig9-left.adm")).unwrap());

    let dup = dir.path().join("dup.json");
    std::fs::write(&dup, r#"{"n":3,"arcs":[[0,1],[0,1],[1,2]]}"#).unwrap();
    let o = edl(&["convert", dup.to_str().unwrap(), "--to", "adm"]);
    assert_eq!(stdout(&o), "3\n010\n001\n000\n");

    let bad = dir.path().join("bad.adm");
    std::fs::write(&bad, "3\n010\n0010\n000\n").unwrap();
    let o = edl(&["convert", bad.to_str().unwrap(), "--to", "json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = edl(&["convert", &data("fig8-left.adm"), "--to", "dot"]);
    assert!(stdout(&o).starts_with("digraph"));
}

fn without_time(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["wall_time_ms"] = Value::Null;
    v
}

#[test]
fn search_is_deterministic_across_threads() {
    let args = ["search", "--n", "5", "--strong", "--rad2", "5"];
    let a = edl(&args);
    let b = edl(&[&args[..], &["--threads", "4"]].concat());
    assert!(a.status.success() && b.status.success());
    let (mut a, mut b) = (without_time(&stdout(&a)), without_time(&stdout(&b)));
    assert_eq!(a["extremal_value"], 11);
    assert_eq!(a["iso_classes"].as_array().unwrap().len(), 7);
    a["task"]["threads"] = Value::Null;
    b["task"]["threads"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn search_adm_output_lists_classes() {
    let o = edl(&[
        "search",
        "--n",
        "4",
        "--bipartite",
        "2+2",
        "--strong",
        "--format",
        "adm",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "4\n0011\n0011\n1100\n1100\n");
}

#[test]
fn verify_writes_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let reports = dir.path().join("reports");
    let o = edl(&[
        "verify",
        "--check",
        "rad3",
        "--n",
        "6",
        "--depth",
        "exhaustive",
        "--threads",
        "8",
        "--reports-dir",
        reports.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "CONFIRMED");
    assert!(reports.join("rad3-n6-r3.json").exists());

    let o = edl(&[
        "verify",
        "--check",
        "fridman",
        "--depth",
        "formula",
        "--reports-dir",
        reports.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let summary = std::fs::read_to_string(reports.join("summary.md")).unwrap();
    assert!(summary.starts_with("| check |"));
    assert!(summary.contains("| RAD3 | n6-r3 | Exhaustive | Theorem | Confirmed |"));
    assert!(summary.contains("| FRIDMAN |"));
}

#[test]
fn verify_rejects_unsupported_requests() {
    let o = edl(&["verify", "--check", "asymp-remark", "--depth", "exhaustive"]);
    assert_eq!(o.status.code(), Some(1));
    let o = edl(&["verify", "--check", "rad3", "--n", "40", "--depth", "exhaustive"]);
    assert_eq!(o.status.code(), Some(1));
    let o = edl(&["verify", "--list"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 12);
}

#[test]
fn iso_classify_groups_files() {
    let dir = tempfile::tempdir().unwrap();
    let relabeled = dir.path().join("r.adm");
    let o = edl(&["convert", &data("fig8-left.adm"), "--to", "adm"]);
    // Reverse the vertex order by reversing rows and columns.
    let text = stdout(&o);
    let mut lines: Vec<String> = text.lines().skip(1).map(|l| l.chars().rev().collect()).collect();
    lines.reverse();
    std::fs::write(&relabeled, format!("6\n{}\n", lines.join("\n"))).unwrap();
    let o = edl(&[
        "iso-classify",
        &data("fig8-left.adm"),
        &data("fig9-left.adm"),
        relabeled.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sizes: Vec<usize> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["members"].as_array().unwrap().len())
        .collect();
    let mut sorted = sizes.clone();
    sorted.sort();
    assert_eq!(sorted, [1, 2]);
}
