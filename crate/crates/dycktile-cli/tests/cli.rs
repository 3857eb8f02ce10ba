//! End-to-end checks of the binary: byte determinism, JSON round trips, and
//! exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dycktile"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn matrix_output_is_deterministic() {
    let a = run(&["matrix", "-n", "3", "--inverse", "--format", "json"]);
    let b = run(&["matrix", "-n", "3", "--inverse", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["entries"][0][4], "-2");
    assert_eq!(value["labels"][1]["set"], "{1,2,3,6}");
}

#[test]
fn exit_codes() {
    // cap exceeded -> 3
    let out = run(&["matrix", "-n", "99"]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("machine-readable error");
    assert_eq!(err["error"]["kind"], "cap-exceeded");
    // validation -> 2
    let out = run(&["tilings", "--shape", "UDUD"]);
    assert_eq!(out.status.code(), Some(2));
    // ok -> 0
    let out = run(&["qeuler", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn env_cap_override() {
    let out = bin()
        .env("DYCKTILE_MAX_N", "2")
        .args(["matrix", "-n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn graph_json_round_trip() {
    let dir = std::env::temp_dir().join("dycktile-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("graph.json");
    std::fs::write(
        &path,
        r#"{"vertices":4,"edges":[[0,1,1],[1,2,1],[2,3,1],[3,0,1]],"nodes":[0,1,2,3]}"#,
    )
    .unwrap();
    let out = run(&["oracle", "ddimer", "--graph", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["pairings"][0]["pairing"], "1-2,3-4");
    assert_eq!(value["pairings"][0]["probability"]["exact"], "1/2");
}

#[test]
fn x_matrix_distribution() {
    let dir = std::env::temp_dir().join("dycktile-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("x.json");
    std::fs::write(&path, r#"{"n":2,"entries":[[1,2,2],[1,4,3],[3,2,5],[3,4,7]]}"#).unwrap();
    let out = run(&["ddimer", "dist", "--x", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["pairings"][0]["probability"]["exact"], "14/29");
}

#[test]
fn evenly_spaced_limit_value() {
    let out = run(&[
        "ddimer",
        "evenly-spaced",
        "--mode",
        "limit",
        "--pairing",
        "1-2,3-4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let approx = value["approx"].as_f64().unwrap();
    assert!((approx - 0.246979).abs() < 1e-6);
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify-all", "-n", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("all checks passed"));
    assert!(!text.contains("FAIL"));
}
