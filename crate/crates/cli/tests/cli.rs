//! End-to-end checks of the `stiefel-bp` binary.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stiefel-bp")).args(args).env_remove("STIEFEL_BP_PRIME").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn present_projective_space() {
    let out = run(&["present", "4", "1", "2"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"n\":4,\"k\":1,\"p\":2,\"gamma_degrees\":[],\"ideal\":[[1,4]],\"staircase\":[0],\"minimal_generators\":[4],\"gamma_multipliers\":[]}\n"
    );
}

#[test]
fn prime_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_stiefel-bp"))
        .args(["present", "4", "1"])
        .env("STIEFEL_BP_PRIME", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json(&out)["p"], 3);
}

#[test]
fn present_both_agrees() {
    let out = run(&["present", "8", "3", "2", "--both"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["cross_check"]["agree"], true);
    assert_eq!(v["closed_form"]["gamma_multipliers"], serde_json::json!([0, 2]));
}

#[test]
fn obstruct_bp_adams_example() {
    let out = run(&["obstruct", "10", "10", "6", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"], "ruled_out");
    let fired: Vec<&Value> = v["criteria"].as_array().unwrap().iter().filter(|c| c["fires"] == true).collect();
    assert_eq!(fired.len(), 1);
    assert_eq!(fired[0]["name"], "bp_adams");
    assert_eq!(fired[0]["witness"]["s"], 3);
}

#[test]
fn adams_series_pretty() {
    let out = run(&["series", "adams:3", "2", "8", "2", "--pretty"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "x + v1*x^2 + (13/7)*v2*x^4 + (1093/127)*v3*x^8");
}

#[test]
fn scan_csv_header_and_rows() {
    let out = run(&["scan", "4..5", "1..2", "4..5", "1..2", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k,m,l,verdict,first_firing_criterion");
    assert_eq!(lines.len(), 17);
    assert!(lines.contains(&"4,1,4,2,ruled_out,dimension"));
}

#[test]
fn scan_json_lines() {
    let out = run(&["scan", "10", "10", "6", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let v: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(v["verdict"], "ruled_out");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["present", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["present", "4", "1", "4"]).status.code(), Some(2));
    assert_eq!(run(&["obstruct", "3", "4", "5", "1"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("stiefel-bp-out-{}.json", std::process::id()));
    let out = run(&["obstruct", "4", "2", "5", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["verdict"], "ruled_out");
}

#[test]
fn output_is_byte_stable() {
    for args in [&["present", "9", "4", "3", "--both"][..], &["scan", "3..6", "1..3", "3..6", "1..3"], &["series", "fgl", "2", "4", "2"]] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn selfcheck_quick_passes_fast() {
    let start = Instant::now();
    let out = run(&["selfcheck", "--quick"]);
    assert!(start.elapsed() < Duration::from_secs(10));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn selfcheck_detects_mutated_transgression() {
    let out = run(&["selfcheck", "--quick", "--mutate-transgression"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(stderr.contains("[FAIL] 2 engine vs closed form"), "{stderr}");
    let v = json(&out);
    let two = v["suites"].as_array().unwrap().iter().find(|s| s["id"] == "2").unwrap();
    assert_eq!(two["passed"], false);
}
