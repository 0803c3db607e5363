use std::fs;
use std::process::{Command, Output};

use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, Deserialize, PartialEq)]
struct Report {
    command: String,
    tool_version: String,
    inputs: Vec<Value>,
    parameters: Value,
    passed: bool,
    outputs: Value,
    timings_ms: Value,
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nervebar")).args(args).output().unwrap()
}

fn report(args: &[&str]) -> Report {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn ranks(r: &Report) -> Vec<(u64, Vec<String>)> {
    r.outputs["homology"]["entries"]
        .as_object()
        .unwrap()
        .values()
        .map(|g| {
            let t = g["torsion"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
            (g["free_rank"].as_u64().unwrap(), t)
        })
        .collect()
}

#[test]
fn sphere_homology() {
    let r = report(&["--window", "0..4", "homology", "sphere2"]);
    assert_eq!(r.command, "homology");
    let free: Vec<u64> = ranks(&r).into_iter().map(|(f, _)| f).collect();
    assert_eq!(free, vec![1, 0, 1, 0]);
}

#[test]
fn nerve_of_z2() {
    let r = report(&["--window", "0..5", "homology", "z2"]);
    let h = ranks(&r);
    assert_eq!(h.len(), 5);
    assert_eq!(h[0], (1, vec![]));
    assert_eq!(h[1], (0, vec!["2".to_string()]));
    assert_eq!(h[2], (0, vec![]));
    assert_eq!(h[3], (0, vec!["2".to_string()]));
    assert_eq!(h[4], (0, vec![]));
}

#[test]
fn csv_homology() {
    let out = run(&["--window", "0..3", "--format", "csv", "homology", "rp2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "degree,free_rank,torsion,exact");
    assert_eq!(lines[2], "1,0,2,true");
}

#[test]
fn circle_cobar_is_free_on_one_generator() {
    let r = report(&["--window", "0..2", "cobar", "sphere1"]);
    let p = &r.outputs["presentation"];
    assert_eq!(p["gens"].as_array().unwrap().len(), 1);
    assert_eq!(p["gens"][0]["deg"], 0);
    assert!(p["rels"].as_array().unwrap().is_empty());
}

#[test]
fn rp2_extended_cobar_differential() {
    let r = report(&["--window", "0..3", "extended-cobar", "rp2"]);
    assert_eq!(r.outputs["presentation"]["diff"]["f"], "-e*e - 2*e");
}

#[test]
fn weq_verdicts() {
    let r = report(&["--window", "0..4", "weq", "to-trivial:idempotent"]);
    assert_eq!(r.outputs["verdict"]["verdict"], "certified_equivalent");
    let r = report(&["--window", "0..4", "weq", "to-trivial:z2"]);
    assert_eq!(r.outputs["verdict"]["verdict"], "distinguished");
}

#[test]
fn map_from_file() {
    let dir = std::env::temp_dir().join(format!("nervebar-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.json");
    let map = serde_json::json!({
        "source": {"elements": ["1", "g"], "identity": "1", "table": [["1", "g"], ["g", "1"]]},
        "target": {"elements": ["1", "g"], "identity": "1", "table": [["1", "g"], ["g", "1"]]},
        "images": ["1", "g"],
    });
    fs::write(&path, map.to_string()).unwrap();
    let r = report(&["--window", "0..3", "weq", path.to_str().unwrap()]);
    assert_eq!(r.outputs["verdict"]["certificate"]["reason"], "isomorphism");
    assert_eq!(r.inputs[0]["sha256"].as_str().unwrap().len(), 64);

    let bad = dir.join("bad.json");
    fs::write(&bad, r#"{"elements": ["1", "g"], "identity": "1", "table": [["g", "g"], ["g", "1"]]}"#).unwrap();
    let out = run(&["homology", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "Monoid");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(run(&["homology", "no-such-thing"]).status.code(), Some(2));
    assert_eq!(run(&["--window", "4..2", "homology", "point"]).status.code(), Some(2));
    assert_eq!(run(&["cobar", "boundary2"]).status.code(), Some(2));
    assert_eq!(run(&["suite", "--case", "nope"]).status.code(), Some(2));
}

#[test]
fn report_round_trips() {
    let r = report(&["--window", "0..3", "pi1", "rp2"]);
    assert!(r.passed);
    assert_eq!(r.outputs["abelianization"], "Z/2");
    let text = serde_json::to_string(&serde_json::json!({
        "command": r.command,
        "tool_version": r.tool_version,
        "inputs": r.inputs,
        "parameters": r.parameters,
        "passed": r.passed,
        "outputs": r.outputs,
        "timings_ms": r.timings_ms,
    }))
    .unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

#[test]
fn same_seed_same_report() {
    let args = ["--seed", "7", "suite", "--case", "properties", "--cases", "5"];
    let mut a = report(&args);
    let mut b = report(&args);
    assert!(a.passed);
    a.timings_ms = Value::Null;
    b.timings_ms = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn suite_csv_and_out_file() {
    let path = std::env::temp_dir().join(format!("nervebar-suite-{}.csv", std::process::id()));
    let out = run(&["--format", "csv", "--out", path.to_str().unwrap(), "suite", "--case", "sphere-cobar"]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text, "criterion,case,passed\nA2,sphere-cobar,true");
    fs::remove_file(&path).ok();
}

#[test]
fn loop_group_levels() {
    let r = report(&["loopgroup", "sphere1", "--hi", "0"]);
    assert_eq!(r.outputs["levels"][0]["generators"], serde_json::json!(["e1"]));
}
