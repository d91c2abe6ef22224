use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use slice_junta::io::read_slice_function;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slice-junta"))
        .args(args)
        .env_remove("SLICEJUNTA_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dictator_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.json");
    let out = run(&["construct", "dictator", "--n", "4", "--k", "2", "--coord", "1", "--out", path(&file)]);
    assert!(out.status.success());
    let report = json(&["analyze", "--input", path(&file)]);
    assert_eq!(report["degree"], 1);
    assert_eq!(report["junta"]["size"], 1);
    assert_eq!(report["junta"]["witness"], serde_json::json!([1]));
    assert_eq!(report["total_influence"], "1/8");
    assert_eq!(report["run"]["command"]["subcommand"], "analyze");

    let inf = json(&["influence", "--input", path(&file), "--pair", "1", "2"]);
    assert_eq!(inf["influence"], "1/6");
}

#[test]
fn eta_and_census() {
    assert_eq!(json(&["eta", "--degree", "7"])["eta"], 9);
    let census = json(&["census", "--n", "4", "--k", "2", "--exhaustive", "--workers", "2"]);
    assert_eq!(census["functions"], 64);
    assert_eq!(census["degree_at_most_one"]["count"], 10);
    let csv = run(&["census", "--n", "4", "--k", "2", "--exhaustive", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("degree,junta_size,count\n"));
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let fd = dir.path().join("fd.json");
    let r = dir.path().join("r.json");
    let cube = dir.path().join("g.json");
    let back = dir.path().join("back.json");
    assert!(run(&["construct", "fd", "--degree", "2", "--n", "8", "--k", "3", "--out", path(&fd)]).status.success());
    let f = read_slice_function(&fd).unwrap();
    assert!(run(&["restrict", "--input", path(&fd), "--coord", "8", "--bit", "1", "--out", path(&r)]).status.success());
    assert_eq!(read_slice_function(&r).unwrap(), f.restrict(7, true).unwrap());

    let or = dir.path().join("or.json");
    std::fs::write(&or, r#"{"m": 2, "order": "binary-lsb", "values": [0, 1, 1, 1]}"#).unwrap();
    assert!(run(&["convert", "cube-to-slice", "--input", path(&or), "--n", "4", "--k", "2", "--out", path(&back)])
        .status
        .success());
    assert!(run(&["convert", "slice-to-cube", "--input", path(&back), "--out", path(&cube)]).status.success());
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&cube).unwrap()).unwrap();
    assert_eq!(g["values"], serde_json::json!([0, 1, 1, 1]));
    let poly = json(&["convert", "explicit-polynomial", "--input", path(&back)]);
    assert_eq!(poly["n"], 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 4, "k": 2, "order": "colex", "values": [0, 1, 0.5, 0, 1, 0]}"#).unwrap();
    let out = run(&["analyze", "--input", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank 2"));
    assert_eq!(run(&["census", "--n", "8", "--k", "4", "--exhaustive"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "fd", "--degree", "2", "--n", "8", "--k", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn remaining_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.json");
    assert!(run(&["construct", "anti-dictator", "--n", "6", "--k", "3", "--coord", "2", "--out", path(&f)])
        .status
        .success());
    let junta = json(&["junta", "--input", path(&f)]);
    assert_eq!(junta["witness"], serde_json::json!([2]));

    let noise = json(&["noise", "--input", path(&f), "--rho", "0.5", "--support", "1,2,3", "--samples", "2000"]);
    assert_eq!(noise["values"].as_array().unwrap().len(), 20);
    assert!(noise["monte_carlo"]["stderr"].as_f64().unwrap() > 0.0);

    let hyper = json(&["hyper", "--input", path(&f), "--rho", "0.3"]);
    assert!(hyper["ratio"].as_f64().unwrap() < 1.0);
    let scan = json(&["hyper", "--n", "5", "--k", "2", "--samples", "30", "--exponents", "1,6"]);
    assert_eq!(scan["rows"].as_array().unwrap().len(), 2);

    let gamma = json(&["gamma", "--degree", "2"]);
    assert_eq!(gamma["brute_force"]["gamma"], 4);
    assert!(gamma["zeta_xi"].is_string());

    let pd = json(&["construct", "pd", "--degree", "2"]);
    assert_eq!(pd["values"], serde_json::json!(["1", "0", "0", "1"]));

    let probe = json(&["probe-eq1", "--samples", "10"]);
    assert_eq!(probe["constant"], "1/2");
    assert_eq!(probe["run"]["command"]["subcommand"], "probe-eq1");

    let cube = dir.path().join("g.json");
    std::fs::write(&cube, r#"{"m": 1, "values": [1, 0]}"#).unwrap();
    let back = dir.path().join("s.json");
    assert!(run(&["construct", "from-cube", "--input", path(&cube), "--n", "4", "--k", "2", "--out", path(&back)])
        .status
        .success());
    assert_eq!(json(&["analyze", "--input", path(&back)])["degree"], 1);
}
