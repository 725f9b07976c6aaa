use std::path::PathBuf;
use std::process::{Command, Output};

use dicing_cli::parse_text;
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn dicing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicing"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dicing-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

/// Text and JSON renderings of the same run carry the same value.
fn assert_same_data(args: &[&str]) {
    let text = dicing(args);
    assert!(text.status.success(), "{args:?}: {}", String::from_utf8_lossy(&text.stderr));
    let mut json_args = args.to_vec();
    json_args.push("--json");
    let json = dicing(&json_args);
    assert!(json.status.success());
    let from_json: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let (from_text, summary) = parse_text(&stdout(&text)).expect("text output parses back");
    assert_eq!(from_text, from_json, "{args:?}");
    assert_eq!(from_json["summary"], Value::String(summary));
    for key in ["stage", "inputs", "result", "certificate"] {
        assert!(from_json.get(key).is_some(), "{args:?} lacks {key}");
    }
}

#[test]
fn segre_report() {
    let o = dicing(&["segre"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.trim_end().ends_with("system ≡ E5; E5 not cographic"));
    assert_eq!(out, stdout(&dicing(&["segre"])), "output differs between runs");
    let json: Value = serde_json::from_str(&stdout(&dicing(&["segre", "--json"]))).unwrap();
    assert_eq!(json["result"]["torus_rank"], 5);
    assert_eq!(json["result"]["equivalent_to_e5"], true);
    assert_eq!(json["certificate"]["transformation_verified"], true);
}

#[test]
fn check_tu_verdicts() {
    let o = dicing(&["check-tu", &data("e5.mat")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("TU"));
    let o = dicing(&["check-tu", &data("not_tu_2x2.mat")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("not TU, minor det = -2"));
}

#[test]
fn every_subcommand_renders_the_same_data_twice() {
    let segre = data("segre_cover.graph");
    let k4 = data("k4.graph");
    let e5 = data("e5.mat");
    assert_same_data(&["cycles", &segre]);
    assert_same_data(&["cycles", &segre, "--tree", "e6,e7,e8,e9,e10,e10',e7',e9',e8'"]);
    assert_same_data(&["jacobian-dice", &k4]);
    assert_same_data(&["prym-dice", &segre]);
    assert_same_data(&["vologodsky", &segre]);
    assert_same_data(&["vologodsky", &data("two_triangles.graph")]);
    assert_same_data(&["check-tu", &e5]);
    assert_same_data(&["check-tu", &data("not_tu_2x2.mat")]);
    assert_same_data(&["check-cographic", &e5]);
    assert_same_data(&["equiv", &e5, &e5]);
    assert_same_data(&["segre"]);
}

#[test]
fn cographic_witness_for_identity() {
    let p = scratch("i3.mat", "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let json: Value = serde_json::from_str(&stdout(&dicing(&["check-cographic", p.to_str().unwrap(), "--json"]))).unwrap();
    assert_eq!(json["result"]["verdict"], "cographic");
    assert_eq!(json["certificate"]["graph_witness"]["column_edges"].as_array().unwrap().len(), 3);
}

#[test]
fn parse_errors_name_file_and_line() {
    let p = scratch("bad.mat", "2 2\n1 0\n0 x\n");
    let o = dicing(&["check-tu", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.mat"), "{err}");
    assert!(err.contains("line 3"), "{err}");

    let g = scratch("bad.graph", "vertex a\nedge e a b\n");
    let o = dicing(&["cycles", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));
}

#[test]
fn distinct_exit_codes() {
    let e5 = data("e5.mat");
    assert_eq!(dicing(&["check-cographic", &e5, "--max-graphs", "3"]).status.code(), Some(3));
    assert_eq!(dicing(&["check-cographic", &data("not_tu_2x2.mat")]).status.code(), Some(5));
    assert_eq!(dicing(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(dicing(&["check-tu", "/nonexistent/file.mat"]).status.code(), Some(1));
}

#[test]
fn output_flag_writes_file() {
    let out = std::env::temp_dir().join(format!("dicing-cli-out-{}.json", std::process::id()));
    let o = dicing(&["check-tu", &data("e5.mat"), "--json", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["verdict"], "tu");
}
