use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("samples").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superlie")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = run(&a);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn fold_a3_gives_the_c2_matrix() {
    let v = json(&["fold", "--data", &sample("a3.json"), "--sigma", "1 3"]);
    assert_eq!(v["summary"]["matrix"], serde_json::json!([["2", "-1"], ["-2", "2"]]));
    let v = json(&["fold", "--data", &sample("a2.json")]);
    assert_eq!(v["summary"]["matrix"], serde_json::json!([["2"]]));
}

#[test]
fn free_lie_matches_oracle_and_is_deterministic() {
    let args = ["free-lie", "--gens", &sample("gens.json"), "--max-weight", "6"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    assert_eq!(text.lines().next(), Some("degree,acomp,supertrace,oracle,match"));
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    assert!(text.contains("\n2,1,-10,-10,true\n"));
    let b = Command::new(env!("CARGO_BIN_EXE_superlie")).args(args).env("SUPERLIE_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn monstrous_box_six() {
    let v = json(&["monstrous", "--qseries", &sample("j.json"), "--box", "6"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 15);
    let cell = rows.iter().find(|r| r["m"] == 2 && r["n"] == 2).unwrap();
    assert_eq!(cell["witt"], "20245856256");
    assert!(rows.iter().all(|r| r["match"] == true && r["conjectural"] == false));
    assert_eq!(v["summary"]["replicable"], true);
}

#[test]
fn denominator_modes() {
    let v = json(&["denominator", "--data", &sample("a2.json"), "--bound", "8"]);
    assert_eq!(v["summary"]["holds"], true);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["conjectural"] == false));

    let v = json(&["denominator", "--data", &sample("bkm.json"), "--kostant", "1", "--bound", "5"]);
    assert_eq!(v["summary"]["holds"], true);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["conjectural"] == true));

    let v = json(&["denominator", "--gens", &sample("gens.json"), "--bound", "5"]);
    assert_eq!(v["summary"]["holds"], true);

    let v = json(&["denominator", "--data", &sample("odd_rank_one.json"), "--mults", &sample("odd_rank_one_mults.json")]);
    assert_eq!(v["summary"]["holds"], true);
}

#[test]
fn failed_check_exits_one() {
    let dir = std::env::temp_dir().join(format!("superlie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("mults.json");
    std::fs::write(&bad, r#"{"entries": [{"coords": [1], "dim": "1"}, {"coords": [2], "dim": "2"}]}"#).unwrap();
    let out = run(&["denominator", "--data", &sample("odd_rank_one.json"), "--mults", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["fold", "--data", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["monstrous", "--qseries", &sample("gens.json")]).status.code(), Some(2));
    assert_eq!(run(&["fold", "--data", &sample("a3.json"), "--sigma", "1 2"]).status.code(), Some(2));
    assert_eq!(run(&["free-lie"]).status.code(), Some(2));
    assert_eq!(run(&["selftest", "--criteria", "12"]).status.code(), Some(2));
}

#[test]
fn orbit_trace_a3() {
    let v = json(&["orbit-trace", "--data", &sample("a3.json")]);
    assert_eq!(v["summary"]["total_fixed_dimension"], "10");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["fixed"] == "1" && r["match"] == true));
}

#[test]
fn gl_decomp_small_cases() {
    let v = json(&["gl-decomp", "--k", "1", "--l", "1", "--n", "2", "--check"]);
    let rows = v["rows"].as_array().unwrap();
    let m: Vec<(&str, &str)> = rows.iter().map(|r| (r["partition"].as_str().unwrap(), r["multiplicity"].as_str().unwrap())).collect();
    assert!(m.contains(&("(1,1)", "1")));
    assert!(m.contains(&("(2)", "0")));
    assert_eq!(v["summary"]["trace_identity"], true);
}

#[test]
fn selftest_gating_column() {
    let v = json(&["selftest", "--criteria", "9"]);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["conjectural"] == true));
    assert!(rows.iter().all(|r| r["passed"] == true));
}
