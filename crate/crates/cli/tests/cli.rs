use std::process::{Command, Output};

use serde_json::Value;

fn spinorq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinorq")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_commute_symbolic_passes() {
    let out = spinorq(&["verify", "--suite", "commute", "--rank", "2", "--parity", "even", "--symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("commute: pass"));
}

#[test]
fn bratteli_b1_level_three() {
    let out = spinorq(&["bratteli", "--family", "B", "--rank", "1", "--levels", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let top = v["levels"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(top["level"], 3);
    let got: Vec<(String, u64)> = top["labels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| (l["label"].as_str().unwrap().to_string(), l["mult"].as_u64().unwrap()))
        .collect();
    assert_eq!(got, vec![("(3/2)".to_string(), 1), ("(1/2)".to_string(), 2)]);
}

#[test]
fn bratteli_dot() {
    let out = spinorq(&["bratteli", "--family", "D", "--rank", "2", "--levels", "2", "--dot"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("digraph"));
    assert!(s.contains("->"));
}

#[test]
fn qdim_vector_of_b2() {
    // [4] + 1 for the vector representation of so_5
    let out = spinorq(&["qdim", "--family", "B", "--rank", "2", "--label", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["qdim"], "q^3 + q + 1 + q^-1 + q^-3");
    assert_eq!(v["dim"], 5);
    let out = spinorq(&["qdim", "--family", "B", "--rank", "2", "--label", "1,0", "--q", "3/2"]);
    let v = json(&out);
    assert!(v["value"].is_string());
}

#[test]
fn eigen_even_k2() {
    let out = spinorq(&["eigen", "--rank", "2", "--parity", "even"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let spaces = v["eigenspaces"].as_array().unwrap();
    assert_eq!(spaces.len(), 5);
    let total: u64 = spaces.iter().map(|s| s["rank"].as_u64().unwrap()).sum();
    assert_eq!(total, 16);
}

#[test]
fn duality_at_a_point() {
    let out = spinorq(&["verify", "--suite", "duality", "--rank", "2", "--parity", "even", "--n", "2", "--q", "3/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let name = v["reports"][0]["checks"][0]["name"].as_str().unwrap();
    assert!(name.contains("(5, 5, 5)"), "{name}");
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["frobnicate"],
        &["verify", "--suite", "bogus"],
        &["verify", "--suite", "coideal", "--q", "1"],
        &["verify", "--suite", "coideal", "--q", "x/2"],
        &["verify", "--suite", "coideal", "--q", "3/2", "--symbolic"],
        &["verify", "--suite", "duality", "--rank", "1"],
        &["verify", "--suite", "commute", "--rank", "0"],
        &["qdim", "--family", "B", "--rank", "2", "--label", "1,7"],
        &["bratteli", "--family", "C", "--rank", "2", "--levels", "2"],
        &["eigen", "--rank", "2", "--parity", "sideways"],
    ];
    for args in cases {
        let out = spinorq(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn all_rank_one_battery() {
    let out = spinorq(&["--threads", "2", "all", "--max-rank", "1"]);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(out.status.code(), Some(0));
    let suites: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    for s in ["clifford", "commute", "duality", "qdim", "bratteli"] {
        assert!(suites.contains(&s), "{s} missing from {suites:?}");
    }
}

#[test]
fn exit_code_matches_pass_flag() {
    for suite in ["serre", "spectrum", "third-power", "trace"] {
        let out = spinorq(&["verify", "--suite", suite, "--rank", "1"]);
        let v = json(&out);
        let pass = v["pass"].as_bool().unwrap();
        assert_eq!(out.status.code(), Some(if pass { 0 } else { 1 }), "{suite}");
    }
}
