use std::process::{Command, Output};

use serde_json::Value;

fn codekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codekit")).args(args).output().expect("binary runs")
}

fn exit_code(args: &[&str]) -> i32 {
    codekit(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(codekit(args).stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).expect("valid json")
}

#[test]
fn not_a_code_prints_witness() {
    let args = ["code", "--alphabet", "ab", "a|ab|ba", "--verify-witness"];
    assert_eq!(exit_code(&args), 1);
    let out = stdout(&args);
    assert!(out.contains("aba = (ab)(a) = (a)(ba)"), "{out}");
    assert!(out.contains("witness_verified  true"));
}

#[test]
fn closed_code_holds() {
    assert_eq!(exit_code(&["closed", "--alphabet", "ab", "aa|ab|bb|aaaab|abbbb", "--rel", "delta:3"]), 0);
}

#[test]
fn prefix_code_is_independent() {
    assert_eq!(exit_code(&["independent", "--alphabet", "ab", "(ba)*.(a|bb)", "--rel", "sigma:1"]), 0);
}

#[test]
fn unsupported_relation_on_infinite_set() {
    assert_eq!(exit_code(&["independent", "--alphabet", "ab", "(ba)*.(a|bb)", "--rel", "S:2"]), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(exit_code(&["code", "--alphabet", "ab", "a|c"]), 3);
    assert_eq!(exit_code(&["code", "a|b"]), 3);
    assert_eq!(exit_code(&["independent", "--alphabet", "ab", "a", "--rel", "gamma:1"]), 3);
    assert_eq!(exit_code(&["frobnicate"]), 3);
    assert_eq!(exit_code(&["--help"]), 0);
    assert_eq!(exit_code(&["--version"]), 0);
}

#[test]
fn resource_cap() {
    assert_eq!(exit_code(&["--max-states", "2", "complete", "--alphabet", "ab", "(ab|ba)*.(aab|bba)"]), 4);
}

#[test]
fn json_reports() {
    let v = json(&["code", "--alphabet", "ab", "a|b"]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["trace"], serde_json::json!([[], []]));
    let v = json(&["closed", "--alphabet", "ab", "aa|ab", "--rel", "iota:1"]);
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["x"], "aa");
    let v = json(&["code", "--alphabet", "ab", "a|c"]);
    assert_eq!(v["error"], "usage");
}

#[test]
fn language_file() {
    let dir = std::env::temp_dir().join(format!("codekit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("x.lang");
    std::fs::write(&path, "alphabet: ab\naa|ab\nbb\n\naaaab|abbbb\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(exit_code(&["closed", "--file", p, "--rel", "delta:3"]), 0);
    assert_eq!(exit_code(&["closed", "--file", p, "--alphabet", "abc", "--rel", "delta:3"]), 3);
    std::fs::write(&path, "aa|ab\n").unwrap();
    assert_eq!(exit_code(&["code", "--file", p]), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn maximal_closed_code_has_no_complete_embedding() {
    let v = json(&["embed-closed", "--alphabet", "ab", "aa|ab|bb|aaaab|abbbb", "--rel", "delta:3"]);
    assert_eq!(v["count"], 0);
    assert_eq!(v["holds"], false);
}

#[test]
fn delta_closed_enumeration() {
    let v = json(&["enum-delta-closed", "--alphabet", "ab", "--k", "2"]);
    assert_eq!(v["codes"], serde_json::json!([["a"], ["b"], ["a", "b"]]));
}

#[test]
fn sigma_orbit() {
    let v = json(&["sigma-star", "--alphabet", "ab", "aabab", "--k", "2"]);
    assert_eq!(v["shape"], "Even(5)");
    assert_eq!(v["cardinality"], 16);
    let v = json(&["sigma-star", "--alphabet", "ab", "eps", "--k", "1"]);
    assert_eq!(v["members"], serde_json::json!(["eps"]));
}

#[test]
fn classify_closed() {
    let v = json(&["classify-closed", "--alphabet", "ab", "aaa|abb|bab|bba", "--rel", "sigma:2"]);
    assert_eq!(v["class"], "even words of length 3");
    assert_eq!(exit_code(&["classify-closed", "--alphabet", "ab", "aaa|abb", "--rel", "sigma:2"]), 1);
    assert_eq!(exit_code(&["classify-closed", "--alphabet", "ab", "aa", "--rel", "delta:2"]), 3);
}

#[test]
fn constructions_verify() {
    assert_eq!(exit_code(&["er-complete", "--alphabet", "ab", "aa|ab", "--verify-witness"]), 0);
    assert_eq!(exit_code(&["er-complete", "--alphabet", "ab", "a|b"]), 1);
    assert_eq!(exit_code(&["extend", "--alphabet", "ab", "aaaa|bbbb", "--rel", "Lambda:2", "--verify-witness"]), 0);
    assert_eq!(exit_code(&["maximal", "--alphabet", "ab", "aa|ab", "--verify-witness"]), 1);
    assert_eq!(exit_code(&["maximal", "--alphabet", "ab", "(ba)*.(a|bb)"]), 0);
}

#[test]
fn error_correction_witnesses() {
    let args = ["errcorrect", "--alphabet", "ab", "a.b*.a|b.a*.b", "--rel", "sigma:1"];
    assert_eq!(exit_code(&args), 2);
    let v = json(&["errcorrect", "--alphabet", "ab", "aaaa|aaab|abb|bab", "--rel", "delta:1", "--verify-witness"]);
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness_verified"], true);
}

#[test]
fn measure() {
    let v = json(&["measure", "--alphabet", "ab", "aa|ab|bb|aaaab|abbbb"]);
    assert_eq!(v["mu"], "13/16");
    let v = json(&["measure", "--alphabet", "ab", "a|b", "--dist", "a=1/3,b=2/3"]);
    assert_eq!(v["mu"], "1");
}

#[test]
fn simulation_is_reproducible() {
    let args = [
        "simulate", "--alphabet", "ab", "--code", "aabbb|bbbbaa", "--rel", "Delta:2", "--p", "1", "--len", "100",
        "--seed", "42", "--trials", "10", "--format", "json",
    ];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["correction_rate"], 1.0);
    assert_eq!(v["tally"]["ambiguous"], 0);
    assert_eq!(exit_code(&["simulate", "--alphabet", "ab", "--code", "a", "--rel", "delta:1", "--p", "2"]), 3);
    assert_eq!(exit_code(&["simulate", "--alphabet", "ab", "--code", "a*", "--rel", "delta:1"]), 1);
}
