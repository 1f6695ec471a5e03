use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohomkit")).args(args).output().expect("spawn cohomkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("json output"))
}

#[test]
fn worked_products() {
    let o = run(&["mult", "(2,1,1)", "(2,1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(4,2,1) + 3(4,1,1,1) + 2(3,3,1) + 2(3,2,2) + 3(3,2,1,1) + 6(2,2,2,1) + 6(2,2,1,1,1)");
    let o = run(&["mult", "(1)", "(1)"]);
    assert_eq!(stdout(&o).trim(), "(2) + 2(1,1)");
    let (code, v) = json(&["mult", "((1)^2)", "(1)", "--modulus", "3"]);
    assert_eq!(code, 0);
    assert!(v["product"]["terms"].is_array());
    let o = run(&["mult", r#"{"terms":[{"parts":[2,1],"coeff":3}]}"#, "(1)"]);
    assert_eq!(stdout(&o).trim(), "3(3,1) + 6(2,2) + 6(2,1,1)");
}

#[test]
fn classify_weights_table() {
    let o = run(&["classify-weights", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows.iter().filter(|r| r.ends_with("| no")).count(), 2);
    let (code, v) = json(&["classify-weights"]);
    assert_eq!(code, 0);
    assert_eq!(v["total"], 17);
    assert_eq!(v["matches_reference"], true);
}

#[test]
fn brown_peterson_coefficient() {
    let o = run(&["verify-bp", "--p", "5", "--k", "6", "--i", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("coefficient of c_6 in P^1(c_2) mod 5: 1"));
    assert!(stdout(&o).contains("2c_3^2"));
}

#[test]
fn certificates_and_traces() {
    let (code, v) = json(&["decompose-chern", "--p", "3", "--k", "4"]);
    assert_eq!(code, 0);
    for key in ["p", "k", "op_exponent", "source", "leading_coeff", "decomposable", "verified"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["source"], 2);
    assert_eq!(v["verified"], true);
    let (code, v) = json(&["decompose-chern", "--p", "2", "--k", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["op_exponent"], 2);
    let (code, v) = json(&["descent", "--p", "5", "--lambda", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness_a"], 2);
    assert_eq!(run(&["descent", "--p", "5", "--lambda", "10"]).status.code(), Some(2));
}

#[test]
fn steenrod_checks() {
    let o = run(&["steenrod", "--p", "5", "--i", "1", "(1,1)"]);
    assert_eq!(stdout(&o).trim(), "P^1((1,1)) = (5,1)");
    assert_eq!(run(&["verify-wu", "--k", "5"]).status.code(), Some(0));
    assert_eq!(run(&["verify-adem", "--p", "3", "--a", "1", "--b", "1", "--weight", "4"]).status.code(), Some(0));
    assert_eq!(run(&["verify-adem", "--p", "2", "--a", "2", "--b", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify-sl", "--p", "2", "--weight", "6"]).status.code(), Some(0));
}

#[test]
fn periodicity_reports() {
    let (code, v) = json(&["periodicity", "--model", "cayley_plane", "--lemmas"]);
    assert_eq!(code, 0);
    assert_eq!(v["spectrum"], serde_json::json!([8, 16]));
    assert_eq!(v["exact"], true);
    let alg = r#"{"field":"Fp:3","n":4,"dims":[1,0,1,0,1],"structure":[{"a":2,"b":2,"table":[[1]]}]}"#;
    let (code, v) = json(&["periodicity", "--algebra", alg]);
    assert_eq!(code, 0);
    assert_eq!(v["minimal_degree"], 2);
    assert_eq!(run(&["periodicity", "--model", "torus(3)"]).status.code(), Some(2));
    assert_eq!(run(&["periodicity"]).status.code(), Some(2));
}

#[test]
fn configurations() {
    let cfg = r#"{"dim":2,"points":[[1,0,0],[0,1,0],[0,0,1],[1,1,1]]}"#;
    let (code, v) = json(&["sg-check", cfg]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "ordinary_line");
    assert_eq!(run(&["hansen-check", cfg]).status.code(), Some(0));
    let omega = r#"{"dim":2,"points":[[1,0,0],[0,1,0]]}"#;
    let far = r#"{"dim":2,"points":[[0,0,1]]}"#;
    let on = r#"{"dim":2,"points":[[1,1,0]]}"#;
    assert_eq!(run(&["s2comb-check", omega, far]).status.code(), Some(1));
    assert_eq!(run(&["s2comb-check", omega, on]).status.code(), Some(0));
    assert_eq!(run(&["s2comb-check", omega, omega]).status.code(), Some(2));
    assert_eq!(run(&["sg-check", "no-such-file.json"]).status.code(), Some(2));
}

#[test]
fn triangles() {
    let t = r#"{"A":[[1,0,0],[1,0,1]],"B":[[0,1,0],[0,1,1]],"C":[[1,-1,0],[1,1,1]]}"#;
    let (code, v) = json(&["triangle-classify", t]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "type2");
    assert!(v["basis_change"].is_array());
    let bad = r#"{"A":[[1,0],[1,0]],"B":[[0,1],[0,1]],"C":[[1,-1],[1,-1]]}"#;
    let (code, v) = json(&["triangle-classify", bad]);
    assert_eq!(code, 1);
    assert!(v["reason"].as_str().unwrap().contains("linearly independent"), "{v}");
    let (code, v) = json(&["triangle-classify", "--no-lindep", bad]);
    assert_eq!(code, 1);
    assert!(!v["reason"].as_str().unwrap().contains("linearly independent"), "{v}");
}

#[test]
fn sweeps() {
    let o = run(&["sweep", "appendix-b"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("17 classes, histogram {4:1,5:3,6:4,7:4,8:2,9:2,10:1}, splitting 15/2"));
    assert_eq!(run(&["sweep", "appendix-a", "--weight", "5", "--primes", "2,3", "--sl-weight", "8"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "periodicity"]).status.code(), Some(0));
    let o = run(&["--jobs", "2", "sweep", "section-4", "--bound", "1", "--max-points", "6", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(run(&["sweep", "appendix-c"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "appendix-a", "--primes", "4"]).status.code(), Some(2));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["mult", "(2,", "(1)"]).status.code(), Some(2));
    assert_eq!(run(&["--jobs", "0", "mult", "(1)", "(1)"]).status.code(), Some(2));
    assert_eq!(run(&["verify-bp", "--p", "4", "--k", "6", "--i", "1"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["--format", "json", "sweep", "appendix-b"]);
    let b = run(&["--format", "json", "--jobs", "3", "sweep", "appendix-b"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["periodicity", "--model", "sphere_cross_hp(2,2)"]);
    let b = run(&["periodicity", "--model", "sphere_cross_hp(2,2)"]);
    assert_eq!(a.stdout, b.stdout);
}
