use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_orbit-integra"));
    c.env_remove("ORBIT_INTEGRA_PRECISION");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn orbit_depth_three_is_one_class() {
    let v = json(&["orbit", "--beta", "2", "--d", "2", "--depth", "3"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0]["size"], 8);
}

#[test]
fn orbit_splits_for_square_beta() {
    let v = json(&["orbit", "--beta", "4", "--d", "2", "--depth", "2"]);
    let sizes: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![2, 2]);
}

#[test]
fn factor_reports_irreducible_factors() {
    let v = json(&["factor", "--beta", "-4", "--n", "4"]);
    let fs = v["factors"].as_array().unwrap();
    assert_eq!(fs.len(), 2);
    assert!(fs.iter().all(|f| f["degree"] == 2));
    let v = json(&["factor", "--beta", "2", "--d", "3", "--depth", "2"]);
    assert_eq!(v["n"], 9);
    assert_eq!(v["factors"].as_array().unwrap().len(), 1);
}

#[test]
fn newton_profiles_and_bound() {
    let v = json(&["newton", "--alpha", "3", "--beta", "2", "--d", "2", "--depth", "3", "--p", "7"]);
    let lv = v["levels"].as_array().unwrap();
    assert_eq!(lv.len(), 4);
    assert_eq!(lv[1]["profile"][0]["valuation"], "1/1");
    assert_eq!(lv[1]["cluster_count"], 1);
    assert_eq!(v["min_distance_bound"]["value"], "1/1");
}

#[test]
fn integral_census_with_seven() {
    let v = json(&["integral", "--alpha", "3", "--beta", "2", "--d", "2", "--S", "7", "--depth", "4"]);
    let d1 = &v["depths"][1]["classes"][0];
    assert_eq!(d1["verdict"], true);
    assert_eq!(v["stabilization_depth"], 2);
    assert_eq!(v["S"], serde_json::json!(["inf", 7]));
    let v = json(&["integral", "--alpha", "3", "--beta", "2", "--d", "2", "--depth", "4"]);
    assert_eq!(v["depths"][1]["classes"][0]["verdict"], false);
    assert_eq!(v["depths"][1]["classes"][0]["witnesses"][0][0], 7);
}

#[test]
fn constants_at_tenth() {
    let v = json(&["constants", "--tau", "0.1", "--place", "inf"]);
    let d = v["constants"][0]["dirichlet"].as_f64().unwrap();
    assert!((d - 4.0 * std::f64::consts::PI * 10f64.ln()).abs() < 1e-12);
    assert_eq!(v["constants"][0]["lipschitz"].as_f64().unwrap(), 11.0);
}

#[test]
fn discrepancy_csv_columns() {
    let o = run(&["discrepancy", "--alpha", "2", "--beta", "2", "--d", "2", "--depth", "5", "--from", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "depth,n,class_index,class_size,place,value");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("3,8,,,inf,"));
}

#[test]
fn pairing_identity_is_exact() {
    let v = json(&["pairing", "--alpha", "2", "--beta", "2", "--d", "2", "--depth", "4"]);
    assert_eq!(v["identity_holds"], true);
    assert_eq!(v["depths"].as_array().unwrap().len(), 4);
}

#[test]
fn output_is_deterministic_and_file_backed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = run(&["orbit", "--beta", "3", "--d", "3", "--depth", "2", "--format", "json", "--output", p.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn svg_outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = dir.path().join("orbit.svg");
    let s2 = dir.path().join("decay.svg");
    assert!(run(&["orbit", "--beta", "2", "--d", "2", "--depth", "4", "--svg", s1.to_str().unwrap()]).status.success());
    assert!(run(&["discrepancy", "--alpha", "3", "--beta", "2", "--d", "2", "--depth", "6", "--svg", s2.to_str().unwrap()])
        .status
        .success());
    for p in [&s1, &s2] {
        let t = std::fs::read_to_string(p).unwrap();
        assert!(t.starts_with("<svg") && t.trim_end().ends_with("</svg>"));
    }
    let t = std::fs::read_to_string(&s1).unwrap();
    assert_eq!(t.matches("fill=\"#1f77b4\"").count(), 16);
}

fn assert_input_error(args: &[&str], token: &str) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(2), "{args:?}");
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(token), "stderr {err:?} should name {token:?}");
}

#[test]
fn bad_input_exits_two_naming_token() {
    assert_input_error(&["orbit", "--beta", "2/0x", "--d", "2", "--depth", "1"], "2/0x");
    assert_input_error(&["integral", "--alpha", "3", "--beta", "2", "--d", "2", "--S", "7,15", "--depth", "1"], "15");
    assert_input_error(&["newton", "--alpha", "3", "--beta", "2", "--d", "2", "--depth", "1", "--p", "6"], "6");
    assert_input_error(&["constants", "--tau", "2"], "2");
    assert_input_error(&["orbit", "--beta", "0", "--d", "2", "--depth", "1"], "error");
}

#[test]
fn precision_from_env_is_validated() {
    let o = bin().env("ORBIT_INTEGRA_PRECISION", "lots").args(["orbit", "--beta", "2", "--d", "2", "--depth", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lots"));
    let o = bin().env("ORBIT_INTEGRA_PRECISION", "256").args(["orbit", "--beta", "2", "--d", "2", "--depth", "1"]).output().unwrap();
    assert!(o.status.success());
}

#[test]
fn verify_custom_config_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"precision": 128, "cells": [{"kind": "degree_bound", "beta": "2", "ns": [4, 16]},
            {"kind": "az_rate", "alpha": "2", "beta": "2", "d": 2, "depths": [2, 6], "constant": 1.0}]}"#,
    )
    .unwrap();
    let o = run(&["verify", "--config", good.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("cell,kind,depth,n,place,lhs,rhs,pass\n"));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"precision": 128, "cells": [{"kind": "az_rate", "alpha": "2", "beta": "2", "d": 2, "depths": [2, 6], "constant": 0.01}]}"#,
    )
    .unwrap();
    let o = run(&["verify", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"cells\": 3}").unwrap();
    assert_input_error(&["verify", "--config", broken.to_str().unwrap()], "broken.json");
    assert!(!Path::new("/nonexistent/x.json").exists());
    assert_input_error(&["verify", "--config", "/nonexistent/x.json"], "/nonexistent/x.json");
}
