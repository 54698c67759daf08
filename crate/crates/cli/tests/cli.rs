use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rbw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbw"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("run rbw")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn torsion(v: &Value) -> Vec<String> {
    v["torsion"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn scissors_over_gf8() {
    let out = rbw(&["scissors", "--ring", "gf(2,3)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    let r = &v["rings"][0];
    // P(F_8) ≅ B(F_8) ≅ Z/(q+1) with trivial square classes.
    for key in ["b", "rp1", "rb"] {
        assert_eq!(torsion(&r[key]), vec!["9"], "{key}");
    }
    assert_eq!(torsion(&r["p"]["invariants"]), vec!["9"]);
    assert!(r["checks"].as_object().unwrap().values().all(|b| b == true));
}

#[test]
fn d2_22_all_triples_over_gf8() {
    let out = rbw(&["certify", "d2_22", "--ring", "gf(2,3)", "--all-triples", "--summary"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["total"], 343);
    assert_eq!(v["passed"], 343);
    assert!(v.get("certificates").is_none());
}

#[test]
fn certificate_transcript_carries_chains() {
    let out = rbw(&["certify", "d1_22", "--ring", "gf(2,3)", "--a", "x", "--b", "#5"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = &json(&out)["certificates"][0];
    assert_eq!(cert["params"]["a"], "x");
    for key in ["computed", "expected", "witness"] {
        assert!(cert[key]["terms"].is_array(), "{key}");
    }
    assert!(cert["stages"].as_array().unwrap().iter().all(|s| s["ok"] == true || s["gating"] == false));
}

#[test]
fn bw_table_csv() {
    let out = rbw(&["bw-table", "--rings", "gf(2,3),gf(2,4)", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ring,flag1,flag2,flag3,tor,tor_fixed,rb,rb_dense,p,snf_paths_agree,predicted_h3_order");
    assert_eq!(lines[1], "\"gf(2,3)\",pass,pass,fail,Z/7,Z/7,Z/9,Z/9,Z/9,true,");
    assert_eq!(lines[2], "\"gf(2,4)\",pass,pass,pass,Z/15,Z/15,Z/17,Z/17,Z/17,true,255");
}

#[test]
fn markdown_ring_info() {
    let out = rbw(&["ring", "info", "--ring", "z/9", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("| ring | size |"));
    assert!(text.contains("| z/9 | 9 | 9 | local | gf(3,1) | 6 | Z/6 | 1 8 |"));
}

#[test]
fn invalid_input_exits_3() {
    assert_eq!(rbw(&["ring", "info", "--ring", "gf(9)"]).status.code(), Some(3));
    assert_eq!(rbw(&["ring", "info"]).status.code(), Some(3));
    assert_eq!(rbw(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(rbw(&["scissors", "--ring", "gf(2,3)", "--budget-x", "0"]).status.code(), Some(3));
    assert_eq!(rbw(&["certify", "d1_22", "--ring", "gf(2,3)"]).status.code(), Some(3));
    assert_eq!(rbw(&["certify", "d1_22", "--ring", "gf(2,3)", "--a", "t", "--b", "1"]).status.code(), Some(3));
    assert_eq!(rbw(&["certify", "theta", "--ring", "gf(5,1)"]).status.code(), Some(3));
}

#[test]
fn budget_exhaustion_exits_2() {
    let out = rbw(&["xcomplex", "audit", "--ring", "gf(2,3)", "--budget-x", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["rings"][0]["exactness"]["truncated"].is_string());
}

#[test]
fn xcomplex_audit_reports_relator_sign() {
    let out = rbw(&["xcomplex", "audit", "--ring", "z/25", "--dmax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["rings"][0];
    assert_eq!(r["dbar4"]["last_sign"], 1);
    assert_eq!(r["dbar4"]["same_span_as_rp"], true);
    assert_eq!(r["exact_below_residue_field_size"], true);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["certify", "d2_22", "--ring", "gf(2,4)", "--sample", "4", "--seed", "7"];
    let a = rbw(&args);
    let b = rbw(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = rbw(&["certify", "d2_22", "--ring", "gf(2,4)", "--sample", "4", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

fn scissors_with_cache(dir: Option<&Path>) -> Vec<u8> {
    let mut args = vec!["scissors", "--rings", "z/25,gf(2,2)[t]/t^2"];
    let d;
    if let Some(p) = dir {
        d = p.to_str().unwrap().to_string();
        args.extend(["--cache-dir", &d]);
    }
    let out = rbw(&args);
    assert_eq!(out.status.code(), Some(0));
    out.stdout
}

#[test]
fn cache_never_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cold = scissors_with_cache(None);
    let miss = scissors_with_cache(Some(dir.path()));
    let hit = scissors_with_cache(Some(dir.path()));
    assert_eq!(cold, miss);
    assert_eq!(cold, hit);
    // Corrupted entries are ignored and rebuilt.
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        if path.to_str().unwrap().contains(".scissors.") {
            std::fs::write(&path, b"{\"schema_version\": 1}").unwrap();
        }
    }
    assert_eq!(cold, scissors_with_cache(Some(dir.path())));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("info.json");
    let out = rbw(&["ring", "info", "--ring", "gf(2,2)", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["rings"][0]["units"], 3);
}
