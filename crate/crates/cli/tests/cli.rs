//! End-to-end CLI checks: exit codes, JSON round-trips, deterministic output.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rootsuper"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = tempfile::tempdir().unwrap().keep();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn enum_d2_level_zero() {
    let out = run(&["enum", "--family", "d-2", "--m", "1", "--n", "1", "--kmax", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for expected in ["0", "e1", "-e1", "d1", "-d1", "2*d1", "-2*d1", "e1 + d1", "e1 - d1"] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{expected}  ["))),
            "missing `{expected}` in:\n{text}"
        );
    }
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn enum_output_is_deterministic_and_round_trips() {
    let args = ["enum", "--family", "a-2m-2n1-2", "--m", "1", "--n", "1", "--kmax", "2", "--format", "jsonl"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout, "identical invocations must be byte-identical");
    for line in stdout(&a).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let root = v.get("root").unwrap();
        let back: rootsuper::Vector = serde_json::from_value(root.clone()).unwrap();
        assert_eq!(serde_json::to_value(&back).unwrap(), *root);
    }
}

#[test]
fn check_pi1_certifies_b1() {
    // The no-long-root representative at (m,n) = (2,1).
    let base = r#"{"elements":[
        {"eps":[-1,0],"del":[-1],"delta":1},
        {"eps":[-1,0],"del":[1],"delta":0},
        {"eps":[1,-1],"del":[0],"delta":0},
        {"eps":[1,1],"del":[0],"delta":0}]}"#;
    let path = write_temp("pi1.json", base);
    let out = run(&[
        "check", "--family", "a-2m1-2n1-2", "--m", "2", "--n", "1",
        "--input", path.to_str().unwrap(), "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["verdict"], "certified");
    assert_eq!(v["params"]["form"], "B1");
}

#[test]
fn check_rejects_imaginary_member_with_witness() {
    let base = r#"{"elements":[
        {"eps":[0],"del":[0],"delta":2},
        {"eps":[-1],"del":[1],"delta":0},
        {"eps":[1],"del":[0],"delta":0}]}"#;
    let path = write_temp("bad.json", base);
    let out = run(&[
        "check", "--family", "a-2m-2n1-2", "--m", "1", "--n", "1",
        "--input", path.to_str().unwrap(), "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["verdict"], "rejected");
    assert_eq!(v["reason"]["kind"], "imaginary-element");
    assert_eq!(v["reason"]["element"]["delta"], 2);
}

#[test]
fn check_verified_at_cutoff_exit_one() {
    // A(0,1)^(2) has bases but no instantiable table row, so verification
    // cannot upgrade to certified.
    let base = r#"{"elements":[
        {"eps":[],"del":[1],"delta":0},
        {"eps":[],"del":[-1],"delta":1}]}"#;
    let path = write_temp("a01.json", base);
    let out = run(&[
        "check", "--family", "a-2m-2n1-2", "--m", "0", "--n", "1",
        "--input", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("verified-at-cutoff"));
}

#[test]
fn classify_and_posroots_pipeline() {
    let base = r#"{"elements":[
        {"eps":[0,0],"del":[-2],"delta":0},
        {"eps":[-1,0],"del":[1],"delta":0},
        {"eps":[1,-1],"del":[0],"delta":0},
        {"eps":[0,2],"del":[0],"delta":1}]}"#;
    let path = write_temp("b4.json", base);
    let sys_args = ["--family", "a-2m1-2n1-2", "--m", "2", "--n", "1"];
    let mut args = vec!["classify", "--input", path.to_str().unwrap(), "--format", "json"];
    args.extend_from_slice(&sys_args);
    let out = run(&args);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["form"], "B4");

    let params = serde_json::to_string(&v["params"]).unwrap();
    let ppath = write_temp("params.json", &params);
    let mut pargs = vec!["posroots", "--params", ppath.to_str().unwrap(), "--kmax", "3", "--format", "json"];
    pargs.extend_from_slice(&sys_args);
    let pout = run(&pargs);
    assert!(pout.status.success());
    let roots: Vec<rootsuper::Vector> = serde_json::from_str(stdout(&pout).trim()).unwrap();
    assert!(!roots.is_empty());
    // The long head −2θ₁ = −2δ₁ must be positive for this row.
    assert!(roots.iter().any(|r| r.to_string() == "-2*d1"));
}

#[test]
fn conjugate_same_row_produces_word() {
    let left = r#"{"elements":[
        {"eps":[0,0],"del":[-2],"delta":0},
        {"eps":[-1,0],"del":[1],"delta":0},
        {"eps":[1,-1],"del":[0],"delta":0},
        {"eps":[0,2],"del":[0],"delta":1}]}"#;
    let right = r#"{"elements":[
        {"eps":[0,0],"del":[-2],"delta":0},
        {"eps":[0,-1],"del":[1],"delta":0},
        {"eps":[-1,1],"del":[0],"delta":0},
        {"eps":[2,0],"del":[0],"delta":1}]}"#;
    let lp = write_temp("left.json", left);
    let rp = write_temp("right.json", right);
    let out = run(&[
        "conjugate", "--family", "a-2m1-2n1-2", "--m", "2", "--n", "1",
        "--left", lp.to_str().unwrap(), "--right", rp.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["conjugate"], true);
    assert!(v["word"].is_array());

    // Cross-row: not conjugate.
    let b1 = r#"{"elements":[
        {"eps":[-1,0],"del":[-1],"delta":1},
        {"eps":[-1,0],"del":[1],"delta":0},
        {"eps":[1,-1],"del":[0],"delta":0},
        {"eps":[1,1],"del":[0],"delta":0}]}"#;
    let bp = write_temp("b1.json", b1);
    let out2 = run(&[
        "conjugate", "--family", "a-2m1-2n1-2", "--m", "2", "--n", "1",
        "--left", lp.to_str().unwrap(), "--right", bp.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out2.status.success());
    let v2: serde_json::Value = serde_json::from_str(stdout(&out2).trim()).unwrap();
    assert_eq!(v2["conjugate"], false);
}

#[test]
fn search_finds_both_rows_of_a_even_odd2() {
    let out = run(&[
        "search", "--family", "a-2m-2n1-2", "--m", "1", "--n", "1",
        "--kmax-root", "6", "--kmax-entry", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let bases = v["bases"].as_array().unwrap();
    assert!(!bases.is_empty());
    let forms: std::collections::BTreeSet<&str> = bases
        .iter()
        .map(|b| b["params"]["form"].as_str().expect("all found bases classified"))
        .collect();
    assert!(forms.contains("T2-A2-long") && forms.contains("T2-A2-nolong"));
}

#[test]
fn props_reports_all_statements() {
    let out = run(&[
        "props", "--family", "d-2", "--m", "1", "--n", "1", "--kmax", "2", "--seed", "5",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let statements = v["statements"].as_array().unwrap();
    let ids: Vec<&str> = statements.iter().map(|s| s["id"].as_str().unwrap()).collect();
    for id in ["fact1", "fact2", "lemma_1_3", "lemma_unique", "lemma_reduce", "belongto_preserves", "search_matches_table", "not_e"] {
        assert!(ids.contains(&id), "missing statement {id}");
    }
    assert!(statements.iter().all(|s| s["status"] != "fail"));
}

#[test]
fn enum_matches_golden_file() {
    let out = run(&["enum", "--family", "d-2", "--m", "1", "--n", "1", "--kmax", "1", "--format", "jsonl"]);
    assert!(out.status.success());
    let golden = include_str!("golden/enum_d2_1_1_k1.jsonl");
    assert_eq!(stdout(&out), golden, "enum serialization drifted from the golden file");
}

#[test]
fn config_file_supplies_defaults() {
    let cfg = write_temp("cfg.json", r#"{"family":"d-2","m":1,"n":1}"#);
    let out = run(&["enum", "--config", cfg.to_str().unwrap(), "--kmax", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 11);
}

#[test]
fn usage_and_domain_exit_codes() {
    // Unknown flag: usage error 64.
    let out = run(&["enum", "--bogus"]);
    assert_eq!(out.status.code(), Some(64));
    // Missing family: usage error 64.
    let out = run(&["enum", "--m", "1", "--n", "1", "--kmax", "0"]);
    assert_eq!(out.status.code(), Some(64));
    // Invalid descriptor: domain error 65 with a JSON error object.
    let out = run(&["enum", "--family", "a-2m1-2n1-2", "--m", "1", "--n", "1", "--kmax", "0"]);
    assert_eq!(out.status.code(), Some(65));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "domain");
}
