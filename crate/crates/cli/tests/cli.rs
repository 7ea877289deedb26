//! End-to-end tests of the binary: exit codes, deterministic output, and
//! the documented command surface. Fixtures live in the repository's
//! `fixtures/` directory.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skoda"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("fixtures")
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    for a in args {
        cmd.arg(a);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn gb_lists_reduced_basis() {
    let ring = fixtures().join("ring_xy.json");
    let out = run(&["gb", "--ring", ring.to_str().unwrap(), "x^2-1, x*y-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().map(|s| s.trim()).collect();
    assert_eq!(lines, vec!["y^2 - 1", "x - y"]);

    let out = run(&["gb", "--ring", ring.to_str().unwrap(), "x"]);
    assert_eq!(stdout_of(&out).trim(), "x");
    let out = run(&["gb", "--ring", ring.to_str().unwrap(), "x, x+1"]);
    assert_eq!(stdout_of(&out).trim(), "1");
}

#[test]
fn gb_output_is_byte_identical_across_runs() {
    let ring = fixtures().join("ring_xyz.json");
    let args = [
        "gb",
        "--ring",
        ring.to_str().unwrap(),
        "x^2*y - z^2, y^2 - x*z, x*z^2 - y*z",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
    // and the output is valid JSON with a basis array
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&a)).unwrap();
    assert!(v["basis"].is_array());
}

#[test]
fn member_json() {
    let ring = fixtures().join("ring_xy.json");
    let out = run(&[
        "member",
        "--ring",
        ring.to_str().unwrap(),
        "x^2*y",
        "x^2, y^2",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["member"], serde_json::Value::Bool(true));
}

#[test]
fn parse_error_exits_one() {
    let ring = fixtures().join("ring_xy.json");
    let out = run(&["gb", "--ring", ring.to_str().unwrap(), "x + w"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cap_exit_is_three() {
    let ring = fixtures().join("ring_xyz.json");
    let out = run(&[
        "gb",
        "--ring",
        ring.to_str().unwrap(),
        "x^2*y - z^2, y^2 - x*z, x*z^2 - y*z",
        "--cap-pairs",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bs_check_elliptic_fails_as_expected() {
    let inst = fixtures().join("bs_elliptic.json");
    let out = run(&["bs-check", inst.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "expected-failure fixture exits 0");
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["verdict"], "FAILS");
    assert_eq!(v["witnesses"][0], "a*c^2*e");
}

#[test]
fn verify_main_emits_witness() {
    let inst = fixtures().join("main_xy_k1_xy.json");
    let out = run(&["verify-main", inst.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["verified"], serde_json::Value::Bool(true));
    assert!(v["witness"]["stages"].is_array());
}

#[test]
fn bir_member_true_on_closure_generator() {
    let inst = fixtures().join("main_x2y2_k1_x3y.json");
    let out = run(&["bir-member", inst.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["member"], serde_json::Value::Bool(true));
}

#[test]
fn corpus_runs_all_as_expected() {
    let manifest = fixtures().join("manifest.json");
    let out = run(&["corpus", manifest.to_str().unwrap(), "--json", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let summary = &v["summary"];
    assert_eq!(summary["falsifications"], 0);
    assert_eq!(summary["caps"], 0);
    assert_eq!(summary["total"], summary["as_expected"]);
    // output ordering follows the manifest regardless of worker count
    let results = v["results"].as_array().unwrap();
    assert!(results[0]["path"].as_str().unwrap().ends_with("bs_x2y2_k1.json"));
}

#[test]
fn corpus_output_is_byte_identical_across_runs() {
    let manifest = fixtures().join("manifest.json");
    let args = [
        "corpus",
        manifest.to_str().unwrap(),
        "--json",
        "--workers",
        "4",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn counterexample_reports_failure_and_exits_zero() {
    let out = run(&["counterexample", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["verdict"], "FAILS");
}

#[test]
fn icl_lists_certified_generators() {
    let ring = fixtures().join("ring_xy.json");
    let out = run(&[
        "icl",
        "--ring",
        ring.to_str().unwrap(),
        "-j",
        "x^2, y^2",
        "-m",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, vec!["y^2", "x*y", "x^2"]);
}

#[test]
fn lcomplex_json_shape() {
    let ring = fixtures().join("ring_xy.json");
    let out = run(&[
        "lcomplex",
        "--ring",
        ring.to_str().unwrap(),
        "-f",
        "x, y",
        "-k",
        "2",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["ranks"], serde_json::json!([1, 3, 2]));
    assert_eq!(
        v["differentials"][0]["entries"][0],
        serde_json::json!(["x^2", "x*y", "y^2"])
    );
}

#[test]
fn blowup_json_has_charts_and_overlaps() {
    let ring = fixtures().join("ring_xy.json");
    let out = run(&[
        "blowup",
        "--ring",
        ring.to_str().unwrap(),
        "--center",
        "x^2, x*y, y^2",
        "--charts",
        "x, y",
        "--power",
        "2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["charts"].as_array().unwrap().len(), 2);
    assert_eq!(v["overlaps"].as_array().unwrap().len(), 1);
    assert_eq!(v["charts"][0]["exceptional"], "x");
}

#[test]
fn config_file_and_env_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, r#"{"cap_pairs": 1}"#).unwrap();
    let ring = fixtures().join("ring_xyz.json");
    // via flag
    let out = bin()
        .args([
            "gb",
            "--ring",
            ring.to_str().unwrap(),
            "x^2*y - z^2, y^2 - x*z, x*z^2 - y*z",
            "--config",
            config_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // via environment
    let out = bin()
        .args([
            "gb",
            "--ring",
            ring.to_str().unwrap(),
            "x^2*y - z^2, y^2 - x*z, x*z^2 - y*z",
        ])
        .env("SKODA_CONFIG", config_path.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
