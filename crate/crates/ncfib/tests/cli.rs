//! The compiled binary, driven as a subprocess.

use std::process::{Command, Output};

fn ncfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncfib")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn s3_json_has_expected_cohomology() {
    let o = ncfib(&["example", "s3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["converged"], serde_json::json!([1, 2, 1, 0]));
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn matrix_text_has_page_two() {
    let o = ncfib(&["example", "matrix"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("page E_2"));
    assert!(s.contains("stable page: 2"));
}

#[test]
fn pages_and_degree_flags() {
    let o = ncfib(&["example", "s3", "--pages", "3", "--max-degree", "2", "--b", "3/4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("page E_3") && !s.contains("page E_4"));
    assert!(s.contains("b: 3/4"));
    assert!(s.contains("converged: [1, 2, 1]"));
}

#[test]
fn missing_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing.json");
    let o = ncfib(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot read"));
}

#[test]
fn malformed_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"calculus": {"kind": "group", "generators": 3}}"#).unwrap();
    let o = ncfib(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn shipped_configs_check_cleanly() {
    for name in ["s3.json", "m3.json"] {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/").to_string() + name;
        let o = ncfib(&["check", &path, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    }
}

#[test]
fn disconnected_config_is_validation_error() {
    let text = include_str!("../configs/s3.json").replace("\"-sqrt(3)\", \"1\"", "\"-1/2*sqrt(3)\", \"1/2\"");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("half.json");
    std::fs::write(&path, text).unwrap();
    let o = ncfib(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn half_b_example_exits_one() {
    let o = ncfib(&["example", "s3", "--b", "1/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn unknown_flag_exits_two() {
    assert_eq!(ncfib(&["example", "s3", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(ncfib(&["frobnicate"]).status.code(), Some(2));
}
