use std::process::Command;

use serde_json::Value;

fn ade(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_ade")).args(args).output().unwrap();
    (o.status.code().unwrap_or(-1), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut v = args.to_vec();
    v.extend(["--format", "json"]);
    let (code, out, _) = ade(&v);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn curves_json() {
    let (code, v) = json(&["curves", "--type", "E6", "--node", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["report"]["count"], 27);
    assert_eq!(v["report"]["curves"][26], serde_json::json!([1, 0, 0, 0, 0, 0, 0]));
}

#[test]
fn trivial_dbar() {
    let (code, out, _) = ade(&["dbar-check", "--type", "A1"]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn e8_grades() {
    let (_, v) = json(&["branch", "--type", "E8", "--remove", "C8"]);
    assert_eq!(v["report"]["summands"], serde_json::json!([8, 28, 56, 64, 56, 28, 8]));
    let (_, v) = json(&["branch", "--type", "E8", "--remove", "C7"]);
    assert_eq!(v["report"]["summands"], serde_json::json!([14, 64, 1, 91, 64, 14]));
}

#[test]
fn usage_errors() {
    let (code, _, err) = ade(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    assert_eq!(ade(&["curves", "--type", "G2"]).0, 2);
    assert_eq!(ade(&["curves", "--type", "E6", "--format", "yaml"]).0, 2);
}

#[test]
fn check_failure_reports_json() {
    let (code, v) = json(&["form", "--type", "A3"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert!(v["error"].as_str().unwrap().contains("invariant form"));
}

#[test]
fn worker_env_is_honoured() {
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_ade"))
            .args(["rep", "--type", "D5", "--format", "json"])
            .env("ADE_WORKERS", w)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn blowup_script() {
    let dir = std::env::temp_dir().join(format!("ade-script-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chain.json");
    std::fs::write(&path, r#"{"start": "plane", "steps": [{"on": []}, {"on": [1]}, {"on": [2]}, {"on": [3]}], "terminal": 4}"#).unwrap();
    let (code, v) = json(&["blowup", "--type", "A3", "--script", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["verification"]["curves_found"], 4);
    std::fs::remove_dir_all(&dir).ok();
}
