use std::process::{Command, Output};

use dyingrabbit::report::{
    BinetFormRecord, GridRecord, LimitRecord, RatioRecord, RealRootRecord, Render, RootSetRecord, SequenceRecord,
    SquarefreeRecord, VerifyRecord,
};
use serde::de::DeserializeOwned;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyingrabbit"))
        .args(args)
        .env_remove("DYINGRABBIT_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_reproduces_plain<R: Render + DeserializeOwned>(args: &[&str]) {
    let plain = stdout(args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let record: R = serde_json::from_str(&stdout(&json_args)).unwrap();
    assert_eq!(record.plain(), plain, "{args:?}");
}

#[test]
fn seq_examples() {
    assert_eq!(stdout(&["seq", "3", "2", "10"]), "1,1,2,3,4,6,9,13,19,28,41\n");
    assert_eq!(stdout(&["seq", "7", "4", "13"]), "1,1,1,1,2,3,4,5,7,10,13,17,23,32\n");
    assert_eq!(stdout(&["seq", "2", "1", "5"]), "1,2,3,5,8,13\n");
}

#[test]
fn seq_with_custom_seed() {
    assert_eq!(stdout(&["seq", "2", "2", "6", "--init", "0,1,0"]), "0,1,0,1,1,1,2\n");
    assert_eq!(stdout(&["seq", "2", "1", "4", "--init", "-1,1"]), "-1,1,0,1,1\n");
}

#[test]
fn roots_of_k1_is_exactly_one() {
    assert_eq!(stdout(&["roots", "1", "4"]).lines().next(), Some("1"));
}

#[test]
fn golden_ratio() {
    let text = stdout(&["roots", "2", "1"]);
    assert!(text.starts_with("1.6180339887498948482045868343656381177"));
}

#[test]
fn verify_rejects_k1() {
    let out = run(&["verify", "1", "3", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k=1 unsupported for closed form"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["seq", "0", "2", "5"][..],
        &["seq", "3", "2"],
        &["seq", "2", "2", "5", "--init", "1,1"],
        &["seq", "2", "2", "5", "--init", "1,a,1"],
        &["roots", "2", "2", "--precision", "8"],
        &["roots", "1", "3", "--all"],
        &["grid", "0", "3"],
        &["limits", "3", "3", "--target-gap", "-1"],
        &["roots", "2", "2", "--format", "xml"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let text = stdout(&["verify", "3", "2", "120", "--precision", "256"]);
    assert!(text.contains("mismatches=0"));
    assert!(text.ends_with("PASS\n"));
}

#[test]
fn json_output_reproduces_plain_output() {
    json_reproduces_plain::<SequenceRecord>(&["seq", "7", "4", "30"]);
    json_reproduces_plain::<SequenceRecord>(&["seq", "2", "2", "9", "--init", "0,1,0"]);
    json_reproduces_plain::<RealRootRecord>(&["roots", "5", "3"]);
    json_reproduces_plain::<RealRootRecord>(&["roots", "1", "4"]);
    json_reproduces_plain::<RootSetRecord>(&["roots", "4", "3", "--all"]);
    json_reproduces_plain::<GridRecord>(&["grid", "4", "4"]);
    json_reproduces_plain::<LimitRecord>(&["limits", "4", "4"]);
    json_reproduces_plain::<VerifyRecord>(&["verify", "2", "3", "80"]);
    json_reproduces_plain::<BinetFormRecord>(&["binet", "3", "2"]);
    json_reproduces_plain::<BinetFormRecord>(&["binet", "4", "1"]);
    json_reproduces_plain::<RatioRecord>(&["ratio", "2", "2", "200"]);
    json_reproduces_plain::<SquarefreeRecord>(&["squarefree", "6", "5"]);
}

#[test]
fn binet_json_schema() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["binet", "3", "2", "--format", "json"])).unwrap();
    assert_eq!(json["solver"], "explicit-formula");
    assert_eq!(json["precision_bits"], 128);
    let roots = json["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 4);
    for pair in roots.iter().chain(json["coeffs"].as_array().unwrap()) {
        let pair = pair.as_array().unwrap();
        assert_eq!(pair.len(), 2);
        assert!(pair.iter().all(|v| v.is_string()));
    }
}

#[test]
fn squarefree_polynomial_schema() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["squarefree", "3", "1", "--format", "json"])).unwrap();
    assert_eq!(json["polynomial"], serde_json::json!(["-1", "-1", "-1", "1"]));
    assert_eq!(json["squarefree"], true);
}

#[test]
fn grid_csv_header() {
    let csv = stdout(&["grid", "3", "2", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,h,alpha,residual"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn precision_from_environment_and_flag() {
    let with_env = |value: &str, extra: &[&str]| {
        let mut args = vec!["roots", "2", "2", "--format", "json"];
        args.extend(extra);
        let out = Command::new(env!("CARGO_BIN_EXE_dyingrabbit"))
            .args(&args)
            .env("DYINGRABBIT_PRECISION", value)
            .output()
            .unwrap();
        assert!(out.status.success());
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        json["precision_bits"].as_u64().unwrap()
    };
    assert_eq!(with_env("64", &[]), 64);
    assert_eq!(with_env("64", &["--precision", "300"]), 300);

    let default: serde_json::Value = serde_json::from_str(&stdout(&["roots", "2", "2", "--format", "json"])).unwrap();
    assert_eq!(default["precision_bits"], 128);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("dyingrabbit-cli-{}.txt", std::process::id()));
    let out = run(&["seq", "3", "2", "10", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "1,1,2,3,4,6,9,13,19,28,41\n");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
