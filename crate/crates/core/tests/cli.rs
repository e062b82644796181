mod common;

use std::process::Command;

use common::{golden_dir, CASES};

#[test]
fn golden_files_match() {
    let failures: Vec<String> = CASES.iter().filter_map(|c| c.check().err()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn seed_flag_overrides_config() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_optdesign"))
            .args(["simulate", "--config"])
            .arg(golden_dir().join("simulate_exp.json"))
            .args(["--seed", seed, "--format", "csv"])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("2");
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).lines().nth(1).unwrap().contains(",1,2000,"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("design.json");
    let status = Command::new(env!("CARGO_BIN_EXE_optdesign"))
        .args(["design", "--config"])
        .arg(golden_dir().join("design_minimal.json"))
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, std::fs::read(golden_dir().join("design_minimal.design.json")).unwrap());
}

#[test]
fn missing_config_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_optdesign"))
        .args(["design", "--config", "/nonexistent/config.json"])
        .env_remove("OPTDESIGN_CONFIG_DIR")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let record: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(record["error"], "config");
    assert_eq!(record["exit_code"], 2);
}

#[test]
fn bad_field_reports_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(golden_dir().join("design_minimal.json"))
        .unwrap()
        .replace("\"sigma\": 0.1", "\"sigma\": -0.1");
    std::fs::write(&path, text).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_optdesign"))
        .args(["design", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("noise:"));
}
