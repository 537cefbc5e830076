//! End-to-end tests against the installed binary: exit codes, output files,
//! and the error messages an operator actually sees.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tdosc"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SMALL_RUN: &str = r#"{
    "profile": {"family": "modulated", "x": 1.0, "y": 0.0, "z": 1.0, "epsilon": 0.1, "nu": 2.0},
    "t0": 0.0, "t_end": 2.0, "step": 1e-3, "sample_every": 10,
    "number_states": [0, 1]
}"#;

#[test]
fn run_is_deterministic_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.json", SMALL_RUN);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out_path in [&a, &b] {
        let out = bin().args(["run", "--config"]).arg(&config).arg("--out").arg(out_path).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
        assert!(stdout(&out).contains("wrote 201 samples"), "stdout: {}", stdout(&out));
    }
    let (bytes_a, bytes_b) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
    let head = String::from_utf8(bytes_a).unwrap();
    let header = head.lines().next().unwrap();
    assert!(header.starts_with("t,re_u,im_u,re_udot,im_udot,wronskian_residual,"));
    assert!(header.ends_with("q2_0,p2_0,cross_0,uncertainty_0,q2_1,p2_1,cross_1,uncertainty_1"));
}

#[test]
fn run_falls_back_to_the_configured_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("configured.csv");
    let body = format!(
        r#"{{
            "profile": {{"family": "constant", "x": 1.0, "y": 0.0, "z": 1.0}},
            "t0": 0.0, "t_end": 1.0, "sample_every": 100,
            "output": {{"csv": {:?}}}
        }}"#,
        csv
    );
    let config = write_config(dir.path(), "run.json", &body);
    let out = bin().args(["run", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(csv.is_file());
}

#[test]
fn run_without_any_output_path_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.json", SMALL_RUN);
    let out = bin().args(["run", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("output.csv"), "stderr: {}", stderr(&out));
}

#[test]
fn verify_on_a_clean_scenario_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "verify.json", SMALL_RUN);
    let report = dir.path().join("report.json");
    let out = bin().args(["verify", "--config"]).arg(&config).arg("--report").arg(&report).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("overall: PASS"), "stdout: {text}");
    for name in ["wronskian", "unitarity", "reference_identity", "picture_equality", "uncertainty"] {
        assert!(text.contains(&format!("PASS {name}")), "missing PASS line for {name}: {text}");
    }
    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["overall_pass"], serde_json::Value::Bool(true));
    assert!(parsed["entries"].as_array().unwrap().len() >= 7);
}

#[test]
fn verify_reports_failures_and_exits_one() {
    // A step this coarse cannot hold the Wronskian; verification must keep
    // going, report the residual, and signal failure through the exit code.
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "coarse.json",
        r#"{
            "profile": {"family": "modulated", "x": 1.0, "y": 0.0, "z": 1.0, "epsilon": 0.1, "nu": 2.0},
            "t0": 0.0, "t_end": 20.0, "step": 0.5, "sample_every": 1
        }"#,
    );
    let report = dir.path().join("report.json");
    let out = bin().args(["verify", "--config"]).arg(&config).arg("--report").arg(&report).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("FAIL wronskian"), "stdout: {text}");
    assert!(text.contains("overall: FAIL"), "stdout: {text}");
    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["overall_pass"], serde_json::Value::Bool(false));
}

#[test]
fn config_errors_exit_two_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("backwards.json", r#"{"profile": {"family": "constant", "x": 1, "y": 0, "z": 1}, "t0": 5.0, "t_end": 1.0}"#, "t_end"),
        ("family.json", r#"{"profile": {"family": "fancy"}, "t0": 0.0, "t_end": 1.0}"#, "fancy"),
        ("syntax.json", r#"{"profile": {"#, "config"),
        ("typo.json", r#"{"profile": {"family": "constant", "x": 1, "y": 0, "z": 1}, "t0": 0.0, "t_end": 1.0, "stepp": 0.1}"#, "stepp"),
    ];
    for (name, body, needle) in cases {
        let config = write_config(dir.path(), name, body);
        let out = bin().args(["verify", "--config"]).arg(&config).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{name} stdout: {}", stdout(&out));
        assert!(stderr(&out).contains(needle), "{name} stderr: {}", stderr(&out));
    }
}

#[test]
fn sweep_writes_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sweep.json",
        r#"{
            "profile": {"family": "constant", "x": 1.0, "y": 0.0, "z": 1.0},
            "t0": 0.0, "t_end": 1.0, "sample_every": 100
        }"#,
    );
    let table = dir.path().join("table.csv");
    let out = bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .args(["--param", "z", "--values", "1.0,2.0,4.0", "--out"])
        .arg(&table)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "value,beta_sqr_final,r_final,max_wronskian_residual,max_unitarity_residual");
    assert!(lines[1].starts_with("1.0000000000000000e0,"));
    assert!(lines[3].starts_with("4.0000000000000000e0,"));
}

#[test]
fn sweep_accepts_an_empty_value_list() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sweep.json",
        r#"{
            "profile": {"family": "constant", "x": 1.0, "y": 0.0, "z": 1.0},
            "t0": 0.0, "t_end": 1.0
        }"#,
    );
    let table = dir.path().join("table.csv");
    let out =
        bin().args(["sweep", "--config"]).arg(&config).args(["--param", "z", "--out"]).arg(&table).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(fs::read_to_string(&table).unwrap().lines().count(), 1);
}

#[test]
fn sweep_rejects_a_parameter_the_profile_does_not_have() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sweep.json",
        r#"{
            "profile": {"family": "constant", "x": 1.0, "y": 0.0, "z": 1.0},
            "t0": 0.0, "t_end": 1.0
        }"#,
    );
    let table = dir.path().join("table.csv");
    let out = bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .args(["--param", "epsilon", "--values", "0.1", "--out"])
        .arg(&table)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("epsilon") && err.contains("accepts"), "stderr: {err}");
    assert!(!table.exists());
}
