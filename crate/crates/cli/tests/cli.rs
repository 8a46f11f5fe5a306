//! End-to-end checks of the `hiqs` binary: exit codes, format surface and
//! report determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn hiqs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hiqs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn verify_tables_passes_and_prints_rows() {
    let out = hiqs(&["verify-tables", "--seed", "5"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("48 rows, 0 failed"));
    assert!(text.contains("hqis-low-cost"));
    assert!(text.contains("printed candidate U1"));
}

#[test]
fn simulate_perfect_scenario_json() {
    let out = hiqs(&[
        "simulate",
        "--protocol",
        "hqis-perfect",
        "--channel",
        "omega",
        "--receiver",
        "diana",
        "--lambda-re",
        "1.0",
        "--trials",
        "50",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["aggregates"]["mean_fidelity"], 1.0);
    assert_eq!(report["trials"].as_array().unwrap().len(), 50);
}

#[test]
fn simulate_probabilistic_reports_expected_probability() {
    let out = hiqs(&[
        "simulate",
        "--protocol",
        "hqis-probabilistic",
        "--a",
        "0.8",
        "--b",
        "0.6",
        "--trials",
        "2000",
        "--seed",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let expected = report["aggregates"]["expected_success_probability"]
        .as_f64()
        .unwrap();
    assert!((expected - 0.72).abs() < 1e-9);
}

#[test]
fn invalid_config_exits_with_code_two() {
    let out = hiqs(&[
        "simulate",
        "--protocol",
        "hqis-probabilistic",
        "--a",
        "0.8",
        "--b",
        "0.7",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid config"));

    let out = hiqs(&["simulate", "--protocol", "no-such-protocol"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_output_has_fixed_header() {
    let out = hiqs(&[
        "simulate",
        "--protocol",
        "hqis-perfect",
        "--trials",
        "4",
        "--seed",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with(
        "trial,lambda_re,lambda_im,fidelity,succeeded,aborted,decoy_errors,decoys_matched,max_deviation,outcomes\n"
    ));
}

#[test]
fn repeated_runs_emit_identical_files() {
    let dir = std::env::temp_dir();
    let path_a: PathBuf = dir.join("hiqs_cli_det_a.json");
    let path_b: PathBuf = dir.join("hiqs_cli_det_b.json");
    for path in [&path_a, &path_b] {
        let out = hiqs(&[
            "simulate",
            "--protocol",
            "hqss",
            "--n",
            "2",
            "--adversary",
            "intercept-resend",
            "--intercept-prob",
            "0.4",
            "--trials",
            "64",
            "--seed",
            "11",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = std::fs::read(&path_a).unwrap();
    let b = std::fs::read(&path_b).unwrap();
    assert_eq!(a, b);
    let _ = std::fs::remove_file(&path_a);
    let _ = std::fs::remove_file(&path_b);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = std::env::temp_dir();
    let config_path = dir.join("hiqs_cli_config.json");
    std::fs::write(
        &config_path,
        r#"{"protocol": "hqis-perfect", "trials": 10, "seed": 2, "lambda": {"re": 1.0, "im": 0.0}}"#,
    )
    .unwrap();
    let out = hiqs(&[
        "simulate",
        "--config",
        config_path.to_str().unwrap(),
        "--trials",
        "25",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // The flag overrides the file's trial count; the file's seed stays.
    assert_eq!(report["config"]["trials"], 25);
    assert_eq!(report["seed"], 2);
    let _ = std::fs::remove_file(&config_path);
}

#[test]
fn attack_study_subcommand() {
    let out = hiqs(&[
        "attack-study",
        "--n",
        "1",
        "--lambda-re",
        "1.0",
        "--trials",
        "30",
        "--seed",
        "9",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let study = &report["attack_study"];
    assert_eq!(study["bare_hqis_fidelity"], 1.0);
    assert!(study["mean_blind_fidelity"].as_f64().unwrap() < 1.0);
}

#[test]
fn verify_encryption_subcommand() {
    let out = hiqs(&[
        "verify-encryption",
        "--channel",
        "cluster4",
        "--trials",
        "20",
        "--seed",
        "4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(
        report["aggregates"]["max_deviation_from_mixed"]
            .as_f64()
            .unwrap()
            < 1e-12
    );
}
