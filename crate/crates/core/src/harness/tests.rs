use super::*;
use crate::channels::ChannelSpec;
use crate::error::Error;
use crate::hqis::Receiver;

fn base_config(protocol: Protocol) -> ScenarioConfig {
    let mut config = ScenarioConfig::new(protocol);
    config.trials = 200;
    config.seed = 7;
    config
}

#[test]
fn perfect_scenario_reports_unit_fidelity() {
    let mut config = base_config(Protocol::HqisPerfect);
    config.lambda = LambdaChoice::fixed(1.0, 0.0);
    let report = run_scenario(&config).unwrap();
    assert_eq!(report.aggregates.trials, 200);
    assert!((report.aggregates.mean_fidelity.unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(report.trials.len(), 200);
    assert_eq!(verdict(&report), ScenarioVerdict::Ok);
}

#[test]
fn probabilistic_scenario_matches_the_exact_oracle() {
    let mut config = base_config(Protocol::HqisProbabilistic);
    config.a = Some(0.8);
    config.b = Some(0.6);
    config.trials = 20_000;
    let report = run_scenario(&config).unwrap();
    let expected = report.aggregates.expected_success_probability.unwrap();
    assert!((expected - 0.72).abs() < 1e-9);
    let rate = report.aggregates.success_rate.unwrap();
    let sigma = (expected * (1.0 - expected) / 20_000f64).sqrt();
    assert!((rate - expected).abs() < 5.0 * sigma);
}

#[test]
fn hqss_scenario_aggregates_decoy_statistics() {
    let mut config = base_config(Protocol::Hqss);
    config.n = Some(1);
    config.adversary = AdversaryKind::InterceptResend;
    config.intercept_prob = Some(1.0);
    config.trials = 500;
    let report = run_scenario(&config).unwrap();
    let rate = report.aggregates.decoy_error_rate.unwrap();
    let matched = report.aggregates.total_decoys_matched.unwrap();
    assert!(matched > 0);
    let sigma = (0.25 * 0.75 / matched as f64).sqrt();
    assert!((rate - 0.25).abs() < 5.0 * sigma);
    // Expected abort rate for 3n decoys: 1 - (7/8)^(3n), here n = 1.
    let abort = report.aggregates.abort_rate.unwrap();
    let expected = 1.0 - (7.0f64 / 8.0).powi(3);
    let abort_sigma = (expected * (1.0 - expected) / 500.0).sqrt();
    assert!((abort - expected).abs() < 5.0 * abort_sigma);
}

#[test]
fn verify_tables_scenario_passes_all_rows() {
    let start = std::time::Instant::now();
    let report = run_scenario(&base_config(Protocol::VerifyTables)).unwrap();
    assert!(start.elapsed().as_secs_f64() < 5.0);
    let table = report.table_report.as_ref().unwrap();
    assert_eq!(table.rows.len(), 48);
    assert!(table.all_passed, "failed rows: {}", table.rows_failed);
    assert_eq!(report.aggregates.table_rows_failed, Some(0));

    // The discrepant printed operator is reported and fails.
    let flagged: Vec<_> = table
        .rows
        .iter()
        .filter_map(|r| r.alternate_op.as_ref())
        .collect();
    assert_eq!(flagged.len(), 1);
    assert!(!flagged[0].passed);
    assert_eq!(verdict(&report), ScenarioVerdict::Ok);
}

#[test]
fn verify_encryption_scenario() {
    let mut config = base_config(Protocol::VerifyEncryption);
    config.trials = 100;
    config.channel = Some(ChannelSpec::Cluster4);
    let report = run_scenario(&config).unwrap();
    assert!(report.aggregates.max_deviation_from_mixed.unwrap() < 1e-12);
    assert_eq!(report.aggregates.success_rate, Some(1.0));
}

#[test]
fn attack_study_scenario() {
    let mut config = base_config(Protocol::AttackStudy);
    config.n = Some(1);
    config.trials = 40;
    let report = run_scenario(&config).unwrap();
    let study = report.attack_study.as_ref().unwrap();
    assert!(study.bare_hqis_fidelity > 1.0 - 1e-12);
    assert!(study.mean_blind_fidelity < 0.999);
    assert!(study.detection_rate > 0.0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let mut config = base_config(Protocol::Hqss);
    config.n = Some(2);
    config.adversary = AdversaryKind::InterceptResend;
    config.intercept_prob = Some(0.5);
    config.trials = 64;
    let a = run_scenario(&config).unwrap();
    let b = run_scenario(&config).unwrap();
    for format in [ReportFormat::Json, ReportFormat::Csv, ReportFormat::Human] {
        assert_eq!(
            emit_report(&a, format).unwrap(),
            emit_report(&b, format).unwrap()
        );
    }

    let mut other_seed = config.clone();
    other_seed.seed = 8;
    let c = run_scenario(&other_seed).unwrap();
    assert_ne!(
        emit_report(&a, ReportFormat::Json).unwrap(),
        emit_report(&c, ReportFormat::Json).unwrap()
    );
}

#[test]
fn json_reports_round_trip() {
    let mut config = base_config(Protocol::HqisPerfect);
    config.trials = 16;
    let report = run_scenario(&config).unwrap();
    let bytes = emit_report(&report, ReportFormat::Json).unwrap();
    let back: Report = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report, back);
    assert_eq!(bytes, emit_report(&back, ReportFormat::Json).unwrap());
}

#[test]
fn csv_has_the_documented_header() {
    let mut config = base_config(Protocol::HqisPerfect);
    config.trials = 3;
    let report = run_scenario(&config).unwrap();
    let bytes = emit_report(&report, ReportFormat::Csv).unwrap();
    let text = String::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    assert_eq!(lines.count(), 3);
}

#[test]
fn human_report_carries_provenance() {
    let mut config = base_config(Protocol::HqisPerfect);
    config.trials = 4;
    let report = run_scenario(&config).unwrap();
    let text = String::from_utf8(emit_report(&report, ReportFormat::Human).unwrap()).unwrap();
    assert!(text.contains("seed"));
    assert!(text.contains(&report.config_hash));
}

#[test]
fn a_failing_table_row_flips_the_verdict() {
    let mut report = run_scenario(&base_config(Protocol::VerifyTables)).unwrap();
    assert_eq!(verdict(&report), ScenarioVerdict::Ok);
    {
        let table = report.table_report.as_mut().unwrap();
        table.rows[0].passed = false;
        table.rows[0].min_fidelity = 0.5;
        table.rows_failed = 1;
        table.all_passed = false;
    }
    assert_eq!(verdict(&report), ScenarioVerdict::TableFailure);
}

#[test]
fn config_hash_tracks_content() {
    let a = base_config(Protocol::HqisPerfect);
    let mut b = a.clone();
    assert_eq!(a.hash(), b.hash());
    b.seed = 8;
    assert_ne!(a.hash(), b.hash());
}

#[test]
fn invalid_configs_are_rejected_with_field_messages() {
    let mut config = base_config(Protocol::HqisPerfect);
    config.a = Some(0.8);
    match config.validate().unwrap_err() {
        Error::InvalidConfig { field, .. } => assert_eq!(field, "a"),
        other => panic!("unexpected error {other}"),
    }

    let mut config = base_config(Protocol::HqisProbabilistic);
    config.a = Some(0.8);
    config.b = Some(0.7);
    assert!(matches!(
        config.validate().unwrap_err(),
        Error::InvalidConfig { .. }
    ));

    let mut config = base_config(Protocol::HqisProbabilistic);
    config.a = Some(0.8);
    config.b = Some(0.6);
    config.receiver = Some(Receiver::Charlie);
    assert!(config.validate().is_err());

    let mut config = base_config(Protocol::HqisPerfect);
    config.channel = Some(ChannelSpec::OmegaPrime { a: 0.8, b: 0.6 });
    assert!(config.validate().is_err());

    let mut config = base_config(Protocol::Hqss);
    config.n = Some(5);
    assert!(config.validate().is_err());

    let mut config = base_config(Protocol::HqisPerfect);
    config.trials = 0;
    assert!(config.validate().is_err());

    let mut config = base_config(Protocol::HqisPerfect);
    config.adversary = AdversaryKind::InterceptResend;
    assert!(config.validate().is_err());
}

#[test]
fn config_files_parse_with_unknown_fields_rejected() {
    let json = r#"{
        "protocol": "hqis-probabilistic",
        "a": 0.8,
        "b": 0.6,
        "lambda": {"re": 1.0, "im": 0.0},
        "trials": 10,
        "seed": 3
    }"#;
    let config: ScenarioConfig = serde_json::from_str(json).unwrap();
    assert!(config.validate().is_ok());
    assert_eq!(config.trials, 10);

    let bad = r#"{"protocol": "hqss", "frobnicate": 1}"#;
    assert!(serde_json::from_str::<ScenarioConfig>(bad).is_err());

    let random_lambda = r#"{"protocol": "hqis-perfect", "lambda": "random"}"#;
    let config: ScenarioConfig = serde_json::from_str(random_lambda).unwrap();
    assert!(config.lambda.is_random());

    let bad_lambda = r#"{"protocol": "hqis-perfect", "lambda": "sometimes"}"#;
    let config: ScenarioConfig = serde_json::from_str(bad_lambda).unwrap();
    assert!(config.validate().is_err());
}

#[test]
fn sig12_clamps_precision() {
    assert_eq!(sig12(0.0), 0.0);
    assert_eq!(sig12(1.0), 1.0);
    let x = 0.123_456_789_012_345_67;
    let clamped = sig12(x);
    assert!((clamped - x).abs() < 1e-12);
    assert_eq!(sig12(clamped), clamped);
}
