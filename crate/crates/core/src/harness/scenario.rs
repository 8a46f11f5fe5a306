//! Scenario dispatch: seeded Monte Carlo batches over the protocol engines.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::{is_effectively_maximal, SecretParam};
use crate::error::Result;
use crate::harness::config::{Protocol, ScenarioConfig};
use crate::harness::report::{sig12, Aggregates, Report, TrialSummary, REPORT_SCHEMA_VERSION};
use crate::harness::tables::verify_tables;
use crate::hqis::{self, HelperOutcome, ProtocolTranscript};
use crate::hqss;
use crate::phqis;
use crate::rng::{random_lambda, trial_rng};

fn trial_lambda(config: &ScenarioConfig, trial: u64) -> (Complex64, crate::rng::RandomSource) {
    let mut rng = trial_rng(config.seed, trial);
    let lambda = config
        .lambda
        .fixed_value()
        .unwrap_or_else(|| random_lambda(&mut rng));
    (lambda, rng)
}

fn outcome_chain(t: &ProtocolTranscript) -> String {
    let helper = t
        .helper_outcomes
        .first()
        .map(|(_, o)| match o {
            HelperOutcome::Computational(bit) => bit.to_string(),
            HelperOutcome::Joint(b) => b.label().to_string(),
        })
        .unwrap_or_default();
    format!("{}/{}/{}", t.alice_outcome.label(), helper, t.correction)
}

/// Run a validated config to a reproducible report.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Report> {
    config.validate()?;
    let (trials, aggregates, table_report, attack_study) = match config.protocol {
        Protocol::HqisPerfect => run_hqis_batch(config)?,
        Protocol::HqisProbabilistic => run_phqis_batch(config)?,
        Protocol::Hqss => run_hqss_batch(config)?,
        Protocol::AttackStudy => run_attack_study(config)?,
        Protocol::VerifyTables => run_verify_tables(config)?,
        Protocol::VerifyEncryption => run_verify_encryption(config)?,
    };
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        config_hash: config.hash(),
        seed: config.seed,
        aggregates: aggregates.canonicalized(),
        trials: trials
            .into_iter()
            .map(TrialSummary::canonicalized)
            .collect(),
        table_report: table_report.map(canonicalize_table_report),
        attack_study: attack_study.map(canonicalize_attack_study),
    })
}

fn canonicalize_table_report(
    mut table: crate::harness::tables::TableReport,
) -> crate::harness::tables::TableReport {
    for row in &mut table.rows {
        row.min_fidelity = sig12(row.min_fidelity);
        if let Some(alt) = &mut row.alternate_op {
            alt.min_fidelity = sig12(alt.min_fidelity);
        }
    }
    table
}

fn canonicalize_attack_study(
    mut study: crate::hqss::AttackStudyReport,
) -> crate::hqss::AttackStudyReport {
    study.bare_hqis_fidelity = sig12(study.bare_hqis_fidelity);
    study.mean_blind_fidelity = sig12(study.mean_blind_fidelity);
    study.min_blind_fidelity = sig12(study.min_blind_fidelity);
    study.max_blind_fidelity = sig12(study.max_blind_fidelity);
    study.detection_rate = sig12(study.detection_rate);
    study.mean_decoy_error_rate = sig12(study.mean_decoy_error_rate);
    for trial in &mut study.blind_trials {
        trial.check.error_rate = sig12(trial.check.error_rate);
        for f in &mut trial.copy_fidelities {
            *f = sig12(*f);
        }
    }
    study
}

type ScenarioParts = (
    Vec<TrialSummary>,
    Aggregates,
    Option<crate::harness::tables::TableReport>,
    Option<crate::hqss::AttackStudyReport>,
);

fn fidelity_aggregates(trials: &[TrialSummary]) -> (Option<f64>, Option<f64>, Option<f64>) {
    let fids: Vec<f64> = trials.iter().filter_map(|t| t.fidelity).collect();
    if fids.is_empty() {
        return (None, None, None);
    }
    let mean = fids.iter().sum::<f64>() / fids.len() as f64;
    let min = fids.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = fids.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (Some(mean), Some(min), Some(max))
}

fn run_hqis_batch(config: &ScenarioConfig) -> Result<ScenarioParts> {
    let channel = config.effective_channel()?;
    let receiver = config.receiver_or_default();
    let trials: Vec<TrialSummary> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialSummary> {
            let (lambda, mut rng) = trial_lambda(config, trial);
            let lambda = SecretParam::new(lambda)?;
            let t = hqis::run_hqis(&channel, receiver, lambda, &mut rng)?;
            Ok(TrialSummary {
                trial,
                lambda_re: lambda.value().re,
                lambda_im: lambda.value().im,
                fidelity: Some(t.fidelity),
                outcomes: Some(outcome_chain(&t)),
                ..TrialSummary::default()
            })
        })
        .collect::<Result<_>>()?;
    let (mean, min, max) = fidelity_aggregates(&trials);
    let aggregates = Aggregates {
        trials: config.trials,
        mean_fidelity: mean,
        min_fidelity: min,
        max_fidelity: max,
        ..Aggregates::default()
    };
    Ok((trials, aggregates, None, None))
}

fn run_phqis_batch(config: &ScenarioConfig) -> Result<ScenarioParts> {
    let (a, b) = config.probabilistic_coefficients()?;
    if is_effectively_maximal(a, b) {
        eprintln!(
            "note: a = b = 1/sqrt(2) is the maximal channel; the probabilistic scheme succeeds with certainty there"
        );
    }
    let receiver = config.receiver_or_default();
    let trials: Vec<TrialSummary> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialSummary> {
            let (lambda, mut rng) = trial_lambda(config, trial);
            let lambda = SecretParam::new(lambda)?;
            let t = phqis::run_phqis(receiver, a, b, lambda, &mut rng)?;
            Ok(TrialSummary {
                trial,
                lambda_re: lambda.value().re,
                lambda_im: lambda.value().im,
                fidelity: Some(t.base.fidelity),
                succeeded: Some(t.succeeded),
                outcomes: Some(format!(
                    "{}/anc{}",
                    outcome_chain(&t.base),
                    t.ancilla_outcome
                )),
                ..TrialSummary::default()
            })
        })
        .collect::<Result<_>>()?;
    let successes = trials.iter().filter(|t| t.succeeded == Some(true)).count();
    let reference_lambda = SecretParam::new(
        config
            .lambda
            .fixed_value()
            .unwrap_or(Complex64::new(1.0, 0.0)),
    )?;
    let expected = phqis::success_probability_exact(receiver, a, b, reference_lambda)?;
    let (mean, min, max) = fidelity_aggregates(&trials);
    let aggregates = Aggregates {
        trials: config.trials,
        mean_fidelity: mean,
        min_fidelity: min,
        max_fidelity: max,
        success_rate: Some(successes as f64 / config.trials as f64),
        expected_success_probability: Some(expected),
        ..Aggregates::default()
    };
    Ok((trials, aggregates, None, None))
}

fn run_hqss_batch(config: &ScenarioConfig) -> Result<ScenarioParts> {
    let n = config.copies_or_default();
    let receiver = config.receiver_or_default();
    let adversary = config.adversary_model()?;
    let threshold = config.threshold;
    let trials: Vec<TrialSummary> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialSummary> {
            let (lambda, mut rng) = trial_lambda(config, trial);
            let lambda = SecretParam::new(lambda)?;
            let t = hqss::run_hqss(n, lambda, receiver, &adversary, threshold, &mut rng)?;
            let fidelity = if t.secret_runs.is_empty() {
                None
            } else {
                Some(
                    t.secret_runs.iter().map(|r| r.fidelity).sum::<f64>()
                        / t.secret_runs.len() as f64,
                )
            };
            let outcomes = if t.secret_runs.is_empty() {
                None
            } else {
                Some(
                    t.secret_runs
                        .iter()
                        .map(outcome_chain)
                        .collect::<Vec<_>>()
                        .join(";"),
                )
            };
            Ok(TrialSummary {
                trial,
                lambda_re: lambda.value().re,
                lambda_im: lambda.value().im,
                fidelity,
                aborted: Some(t.aborted),
                decoy_errors: Some(t.check.errors),
                decoys_matched: Some(t.check.bases_matched),
                outcomes,
                ..TrialSummary::default()
            })
        })
        .collect::<Result<_>>()?;
    let aborts = trials.iter().filter(|t| t.aborted == Some(true)).count();
    let matched: u64 = trials
        .iter()
        .map(|t| u64::from(t.decoys_matched.unwrap_or(0)))
        .sum();
    let errors: u64 = trials
        .iter()
        .map(|t| u64::from(t.decoy_errors.unwrap_or(0)))
        .sum();
    let (mean, min, max) = fidelity_aggregates(&trials);
    let aggregates = Aggregates {
        trials: config.trials,
        mean_fidelity: mean,
        min_fidelity: min,
        max_fidelity: max,
        abort_rate: Some(aborts as f64 / config.trials as f64),
        total_decoys_matched: Some(matched),
        total_decoy_errors: Some(errors),
        decoy_error_rate: Some(errors as f64 / matched.max(1) as f64),
        ..Aggregates::default()
    };
    Ok((trials, aggregates, None, None))
}

fn run_attack_study(config: &ScenarioConfig) -> Result<ScenarioParts> {
    let n = config.copies_or_default();
    let (lambda, mut rng) = trial_lambda(config, 0);
    let lambda = SecretParam::new(lambda)?;
    let study = hqss::attack_effectiveness_study(n, lambda, config.trials as usize, &mut rng)?;
    let trials: Vec<TrialSummary> = study
        .blind_trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mean_fid =
                t.copy_fidelities.iter().sum::<f64>() / t.copy_fidelities.len().max(1) as f64;
            TrialSummary {
                trial: i as u64,
                lambda_re: lambda.value().re,
                lambda_im: lambda.value().im,
                fidelity: Some(mean_fid),
                aborted: Some(t.check.aborted),
                decoy_errors: Some(t.check.errors),
                decoys_matched: Some(t.check.bases_matched),
                ..TrialSummary::default()
            }
        })
        .collect();
    let (mean, min, max) = fidelity_aggregates(&trials);
    let aggregates = Aggregates {
        trials: config.trials,
        mean_fidelity: mean,
        min_fidelity: min,
        max_fidelity: max,
        detection_rate: Some(study.detection_rate),
        mean_blind_fidelity: Some(sig12(study.mean_blind_fidelity)),
        ..Aggregates::default()
    };
    Ok((trials, aggregates, None, Some(study)))
}

fn run_verify_tables(config: &ScenarioConfig) -> Result<ScenarioParts> {
    let table_report = verify_tables(config.seed)?;
    let aggregates = Aggregates {
        trials: 0,
        table_rows_failed: Some(table_report.rows_failed),
        ..Aggregates::default()
    };
    Ok((Vec::new(), aggregates, Some(table_report), None))
}

fn run_verify_encryption(config: &ScenarioConfig) -> Result<ScenarioParts> {
    let channel = config.effective_channel()?;
    let trials: Vec<TrialSummary> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialSummary> {
            let (lambda, _) = trial_lambda(config, trial);
            let lambda = SecretParam::new(lambda)?;
            let report = hqis::verify_encryption(&channel, lambda)?;
            Ok(TrialSummary {
                trial,
                lambda_re: lambda.value().re,
                lambda_im: lambda.value().im,
                max_deviation: Some(
                    report
                        .max_deviation_from_mixed
                        .max(report.max_pauli_infidelity),
                ),
                succeeded: Some(report.passed),
                ..TrialSummary::default()
            })
        })
        .collect::<Result<_>>()?;
    let max_dev = trials
        .iter()
        .filter_map(|t| t.max_deviation)
        .fold(0.0f64, f64::max);
    let all_passed = trials.iter().all(|t| t.succeeded == Some(true));
    let aggregates = Aggregates {
        trials: config.trials,
        max_deviation_from_mixed: Some(max_dev),
        success_rate: Some(if all_passed { 1.0 } else { 0.0 }),
        ..Aggregates::default()
    };
    Ok((trials, aggregates, None, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioVerdict {
    Ok,
    TableFailure,
}

/// Verdict used by the CLI for its exit code.
pub fn verdict(report: &Report) -> ScenarioVerdict {
    match &report.table_report {
        Some(t) if !t.all_passed => ScenarioVerdict::TableFailure,
        _ => ScenarioVerdict::Ok,
    }
}
