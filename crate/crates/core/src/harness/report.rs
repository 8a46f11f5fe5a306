//! Report assembly and emission.
//!
//! Reports are canonicalized by trial index, floats are clamped to 12
//! significant digits, and field order is fixed, so a (config, seed) pair
//! reproduces the emitted bytes exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::ScenarioConfig;
use crate::harness::tables::TableReport;
use crate::hqss::AttackStudyReport;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Round to 12 significant digits; keeps emitted floats stable across
/// accumulation-order differences the contract does not promise.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn opt_sig12(x: Option<f64>) -> Option<f64> {
    x.map(sig12)
}

/// One trial, flattened across protocols; inapplicable fields stay empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct TrialSummary {
    pub trial: u64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub succeeded: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoy_errors: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoys_matched: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    /// Compact outcome chain, e.g. `psi+/0/I` or one `alice:helper:corr`
    /// triple per channel copy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<String>,
}

impl TrialSummary {
    pub(crate) fn canonicalized(mut self) -> Self {
        self.fidelity = opt_sig12(self.fidelity);
        self.max_deviation = opt_sig12(self.max_deviation);
        self
    }
}

/// Order-independent aggregates over the trial batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Aggregates {
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    /// Closed-form reference for the probabilistic scheme, from the exact
    /// branch enumeration (lambda-independent).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_success_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abort_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_decoys_matched: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_decoy_errors: Option<u64>,
    /// Pooled matched-basis decoy error rate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoy_error_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_blind_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_rows_failed: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation_from_mixed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_pauli_infidelity: Option<f64>,
}

impl Aggregates {
    pub(crate) fn canonicalized(mut self) -> Self {
        self.mean_fidelity = opt_sig12(self.mean_fidelity);
        self.min_fidelity = opt_sig12(self.min_fidelity);
        self.max_fidelity = opt_sig12(self.max_fidelity);
        self.success_rate = opt_sig12(self.success_rate);
        self.expected_success_probability = opt_sig12(self.expected_success_probability);
        self.abort_rate = opt_sig12(self.abort_rate);
        self.decoy_error_rate = opt_sig12(self.decoy_error_rate);
        self.detection_rate = opt_sig12(self.detection_rate);
        self.mean_blind_fidelity = opt_sig12(self.mean_blind_fidelity);
        self.max_deviation_from_mixed = opt_sig12(self.max_deviation_from_mixed);
        self.max_pauli_infidelity = opt_sig12(self.max_pauli_infidelity);
        self
    }
}

/// Full scenario output with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub artifact_version: String,
    pub config: ScenarioConfig,
    pub config_hash: String,
    pub seed: u64,
    pub aggregates: Aggregates,
    pub trials: Vec<TrialSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_report: Option<TableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attack_study: Option<AttackStudyReport>,
}

/// Output encoding for [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Human,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "human" => Ok(ReportFormat::Human),
            other => Err(Error::invalid_config(
                "format",
                format!("unknown format `{other}`"),
            )),
        }
    }
}

/// Fixed CSV header; one row per trial, empty cells where a column does
/// not apply to the protocol.
pub const CSV_HEADER: &str =
    "trial,lambda_re,lambda_im,fidelity,succeeded,aborted,decoy_errors,decoys_matched,max_deviation,outcomes";

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_f64(v: &Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

/// Serialize a report with a stable byte layout.
pub fn emit_report(report: &Report, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut bytes =
                serde_json::to_vec_pretty(report).map_err(|e| Error::IoFailure(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        ReportFormat::Csv => {
            let mut out = String::new();
            out.push_str(CSV_HEADER);
            out.push('\n');
            for t in &report.trials {
                out.push_str(&format!(
                    "{},{:.12e},{:.12e},{},{},{},{},{},{},{}\n",
                    t.trial,
                    t.lambda_re,
                    t.lambda_im,
                    fmt_opt_f64(&t.fidelity),
                    fmt_opt(&t.succeeded),
                    fmt_opt(&t.aborted),
                    fmt_opt(&t.decoy_errors),
                    fmt_opt(&t.decoys_matched),
                    fmt_opt_f64(&t.max_deviation),
                    t.outcomes.clone().unwrap_or_default(),
                ));
            }
            Ok(out.into_bytes())
        }
        ReportFormat::Human => Ok(human_format(report).into_bytes()),
    }
}

fn push_line(out: &mut String, label: &str, value: impl std::fmt::Display) {
    out.push_str(&format!("  {label:<28} {value}\n"));
}

fn human_format(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "scenario: {} (schema v{}, artifact v{})\n",
        report.config.protocol.name(),
        report.schema_version,
        report.artifact_version
    ));
    push_line(&mut out, "seed", report.seed);
    push_line(&mut out, "config hash", &report.config_hash);
    push_line(&mut out, "trials", report.aggregates.trials);
    let agg = &report.aggregates;
    if let Some(v) = agg.mean_fidelity {
        push_line(&mut out, "mean fidelity", format!("{v:.12}"));
    }
    if let Some(v) = agg.min_fidelity {
        push_line(&mut out, "min fidelity", format!("{v:.12}"));
    }
    if let Some(v) = agg.success_rate {
        push_line(&mut out, "success rate", format!("{v:.6}"));
    }
    if let Some(v) = agg.expected_success_probability {
        push_line(&mut out, "expected success", format!("{v:.12}"));
    }
    if let Some(v) = agg.abort_rate {
        push_line(&mut out, "abort rate", format!("{v:.6}"));
    }
    if let Some(v) = agg.decoy_error_rate {
        push_line(&mut out, "decoy error rate", format!("{v:.6}"));
    }
    if let Some(v) = agg.detection_rate {
        push_line(&mut out, "detection rate", format!("{v:.6}"));
    }
    if let Some(v) = agg.mean_blind_fidelity {
        push_line(&mut out, "mean blind fidelity", format!("{v:.6}"));
    }
    if let Some(v) = agg.max_deviation_from_mixed {
        push_line(&mut out, "max deviation from I/2", format!("{v:.3e}"));
    }
    if let Some(table) = &report.table_report {
        out.push_str(&format!(
            "table verification: {} rows, {} failed ({} lambdas per row)\n",
            table.rows.len(),
            table.rows_failed,
            table.lambda_samples
        ));
        for row in &table.rows {
            let status = if row.passed { "pass" } else { "FAIL" };
            let mut line = format!(
                "  [{status}] {} row {:>2}: alice={} helper={} corr={} min_fid={:.12}",
                row.table.name(),
                row.row,
                row.alice,
                row.helper,
                row.correction,
                row.min_fidelity
            );
            if let Some(op) = row.two_qubit_op {
                line.push_str(&format!(" op={op}"));
            }
            if let Some(alt) = &row.alternate_op {
                line.push_str(&format!(
                    " | printed candidate {} min_fid={:.6} ({})",
                    alt.op,
                    alt.min_fidelity,
                    if alt.passed { "passes" } else { "fails" }
                ));
            }
            line.push('\n');
            out.push_str(&line);
        }
    }
    if let Some(study) = &report.attack_study {
        push_line(
            &mut out,
            "bare capture fidelity",
            format!("{:.12}", study.bare_hqis_fidelity),
        );
        push_line(
            &mut out,
            "blind fidelity (mean)",
            format!("{:.6}", study.mean_blind_fidelity),
        );
        push_line(
            &mut out,
            "blind fidelity (min/max)",
            format!(
                "{:.6}/{:.6}",
                study.min_blind_fidelity, study.max_blind_fidelity
            ),
        );
        push_line(
            &mut out,
            "detection rate",
            format!("{:.6}", study.detection_rate),
        );
    }
    out
}

/// Emit to a file or stdout.
pub fn write_report(
    report: &Report,
    format: ReportFormat,
    out: Option<&std::path::Path>,
) -> Result<()> {
    let bytes = emit_report(report, format)?;
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(())
}
