//! Reproducibility layer: scenario configuration, seeded Monte Carlo
//! batches, exhaustive table verification and report emission.
//!
//! Trials may run concurrently; each takes an independent random stream
//! derived from (seed, trial index) and the batch is canonicalized by
//! trial index before emission, so the report bytes depend only on
//! (config, seed).

mod config;
mod report;
mod scenario;
mod tables;

pub use config::{AdversaryKind, LambdaChoice, Protocol, ScenarioConfig};
pub use report::{
    emit_report, sig12, write_report, Aggregates, Report, ReportFormat, TrialSummary, CSV_HEADER,
    REPORT_SCHEMA_VERSION,
};
pub use scenario::{run_scenario, verdict, ScenarioVerdict};
pub use tables::{
    deterministic_lambdas, verify_tables, verify_tables_with, AlternateOpResult, TableId,
    TableReport, TableRowResult, ROW_TOL, TABLE_COEFFS,
};

#[cfg(test)]
mod tests;
