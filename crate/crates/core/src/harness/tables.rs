//! Exhaustive, sampling-free verification of the four correction tables.
//!
//! Every row is reached by deterministic projection (never by Born
//! sampling) and checked at unit fidelity for a batch of random secret
//! parameters. Probabilistic rows additionally check the post-ancilla
//! intermediate state against the tabulated column, up to global phase.
//! The one high-cost probabilistic row whose printed operator disagrees
//! with the announcement rule is reported with both candidates.

use serde::{Deserialize, Serialize};

use crate::channels::{ChannelSpec, SecretParam};
use crate::error::Result;
use crate::hqis::{self, extract_receiver_ket, PauliCorrection, Receiver};
use crate::phqis::{self, DisentangleOp, PROB_HIGH_COST_DISCREPANT_ROW};
use crate::qcore::{BellOutcome, Bit, Ket};
use crate::rng::{random_lambda, trial_rng};

/// Fidelity below 1 - ROW_TOL fails a row.
pub const ROW_TOL: f64 = 1e-12;

/// Channel coefficients the probabilistic tables are verified at.
pub const TABLE_COEFFS: (f64, f64) = (0.8, 0.6);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableId {
    /// Perfect scheme, single-bit helper (8 rows).
    HqisLowCost,
    /// Perfect scheme, joint-measurement helpers (16 rows).
    HqisHighCost,
    /// Probabilistic scheme, single-bit helper (8 rows).
    PhqisLowCost,
    /// Probabilistic scheme, joint-measurement helpers (16 rows).
    PhqisHighCost,
}

impl TableId {
    pub fn name(self) -> &'static str {
        match self {
            TableId::HqisLowCost => "hqis-low-cost",
            TableId::HqisHighCost => "hqis-high-cost",
            TableId::PhqisLowCost => "phqis-low-cost",
            TableId::PhqisHighCost => "phqis-high-cost",
        }
    }
}

/// Result of re-running a row with the alternate two-qubit operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternateOpResult {
    pub op: DisentangleOp,
    pub min_fidelity: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRowResult {
    pub table: TableId,
    /// 1-based row number in printed order.
    pub row: usize,
    pub alice: BellOutcome,
    /// Helper announcement: a bit ("0"/"1") or a Bell label.
    pub helper: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_qubit_op: Option<DisentangleOp>,
    pub correction: PauliCorrection,
    pub min_fidelity: f64,
    /// Probabilistic rows: does the post-ancilla state match the tabulated
    /// column up to global phase for every sampled lambda?
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_matches: Option<bool>,
    pub passed: bool,
    /// Present only on the row whose printed operator conflicts with the
    /// announcement rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate_op: Option<AlternateOpResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub lambda_samples: usize,
    pub coefficients: (f64, f64),
    pub rows: Vec<TableRowResult>,
    pub rows_failed: u32,
    pub all_passed: bool,
}

fn lambda_batch(seed: u64, count: usize) -> Vec<SecretParam> {
    let mut rng = trial_rng(seed, u64::MAX);
    (0..count)
        .map(|_| SecretParam::new(random_lambda(&mut rng)).expect("finite draw"))
        .collect()
}

/// Fidelity of one perfect low-cost row under one lambda, by projection.
fn hqis_low_cost_fidelity(alice: BellOutcome, bit: Bit, lambda: SecretParam) -> Result<f64> {
    let state = hqis::compose(&ChannelSpec::Omega, lambda)?;
    let (_, state) = state.project_bell((0, 1), alice)?;
    let (_, state) = state.project_computational(Receiver::Bob.position(), bit)?;
    let correction = hqis::correction_for_diana(alice, bit);
    let state = state.apply_1q(&correction.matrix(), Receiver::Diana.position())?;
    let receiver = extract_receiver_ket(&state, &[((0, 1), alice)], Receiver::Diana.position());
    lambda.state().fidelity_up_to_phase(&receiver)
}

/// Fidelity of one perfect high-cost row under one lambda, by projection.
fn hqis_high_cost_fidelity(
    alice: BellOutcome,
    cd: BellOutcome,
    lambda: SecretParam,
) -> Result<f64> {
    let state = hqis::compose(&ChannelSpec::Omega, lambda)?;
    let (_, state) = state.project_bell((0, 1), alice)?;
    let (_, state) = state.project_bell((3, 4), cd)?;
    let correction = hqis::correction_for_bob(alice, cd);
    let state = state.apply_1q(&correction.matrix(), Receiver::Bob.position())?;
    let receiver = extract_receiver_ket(
        &state,
        &[((0, 1), alice), ((3, 4), cd)],
        Receiver::Bob.position(),
    );
    lambda.state().fidelity_up_to_phase(&receiver)
}

/// One probabilistic row by projection: returns (post-ancilla state matches
/// the tabulated column, fidelity after correction).
fn phqis_row_outcome(
    alice: BellOutcome,
    helper: PhqisHelper,
    op: DisentangleOp,
    correction: PauliCorrection,
    expected_intermediate: &Ket,
    lambda: SecretParam,
) -> Result<(bool, f64)> {
    let (a, b) = TABLE_COEFFS;
    let state = lambda
        .state()
        .tensor(&crate::channels::omega_prime(a, b)?)?;
    let (_, state) = state.project_bell((0, 1), alice)?;
    let (receiver_pos, state, pairs): (usize, Ket, CollapsedPairs) = match helper {
        PhqisHelper::Bit(bit) => {
            let (_, s) = state.project_computational(Receiver::Bob.position(), bit)?;
            (Receiver::Diana.position(), s, vec![((0, 1), alice)])
        }
        PhqisHelper::Joint(cd) => {
            let (_, s) = state.project_bell((3, 4), cd)?;
            (
                Receiver::Bob.position(),
                s,
                vec![((0, 1), alice), ((3, 4), cd)],
            )
        }
    };
    let state = state.tensor(&Ket::zero())?;
    let ancilla = state.num_qubits() - 1;
    let state = state.apply_2q(&op.matrix(a, b)?, (receiver_pos, ancilla))?;
    let (_, state) = state.project_computational(ancilla, Bit::Zero)?;

    let state = {
        let bit_collapsed = state
            .collapsed_bit(ancilla)
            .expect("ancilla projected to zero");
        state.factor_out_qubit(ancilla, bit_collapsed)
    };
    let intermediate = extract_receiver_ket(&state, &pairs, receiver_pos);
    let matches = expected_intermediate.fidelity_up_to_phase(&intermediate)? > 1.0 - ROW_TOL;

    let corrected = state.apply_1q(&correction.matrix(), receiver_pos)?;
    let receiver = extract_receiver_ket(&corrected, &pairs, receiver_pos);
    let fidelity = lambda.state().fidelity_up_to_phase(&receiver)?;
    Ok((matches, fidelity))
}

enum PhqisHelper {
    Bit(Bit),
    Joint(BellOutcome),
}

type CollapsedPairs = Vec<((usize, usize), BellOutcome)>;

/// Enumerate every row of all four tables, 25 random lambdas per row.
pub fn verify_tables(seed: u64) -> Result<TableReport> {
    verify_tables_with(seed, 25)
}

pub fn verify_tables_with(seed: u64, lambda_samples: usize) -> Result<TableReport> {
    let lambdas = lambda_batch(seed, lambda_samples);
    let mut rows = Vec::new();

    for (i, (alice, bit, correction)) in hqis::low_cost_table_rows().into_iter().enumerate() {
        let mut min_fid = f64::INFINITY;
        for &lambda in &lambdas {
            min_fid = min_fid.min(hqis_low_cost_fidelity(alice, bit, lambda)?);
        }
        rows.push(TableRowResult {
            table: TableId::HqisLowCost,
            row: i + 1,
            alice,
            helper: bit.to_string(),
            two_qubit_op: None,
            correction,
            min_fidelity: min_fid,
            state_matches: None,
            passed: min_fid > 1.0 - ROW_TOL,
            alternate_op: None,
        });
    }

    for (i, (alice, cd, correction)) in hqis::high_cost_table_rows().into_iter().enumerate() {
        let mut min_fid = f64::INFINITY;
        for &lambda in &lambdas {
            min_fid = min_fid.min(hqis_high_cost_fidelity(alice, cd, lambda)?);
        }
        rows.push(TableRowResult {
            table: TableId::HqisHighCost,
            row: i + 1,
            alice,
            helper: cd.label().to_string(),
            two_qubit_op: None,
            correction,
            min_fidelity: min_fid,
            state_matches: None,
            passed: min_fid > 1.0 - ROW_TOL,
            alternate_op: None,
        });
    }

    for (i, (alice, bit, correction)) in phqis::prob_low_cost_table_rows().into_iter().enumerate() {
        let op = phqis::operator_for_diana_path();
        let mut min_fid = f64::INFINITY;
        let mut all_match = true;
        for &lambda in &lambdas {
            let expected = phqis::prob_low_cost_expected_state(alice, bit, lambda);
            let (matches, fid) = phqis_row_outcome(
                alice,
                PhqisHelper::Bit(bit),
                op,
                correction,
                &expected,
                lambda,
            )?;
            all_match &= matches;
            min_fid = min_fid.min(fid);
        }
        rows.push(TableRowResult {
            table: TableId::PhqisLowCost,
            row: i + 1,
            alice,
            helper: bit.to_string(),
            two_qubit_op: Some(op),
            correction,
            min_fidelity: min_fid,
            state_matches: Some(all_match),
            passed: min_fid > 1.0 - ROW_TOL && all_match,
            alternate_op: None,
        });
    }

    for (i, (alice, cd, printed_op, correction)) in
        phqis::prob_high_cost_table_rows().into_iter().enumerate()
    {
        let rule_op = phqis::operator_for_bob_path(cd);
        let mut min_fid = f64::INFINITY;
        let mut all_match = true;
        for &lambda in &lambdas {
            let expected = phqis::prob_high_cost_expected_state(alice, cd, lambda);
            let (matches, fid) = phqis_row_outcome(
                alice,
                PhqisHelper::Joint(cd),
                rule_op,
                correction,
                &expected,
                lambda,
            )?;
            all_match &= matches;
            min_fid = min_fid.min(fid);
        }
        // The printed operator column disagrees with the announcement rule
        // on one row; run the printed candidate there as well.
        let alternate_op = if (alice, cd) == PROB_HIGH_COST_DISCREPANT_ROW {
            debug_assert_ne!(printed_op, rule_op);
            let mut alt_min = f64::INFINITY;
            for &lambda in &lambdas {
                let expected = phqis::prob_high_cost_expected_state(alice, cd, lambda);
                let (_, fid) = phqis_row_outcome(
                    alice,
                    PhqisHelper::Joint(cd),
                    printed_op,
                    correction,
                    &expected,
                    lambda,
                )?;
                alt_min = alt_min.min(fid);
            }
            Some(AlternateOpResult {
                op: printed_op,
                min_fidelity: alt_min,
                passed: alt_min > 1.0 - ROW_TOL,
            })
        } else {
            None
        };
        rows.push(TableRowResult {
            table: TableId::PhqisHighCost,
            row: i + 1,
            alice,
            helper: cd.label().to_string(),
            two_qubit_op: Some(rule_op),
            correction,
            min_fidelity: min_fid,
            state_matches: Some(all_match),
            passed: min_fid > 1.0 - ROW_TOL && all_match,
            alternate_op,
        });
    }

    let rows_failed = rows.iter().filter(|r| !r.passed).count() as u32;
    Ok(TableReport {
        lambda_samples,
        coefficients: TABLE_COEFFS,
        rows,
        rows_failed,
        all_passed: rows_failed == 0,
    })
}

/// Deterministic lambda batch shared by callers that need "k random
/// lambdas" reproducibly.
pub fn deterministic_lambdas(seed: u64, count: usize) -> Vec<SecretParam> {
    lambda_batch(seed, count)
}
