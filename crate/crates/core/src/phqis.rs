//! Probabilistic hierarchical information splitting over the non-maximally
//! entangled |Omega'> channel.
//!
//! The flow matches the perfect scheme until the receiver holds his
//! conditional state: amplitudes are then weighted by the channel
//! coefficients a and b, and no fixed single-qubit unitary restores the
//! secret. The receiver attaches an ancilla in |0>, applies the
//! disentangling unitary U (or U1 = U(X (x) I)) to (his qubit, ancilla),
//! and measures the ancilla: outcome 0 leaves a unit-fidelity recovery
//! after the tabulated Pauli correction, outcome 1 collapses his qubit to
//! the failure state |1>.
//!
//! Operator choice: on the low-cost (Diana) path the announced outcome
//! never moves amplitude between the receiver's basis states, so U applies
//! on every row -- the printed per-row intermediate states pin this down.
//! On the high-cost (Bob) path the joint phi outcomes flip which basis
//! state carries the a-weighted amplitude, so U serves psi announcements
//! and U1 serves phi announcements. The printed high-cost table deviates
//! from that rule on the (phi-, psi-) row; the rule wins there and the
//! table verifier reports both candidates for that row.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{omega_prime, secret_state, ChannelSpec, SecretParam};
use crate::error::{Error, Result};
use crate::hqis::{
    extract_receiver_ket, HelperOutcome, PauliCorrection, ProtocolTranscript, Receiver,
};
use crate::qcore::{BellOutcome, Bit, Ket, Unitary2, Unitary4, BELL_OUTCOMES};

/// Two-qubit disentangling operation applied to (receiver qubit, ancilla).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DisentangleOp {
    U,
    U1,
}

impl DisentangleOp {
    pub fn label(self) -> &'static str {
        match self {
            DisentangleOp::U => "U",
            DisentangleOp::U1 => "U1",
        }
    }

    pub fn matrix(self, a: f64, b: f64) -> Result<Unitary4> {
        match self {
            DisentangleOp::U => u_matrix(a, b),
            DisentangleOp::U1 => u1_matrix(a, b),
        }
    }
}

impl std::fmt::Display for DisentangleOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The disentangling unitary
///
/// ```text
///     [ b/a   s    0   0 ]
/// U = [  0    0    0  -1 ],   s = sqrt(1 - b^2/a^2),
///     [  0    0    1   0 ]
///     [  s  -b/a   0   0 ]
/// ```
///
/// acting on (receiver qubit, ancilla) with the first qubit as the high
/// index bit. Requires a >= b > 0 with a^2 + b^2 = 1, which makes both
/// entries real and the matrix unitary.
pub fn u_matrix(a: f64, b: f64) -> Result<Unitary4> {
    check_coeffs(a, b)?;
    let r = b / a;
    let s = (1.0 - r * r).max(0.0).sqrt();
    let z = Complex64::new(0.0, 0.0);
    let c = |x: f64| Complex64::new(x, 0.0);
    Unitary4::new([
        [c(r), c(s), z, z],
        [z, z, z, c(-1.0)],
        [z, z, c(1.0), z],
        [c(s), c(-r), z, z],
    ])
}

/// U1 = U * (X (x) I): the bit flip on the receiver qubit folded into the
/// disentangling step.
pub fn u1_matrix(a: f64, b: f64) -> Result<Unitary4> {
    let x_on_first = Unitary4::kron(&Unitary2::pauli_x(), &Unitary2::identity());
    Ok(u_matrix(a, b)?.mul(&x_on_first))
}

fn check_coeffs(a: f64, b: f64) -> Result<()> {
    let norm_sq = a * a + b * b;
    if (norm_sq - 1.0).abs() > crate::channels::ALGEBRAIC_TOL {
        return Err(Error::NotNormalized(norm_sq));
    }
    if b <= 0.0 || b > a {
        return Err(Error::DegenerateOrdering { a, b });
    }
    Ok(())
}

/// Operator for the high-cost path, per the announcement rule: U for psi
/// joint outcomes, U1 for phi joint outcomes.
pub fn operator_for_bob_path(cd: BellOutcome) -> DisentangleOp {
    match cd {
        BellOutcome::PsiPlus | BellOutcome::PsiMinus => DisentangleOp::U,
        BellOutcome::PhiPlus | BellOutcome::PhiMinus => DisentangleOp::U1,
    }
}

/// Operator for the low-cost path: always U (see module docs).
pub fn operator_for_diana_path() -> DisentangleOp {
    DisentangleOp::U
}

/// Low-cost probabilistic correction table (applied after ancilla outcome 0).
pub fn correction_for_diana_prob(alice: BellOutcome, bit: Bit) -> PauliCorrection {
    use BellOutcome::*;
    use PauliCorrection as P;
    match (alice, bit) {
        (PsiPlus, Bit::Zero) => P::I,
        (PsiMinus, Bit::Zero) => P::Z,
        (PhiPlus, Bit::Zero) => P::X,
        (PhiMinus, Bit::Zero) => P::IY,
        (PsiPlus, Bit::One) => P::Z,
        (PsiMinus, Bit::One) => P::I,
        (PhiPlus, Bit::One) => P::IY,
        (PhiMinus, Bit::One) => P::X,
    }
}

/// High-cost probabilistic correction table (applied after ancilla outcome 0).
pub fn correction_for_bob_prob(alice: BellOutcome, cd: BellOutcome) -> PauliCorrection {
    use BellOutcome::*;
    use PauliCorrection as P;
    match (alice, cd) {
        (PsiPlus, PsiPlus) => P::Z,
        (PsiPlus, PsiMinus) => P::I,
        (PsiMinus, PsiPlus) => P::I,
        (PsiMinus, PsiMinus) => P::Z,
        (PhiPlus, PsiPlus) => P::XZ,
        (PhiPlus, PsiMinus) => P::X,
        (PhiMinus, PsiPlus) => P::X,
        (PhiMinus, PsiMinus) => P::XZ,
        (PsiPlus, PhiPlus) => P::I,
        (PsiPlus, PhiMinus) => P::Z,
        (PsiMinus, PhiPlus) => P::Z,
        (PsiMinus, PhiMinus) => P::I,
        (PhiPlus, PhiPlus) => P::X,
        (PhiPlus, PhiMinus) => P::XZ,
        (PhiMinus, PhiPlus) => P::XZ,
        (PhiMinus, PhiMinus) => P::X,
    }
}

/// Rows of the low-cost probabilistic table in printed order.
pub fn prob_low_cost_table_rows() -> Vec<(BellOutcome, Bit, PauliCorrection)> {
    let mut rows = Vec::with_capacity(8);
    for bit in [Bit::Zero, Bit::One] {
        for alice in BELL_OUTCOMES {
            rows.push((alice, bit, correction_for_diana_prob(alice, bit)));
        }
    }
    rows
}

/// Rows of the high-cost probabilistic table in printed order, including
/// the printed two-qubit operator column. The (phi-, psi-) row prints U1
/// although the announcement rule (and unit fidelity) demand U there.
pub fn prob_high_cost_table_rows() -> Vec<(BellOutcome, BellOutcome, DisentangleOp, PauliCorrection)>
{
    use BellOutcome::*;
    let mut rows = Vec::with_capacity(16);
    for cd_group in [[PsiPlus, PsiMinus], [PhiPlus, PhiMinus]] {
        for alice in BELL_OUTCOMES {
            for cd in cd_group {
                let printed_op = if (alice, cd) == (PhiMinus, PsiMinus) {
                    DisentangleOp::U1
                } else {
                    operator_for_bob_path(cd)
                };
                rows.push((alice, cd, printed_op, correction_for_bob_prob(alice, cd)));
            }
        }
    }
    rows
}

/// The row whose printed operator disagrees with the announcement rule.
pub const PROB_HIGH_COST_DISCREPANT_ROW: (BellOutcome, BellOutcome) =
    (BellOutcome::PhiMinus, BellOutcome::PsiMinus);

/// Printed intermediate state of the low-cost table (after the two-qubit
/// op and ancilla outcome 0, before the Pauli correction).
pub fn prob_low_cost_expected_state(alice: BellOutcome, bit: Bit, lambda: SecretParam) -> Ket {
    use BellOutcome::*;
    let l = lambda.value();
    let one = Complex64::new(1.0, 0.0);
    let (c0, c1) = match (alice, bit) {
        (PsiPlus, Bit::Zero) => (one, l),
        (PsiMinus, Bit::Zero) => (one, -l),
        (PhiPlus, Bit::Zero) => (l, one),
        (PhiMinus, Bit::Zero) => (-l, one),
        (PsiPlus, Bit::One) => (one, -l),
        (PsiMinus, Bit::One) => (one, l),
        (PhiPlus, Bit::One) => (l, -one),
        (PhiMinus, Bit::One) => (-l, -one),
    };
    Ket::from_amplitudes(&[c0, c1]).expect("printed states have nonzero norm")
}

/// Printed intermediate state of the high-cost table.
pub fn prob_high_cost_expected_state(
    alice: BellOutcome,
    cd: BellOutcome,
    lambda: SecretParam,
) -> Ket {
    use BellOutcome::*;
    let l = lambda.value();
    let one = Complex64::new(1.0, 0.0);
    let (c0, c1) = match (alice, cd) {
        (PsiPlus, PsiPlus) => (one, -l),
        (PsiPlus, PsiMinus) => (one, l),
        (PsiMinus, PsiPlus) => (one, l),
        (PsiMinus, PsiMinus) => (one, -l),
        (PhiPlus, PsiPlus) => (l, -one),
        (PhiPlus, PsiMinus) => (l, one),
        (PhiMinus, PsiPlus) => (-l, -one),
        (PhiMinus, PsiMinus) => (-l, one),
        (PsiPlus, PhiPlus) => (one, l),
        (PsiPlus, PhiMinus) => (-one, l),
        (PsiMinus, PhiPlus) => (one, -l),
        (PsiMinus, PhiMinus) => (-one, -l),
        (PhiPlus, PhiPlus) => (l, one),
        (PhiPlus, PhiMinus) => (-l, one),
        (PhiMinus, PhiPlus) => (-l, one),
        (PhiMinus, PhiMinus) => (l, one),
    };
    Ket::from_amplitudes(&[c0, c1]).expect("printed states have nonzero norm")
}

/// Transcript of one probabilistic run; failure is a valid outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbTranscript {
    #[serde(flatten)]
    pub base: ProtocolTranscript,
    pub ancilla_outcome: Bit,
    pub two_qubit_op: DisentangleOp,
    pub succeeded: bool,
}

fn check_receiver(receiver: Receiver) -> Result<()> {
    if receiver == Receiver::Charlie {
        return Err(Error::InvalidHelper {
            helper: "charlie (probabilistic receivers are diana or bob)".to_string(),
        });
    }
    Ok(())
}

/// Run one probabilistic round with the default helper (Bob announces the
/// bit on the low-cost path).
pub fn run_phqis<R: Rng>(
    receiver: Receiver,
    a: f64,
    b: f64,
    lambda: SecretParam,
    rng: &mut R,
) -> Result<ProbTranscript> {
    run_phqis_with_helper(receiver, a, b, lambda, Receiver::Bob, rng)
}

/// Run one probabilistic round with an explicit low-cost helper (Bob or
/// Charlie; ignored on the high-cost path).
pub fn run_phqis_with_helper<R: Rng>(
    receiver: Receiver,
    a: f64,
    b: f64,
    lambda: SecretParam,
    helper: Receiver,
    rng: &mut R,
) -> Result<ProbTranscript> {
    check_receiver(receiver)?;
    let channel = ChannelSpec::OmegaPrime { a, b };
    let state = secret_state(lambda).tensor(&omega_prime(a, b)?)?;
    let (alice_outcome, state) = state.measure_bell((0, 1), rng)?;

    let mut bell_pairs = vec![((0usize, 1usize), alice_outcome)];
    let (helper_outcomes, op, state) = match receiver {
        Receiver::Diana => {
            if helper != Receiver::Bob && helper != Receiver::Charlie {
                return Err(Error::InvalidHelper {
                    helper: helper.name().to_string(),
                });
            }
            let (bit, state) = state.measure_computational(helper.position(), rng)?;
            (
                vec![(helper, HelperOutcome::Computational(bit))],
                operator_for_diana_path(),
                state,
            )
        }
        Receiver::Bob => {
            let (cd, state) = state.measure_bell((3, 4), rng)?;
            bell_pairs.push(((3, 4), cd));
            (
                vec![
                    (Receiver::Charlie, HelperOutcome::Joint(cd)),
                    (Receiver::Diana, HelperOutcome::Joint(cd)),
                ],
                operator_for_bob_path(cd),
                state,
            )
        }
        Receiver::Charlie => unreachable!("rejected above"),
    };

    // Attach the ancilla as the last qubit and disentangle.
    let receiver_pos = receiver.position();
    let state = state.tensor(&Ket::zero())?;
    let ancilla_pos = state.num_qubits() - 1;
    let state = state.apply_2q(&op.matrix(a, b)?, (receiver_pos, ancilla_pos))?;
    let (ancilla_outcome, state) = state.measure_computational(ancilla_pos, rng)?;

    let succeeded = ancilla_outcome == Bit::Zero;
    let (correction, state) = if succeeded {
        let correction = match receiver {
            Receiver::Diana => {
                let bit = match helper_outcomes[0].1 {
                    HelperOutcome::Computational(bit) => bit,
                    HelperOutcome::Joint(_) => unreachable!(),
                };
                correction_for_diana_prob(alice_outcome, bit)
            }
            Receiver::Bob => {
                let cd = match helper_outcomes[0].1 {
                    HelperOutcome::Joint(cd) => cd,
                    HelperOutcome::Computational(_) => unreachable!(),
                };
                correction_for_bob_prob(alice_outcome, cd)
            }
            Receiver::Charlie => unreachable!(),
        };
        (
            correction,
            state.apply_1q(&correction.matrix(), receiver_pos)?,
        )
    } else {
        (PauliCorrection::I, state)
    };

    let final_state = extract_receiver_ket(&state, &bell_pairs, receiver_pos);
    let fidelity = secret_state(lambda).fidelity_up_to_phase(&final_state)?;
    Ok(ProbTranscript {
        base: ProtocolTranscript {
            channel,
            lambda,
            receiver,
            alice_outcome,
            helper_outcomes,
            correction,
            final_state,
            fidelity,
            classical_bits_consumed_by_receiver: match receiver {
                Receiver::Diana => 3,
                _ => 4,
            },
            holders: vec![
                (crate::hqis::AgentQubit::B, Receiver::Bob),
                (crate::hqis::AgentQubit::C, Receiver::Charlie),
                (crate::hqis::AgentQubit::D, Receiver::Diana),
            ],
        },
        ancilla_outcome,
        two_qubit_op: op,
        succeeded,
    })
}

/// Exact overall success probability by exhaustive projective enumeration
/// over (Alice outcome x helper outcome x ancilla = 0). No sampling; this
/// is the oracle the Monte Carlo estimate is checked against.
pub fn success_probability_exact(
    receiver: Receiver,
    a: f64,
    b: f64,
    lambda: SecretParam,
) -> Result<f64> {
    check_receiver(receiver)?;
    let state = secret_state(lambda).tensor(&omega_prime(a, b)?)?;
    let receiver_pos = receiver.position();
    let mut total = 0.0;
    for alice in BELL_OUTCOMES {
        let (p_alice, post_alice) = match state.project_bell((0, 1), alice) {
            Ok(v) => v,
            Err(Error::ZeroProbabilityBranch) => continue,
            Err(e) => return Err(e),
        };
        let branches: Vec<(f64, Ket, DisentangleOp)> = match receiver {
            Receiver::Diana => {
                let mut v = Vec::new();
                for bit in [Bit::Zero, Bit::One] {
                    match post_alice.project_computational(Receiver::Bob.position(), bit) {
                        Ok((p, s)) => v.push((p, s, operator_for_diana_path())),
                        Err(Error::ZeroProbabilityBranch) => {}
                        Err(e) => return Err(e),
                    }
                }
                v
            }
            Receiver::Bob => {
                let mut v = Vec::new();
                for cd in BELL_OUTCOMES {
                    match post_alice.project_bell((3, 4), cd) {
                        Ok((p, s)) => v.push((p, s, operator_for_bob_path(cd))),
                        Err(Error::ZeroProbabilityBranch) => {}
                        Err(e) => return Err(e),
                    }
                }
                v
            }
            Receiver::Charlie => unreachable!("rejected above"),
        };
        for (p_helper, branch, op) in branches {
            let with_ancilla = branch.tensor(&Ket::zero())?;
            let ancilla_pos = with_ancilla.num_qubits() - 1;
            let rotated = with_ancilla.apply_2q(&op.matrix(a, b)?, (receiver_pos, ancilla_pos))?;
            let p_success = match rotated.project_computational(ancilla_pos, Bit::Zero) {
                Ok((p, _)) => p,
                Err(Error::ZeroProbabilityBranch) => 0.0,
                Err(e) => return Err(e),
            };
            total += p_alice * p_helper * p_success;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests;
