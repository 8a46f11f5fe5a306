//! Perfect hierarchical information-splitting engines over the maximally
//! entangled |Omega> and |C4> channels.
//!
//! Register layout for one protocol run is [S, A, B, C, D] (indices 0..4):
//! the secret qubit S and Alice's channel qubit A stay with Alice, B/C/D sit
//! with Bob, Charlie and Diana. Alice Bell-measures (S, A); the remaining
//! agents either announce a computational bit (low-cost recovery) or a joint
//! Bell outcome (high-cost recovery), and the receiver applies a tabulated
//! Pauli correction.
//!
//! Under |Omega> Diana is the low-cost receiver; under |C4> the roles of
//! Bob and Diana are exactly reversed, so the same two lookup tables drive
//! both channels with relabeled parties.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{secret_state, ChannelSpec, SecretParam};
use crate::error::{Error, Result};
use crate::qcore::{BellOutcome, Bit, DensityMatrix2, Ket, Unitary2, BELL_OUTCOMES};

/// Tolerance for exact algebraic identities in protocol checks.
pub const PROTOCOL_TOL: f64 = 1e-12;

/// Receiving/assisting agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Receiver {
    Bob,
    Charlie,
    Diana,
}

impl Receiver {
    /// Position of this agent's channel qubit in the [S, A, B, C, D] register.
    pub fn position(self) -> usize {
        match self {
            Receiver::Bob => 2,
            Receiver::Charlie => 3,
            Receiver::Diana => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Receiver::Bob => "bob",
            Receiver::Charlie => "charlie",
            Receiver::Diana => "diana",
        }
    }
}

impl std::fmt::Display for Receiver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Agent-held channel qubit label, for transcript annotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgentQubit {
    B,
    C,
    D,
}

impl AgentQubit {
    pub fn position(self) -> usize {
        match self {
            AgentQubit::B => 2,
            AgentQubit::C => 3,
            AgentQubit::D => 4,
        }
    }

    pub fn owner(self) -> Receiver {
        match self {
            AgentQubit::B => Receiver::Bob,
            AgentQubit::C => Receiver::Charlie,
            AgentQubit::D => Receiver::Diana,
        }
    }
}

/// Reconstruction operator announced by the lookup tables.
///
/// `XZ` means the matrix product X*Z (Z first, then X); `IY` is i*Y, which
/// equals X*Z up to overall sign but is stored as its own matrix exactly as
/// named.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum PauliCorrection {
    I,
    X,
    Z,
    XZ,
    IY,
}

impl PauliCorrection {
    pub fn matrix(self) -> Unitary2 {
        match self {
            PauliCorrection::I => Unitary2::identity(),
            PauliCorrection::X => Unitary2::pauli_x(),
            PauliCorrection::Z => Unitary2::pauli_z(),
            PauliCorrection::XZ => Unitary2::xz(),
            PauliCorrection::IY => Unitary2::i_y(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PauliCorrection::I => "I",
            PauliCorrection::X => "X",
            PauliCorrection::Z => "Z",
            PauliCorrection::XZ => "XZ",
            PauliCorrection::IY => "iY",
        }
    }
}

impl std::fmt::Display for PauliCorrection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// What an assisting party announced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HelperOutcome {
    Computational(Bit),
    Joint(BellOutcome),
}

/// Full record of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub channel: ChannelSpec,
    pub lambda: SecretParam,
    pub receiver: Receiver,
    pub alice_outcome: BellOutcome,
    pub helper_outcomes: Vec<(Receiver, HelperOutcome)>,
    pub correction: PauliCorrection,
    pub final_state: Ket,
    pub fidelity: f64,
    /// 2 bits for Alice's Bell outcome plus 1 (helper bit) or 2 (joint Bell
    /// outcome) -- the machine-checkable form of the hierarchy.
    pub classical_bits_consumed_by_receiver: u32,
    /// Which party holds which channel qubit (annotation only; a dishonest
    /// holder owns all three).
    pub holders: Vec<(AgentQubit, Receiver)>,
}

/// Low-cost correction table: (Alice's Bell outcome, the correlated agents'
/// computational bit) -> receiver operation. The two assisting agents'
/// outcomes are always equal, so one announced bit suffices.
pub fn correction_for_diana(alice: BellOutcome, bc: Bit) -> PauliCorrection {
    use BellOutcome::*;
    use PauliCorrection as P;
    match (alice, bc) {
        (PsiPlus, Bit::Zero) => P::I,
        (PsiPlus, Bit::One) => P::Z,
        (PsiMinus, Bit::Zero) => P::Z,
        (PsiMinus, Bit::One) => P::I,
        (PhiPlus, Bit::Zero) => P::X,
        (PhiPlus, Bit::One) => P::XZ,
        (PhiMinus, Bit::Zero) => P::XZ,
        (PhiMinus, Bit::One) => P::X,
    }
}

/// High-cost correction table: (Alice's Bell outcome, the joint Bell outcome
/// of the other two agents) -> receiver operation.
pub fn correction_for_bob(alice: BellOutcome, cd: BellOutcome) -> PauliCorrection {
    use BellOutcome::*;
    use PauliCorrection as P;
    match (alice, cd) {
        (PsiPlus, PsiPlus) => P::Z,
        (PsiPlus, PsiMinus) => P::I,
        (PsiPlus, PhiPlus) => P::X,
        (PsiPlus, PhiMinus) => P::XZ,
        (PsiMinus, PsiPlus) => P::I,
        (PsiMinus, PsiMinus) => P::Z,
        (PsiMinus, PhiPlus) => P::XZ,
        (PsiMinus, PhiMinus) => P::X,
        (PhiPlus, PhiPlus) => P::I,
        (PhiPlus, PhiMinus) => P::Z,
        (PhiPlus, PsiPlus) => P::XZ,
        (PhiPlus, PsiMinus) => P::X,
        (PhiMinus, PhiPlus) => P::Z,
        (PhiMinus, PhiMinus) => P::I,
        (PhiMinus, PsiPlus) => P::X,
        (PhiMinus, PsiMinus) => P::XZ,
    }
}

/// Rows of the low-cost table in printed order, for table verification.
pub fn low_cost_table_rows() -> Vec<(BellOutcome, Bit, PauliCorrection)> {
    let mut rows = Vec::with_capacity(8);
    for alice in BELL_OUTCOMES {
        for bit in [Bit::Zero, Bit::One] {
            rows.push((alice, bit, correction_for_diana(alice, bit)));
        }
    }
    rows
}

/// Rows of the high-cost table in printed order (psi-announcement rows list
/// psi pair outcomes first, phi-announcement rows list phi outcomes first).
pub fn high_cost_table_rows() -> Vec<(BellOutcome, BellOutcome, PauliCorrection)> {
    use BellOutcome::*;
    let mut rows = Vec::with_capacity(16);
    for alice in BELL_OUTCOMES {
        let pair_order = match alice {
            PsiPlus | PsiMinus => [PsiPlus, PsiMinus, PhiPlus, PhiMinus],
            PhiPlus | PhiMinus => [PhiPlus, PhiMinus, PsiPlus, PsiMinus],
        };
        for cd in pair_order {
            rows.push((alice, cd, correction_for_bob(alice, cd)));
        }
    }
    rows
}

/// How a given receiver reconstructs over a given maximal channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RecoveryPath {
    /// One correlated agent announces a computational bit.
    LowCost { helper: Receiver },
    /// The other two agents jointly Bell-measure the ordered qubit pair.
    HighCost { pair: (AgentQubit, AgentQubit) },
}

/// The receiver that reconstructs via the joint-measurement table on this
/// channel (Bob for |Omega>, Diana for |C4>).
pub fn high_cost_receiver(channel: &ChannelSpec) -> Result<Receiver> {
    match channel {
        ChannelSpec::Omega => Ok(Receiver::Bob),
        ChannelSpec::Cluster4 => Ok(Receiver::Diana),
        other => Err(Error::UnsupportedChannelForPerfectPath(
            other.name().to_string(),
        )),
    }
}

/// The receiver that reconstructs from a single announced bit on this
/// channel (Diana for |Omega>, Bob for |C4>).
pub fn low_cost_receiver(channel: &ChannelSpec) -> Result<Receiver> {
    match channel {
        ChannelSpec::Omega => Ok(Receiver::Diana),
        ChannelSpec::Cluster4 => Ok(Receiver::Bob),
        other => Err(Error::UnsupportedChannelForPerfectPath(
            other.name().to_string(),
        )),
    }
}

pub(crate) fn resolve_path(
    channel: &ChannelSpec,
    receiver: Receiver,
    helper: Option<Receiver>,
) -> Result<RecoveryPath> {
    match channel {
        ChannelSpec::Omega => match receiver {
            Receiver::Diana => {
                let helper = helper.unwrap_or(Receiver::Bob);
                if helper != Receiver::Bob && helper != Receiver::Charlie {
                    return Err(Error::InvalidHelper {
                        helper: helper.name().to_string(),
                    });
                }
                Ok(RecoveryPath::LowCost { helper })
            }
            Receiver::Bob => no_helper(
                helper,
                RecoveryPath::HighCost {
                    pair: (AgentQubit::C, AgentQubit::D),
                },
            ),
            // Bob and Charlie are equally powerful: Charlie reconstructs via
            // the high-cost table with B and C relabeled.
            Receiver::Charlie => no_helper(
                helper,
                RecoveryPath::HighCost {
                    pair: (AgentQubit::B, AgentQubit::D),
                },
            ),
        },
        ChannelSpec::Cluster4 => match receiver {
            Receiver::Bob => {
                let helper = helper.unwrap_or(Receiver::Diana);
                if helper != Receiver::Diana && helper != Receiver::Charlie {
                    return Err(Error::InvalidHelper {
                        helper: helper.name().to_string(),
                    });
                }
                Ok(RecoveryPath::LowCost { helper })
            }
            Receiver::Diana => no_helper(
                helper,
                RecoveryPath::HighCost {
                    pair: (AgentQubit::C, AgentQubit::B),
                },
            ),
            Receiver::Charlie => no_helper(
                helper,
                RecoveryPath::HighCost {
                    pair: (AgentQubit::D, AgentQubit::B),
                },
            ),
        },
        other => Err(Error::UnsupportedChannelForPerfectPath(
            other.name().to_string(),
        )),
    }
}

fn no_helper(helper: Option<Receiver>, path: RecoveryPath) -> Result<RecoveryPath> {
    match helper {
        Some(h) => Err(Error::InvalidHelper {
            helper: h.name().to_string(),
        }),
        None => Ok(path),
    }
}

/// Compose the secret with the channel: |psi_s> (x) |psi_c>, register
/// [S, A, B, C, D].
pub fn compose(channel: &ChannelSpec, lambda: SecretParam) -> Result<Ket> {
    secret_state(lambda).tensor(&channel.ket()?)
}

/// Pull the receiver's single qubit out of a fully collapsed register:
/// factor out the listed Bell pairs, then every remaining collapsed qubit.
pub(crate) fn extract_receiver_ket(
    state: &Ket,
    bell_pairs: &[((usize, usize), BellOutcome)],
    receiver_pos: usize,
) -> Ket {
    let mut current = state.clone();
    // labels[i] = original position of the i-th qubit still in the register
    let mut labels: Vec<usize> = (0..state.num_qubits()).collect();
    for &((p0, p1), outcome) in bell_pairs {
        let t0 = labels.iter().position(|&l| l == p0).expect("pair present");
        let t1 = labels.iter().position(|&l| l == p1).expect("pair present");
        current = current.factor_out_pair((t0, t1), &outcome.pair_amps());
        labels.retain(|&l| l != p0 && l != p1);
    }
    while labels.len() > 1 {
        let (idx, _) = labels
            .iter()
            .enumerate()
            .find(|&(_, &l)| l != receiver_pos)
            .expect("non-receiver qubit present");
        let bit = current
            .collapsed_bit(idx)
            .expect("all non-receiver qubits are collapsed after the protocol");
        current = current.factor_out_qubit(idx, bit);
        labels.remove(idx);
    }
    assert_eq!(labels, [receiver_pos]);
    current
}

fn default_holders() -> Vec<(AgentQubit, Receiver)> {
    vec![
        (AgentQubit::B, Receiver::Bob),
        (AgentQubit::C, Receiver::Charlie),
        (AgentQubit::D, Receiver::Diana),
    ]
}

fn run_path<R: Rng>(
    channel: &ChannelSpec,
    receiver: Receiver,
    path: RecoveryPath,
    lambda: SecretParam,
    holders: Vec<(AgentQubit, Receiver)>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let state = compose(channel, lambda)?;
    let (alice_outcome, state) = state.measure_bell((0, 1), rng)?;

    let mut bell_pairs = vec![((0usize, 1usize), alice_outcome)];
    let (helper_outcomes, correction, state, bits) = match path {
        RecoveryPath::LowCost { helper } => {
            let (bit, state) = state.measure_computational(helper.position(), rng)?;
            let correction = correction_for_diana(alice_outcome, bit);
            let state = state.apply_1q(&correction.matrix(), receiver.position())?;
            (
                vec![(helper, HelperOutcome::Computational(bit))],
                correction,
                state,
                3,
            )
        }
        RecoveryPath::HighCost { pair } => {
            let targets = (pair.0.position(), pair.1.position());
            let (joint, state) = state.measure_bell(targets, rng)?;
            bell_pairs.push((targets, joint));
            let correction = correction_for_bob(alice_outcome, joint);
            let state = state.apply_1q(&correction.matrix(), receiver.position())?;
            let announcers: Vec<(Receiver, HelperOutcome)> = vec![
                (pair.0.owner(), HelperOutcome::Joint(joint)),
                (pair.1.owner(), HelperOutcome::Joint(joint)),
            ];
            (announcers, correction, state, 4)
        }
    };

    let final_state = extract_receiver_ket(&state, &bell_pairs, receiver.position());
    let fidelity = secret_state(lambda).fidelity_up_to_phase(&final_state)?;
    Ok(ProtocolTranscript {
        channel: channel.clone(),
        lambda,
        receiver,
        alice_outcome,
        helper_outcomes,
        correction,
        final_state,
        fidelity,
        classical_bits_consumed_by_receiver: bits,
        holders,
    })
}

/// Run one perfect HQIS round with the default helper choice (the low-cost
/// path takes its bit from Bob under |Omega> and Diana under |C4>).
pub fn run_hqis<R: Rng>(
    channel: &ChannelSpec,
    receiver: Receiver,
    lambda: SecretParam,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let path = resolve_path(channel, receiver, None)?;
    run_path(channel, receiver, path, lambda, default_holders(), rng)
}

/// Run one perfect HQIS round with an explicit helper on the low-cost path.
pub fn run_hqis_with_helper<R: Rng>(
    channel: &ChannelSpec,
    receiver: Receiver,
    lambda: SecretParam,
    helper: Receiver,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let path = resolve_path(channel, receiver, Some(helper))?;
    run_path(channel, receiver, path, lambda, default_holders(), rng)
}

/// Simulate the dishonest high-cost receiver holding all three agent
/// qubits: he performs the joint Bell measurement himself and recovers the
/// secret with no cooperation. This is the attack the secret-sharing layer
/// is built to detect.
pub fn dishonest_receiver_attack<R: Rng>(
    channel: &ChannelSpec,
    lambda: SecretParam,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let attacker = high_cost_receiver(channel)?;
    let path = resolve_path(channel, attacker, None)?;
    let holders = vec![
        (AgentQubit::B, attacker),
        (AgentQubit::C, attacker),
        (AgentQubit::D, attacker),
    ];
    let mut transcript = run_path(channel, attacker, path, lambda, holders, rng)?;
    // The attacker consumes only Alice's two announced bits.
    transcript.classical_bits_consumed_by_receiver = 2;
    Ok(transcript)
}

/// Reduced density matrix of one post-measurement branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncryptionBranch {
    pub alice_outcome: BellOutcome,
    pub probability: f64,
    pub reduced: DensityMatrix2,
    pub deviation_from_mixed: f64,
}

/// One conditional branch of the high-cost receiver's state, compared
/// against a fixed Pauli image of the secret.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliBranch {
    pub pair_outcome: BellOutcome,
    pub probability: f64,
    pub operator: PauliCorrection,
    pub fidelity: f64,
}

/// Result of the quantum-encryption property check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncryptionReport {
    pub channel: ChannelSpec,
    pub lambda: SecretParam,
    pub branches: Vec<EncryptionBranch>,
    pub max_deviation_from_mixed: f64,
    pub pauli_branches: Vec<PauliBranch>,
    pub max_pauli_infidelity: f64,
    pub max_probability_error: f64,
    pub passed: bool,
}

/// Check the "quantum encryption" property: after Alice's measurement the
/// high-cost receiver's reduced state is I/2 for every outcome, and his
/// four conditional states (given the joint outcome of the other agents,
/// with Alice announcing psi+) are {Z, I, X, iY}|psi_s> up to phase, each
/// with branch probability 1/4.
pub fn verify_encryption(channel: &ChannelSpec, lambda: SecretParam) -> Result<EncryptionReport> {
    let receiver = high_cost_receiver(channel)?;
    let path = resolve_path(channel, receiver, None)?;
    let pair = match path {
        RecoveryPath::HighCost { pair } => pair,
        RecoveryPath::LowCost { .. } => unreachable!("high-cost receiver uses the joint path"),
    };
    let state = compose(channel, lambda)?;

    let mut branches = Vec::with_capacity(4);
    let mut max_dev: f64 = 0.0;
    let mut max_prob_err: f64 = 0.0;
    for alice in BELL_OUTCOMES {
        let (p, post) = state.project_bell((0, 1), alice)?;
        let reduced = post.reduced_density_1q(receiver.position())?;
        let deviation = reduced.deviation_from_mixed();
        max_dev = max_dev.max(deviation);
        max_prob_err = max_prob_err.max((p - 0.25).abs());
        branches.push(EncryptionBranch {
            alice_outcome: alice,
            probability: p,
            reduced,
            deviation_from_mixed: deviation,
        });
    }

    // Conditional decomposition for Alice announcing psi+.
    let (_, post) = state.project_bell((0, 1), BellOutcome::PsiPlus)?;
    let targets = (pair.0.position(), pair.1.position());
    let secret = secret_state(lambda);
    let mut pauli_branches = Vec::with_capacity(4);
    let mut max_infidelity: f64 = 0.0;
    for pair_outcome in BELL_OUTCOMES {
        let operator = match pair_outcome {
            BellOutcome::PsiPlus => PauliCorrection::Z,
            BellOutcome::PsiMinus => PauliCorrection::I,
            BellOutcome::PhiPlus => PauliCorrection::X,
            BellOutcome::PhiMinus => PauliCorrection::IY,
        };
        let (p, collapsed) = post.project_bell(targets, pair_outcome)?;
        let receiver_state = extract_receiver_ket(
            &collapsed,
            &[((0, 1), BellOutcome::PsiPlus), (targets, pair_outcome)],
            receiver.position(),
        );
        let expected = secret.apply_1q(&operator.matrix(), 0)?;
        let fidelity = expected.fidelity_up_to_phase(&receiver_state)?;
        max_infidelity = max_infidelity.max(1.0 - fidelity);
        max_prob_err = max_prob_err.max((p - 0.25).abs());
        pauli_branches.push(PauliBranch {
            pair_outcome,
            probability: p,
            operator,
            fidelity,
        });
    }

    let passed =
        max_dev < PROTOCOL_TOL && max_infidelity < PROTOCOL_TOL && max_prob_err < PROTOCOL_TOL;
    Ok(EncryptionReport {
        channel: channel.clone(),
        lambda,
        branches,
        max_deviation_from_mixed: max_dev,
        pauli_branches,
        max_pauli_infidelity: max_infidelity,
        max_probability_error: max_prob_err,
        passed,
    })
}

/// Pre-correction receiver state on the high-cost path of a maximal
/// channel, as a closed form in lambda: the branch the receiver holds once
/// Alice announced `alice` and the other two agents announced
/// `pair_outcome`. Signs follow the channel decomposition exactly.
pub fn high_cost_branch_state(
    alice: BellOutcome,
    pair_outcome: BellOutcome,
    lambda: SecretParam,
) -> Ket {
    use num_complex::Complex64;
    use BellOutcome::*;
    let l = lambda.value();
    let one = Complex64::new(1.0, 0.0);
    let (c0, c1) = match (alice, pair_outcome) {
        (PsiPlus, PsiPlus) => (one, -l),
        (PsiPlus, PsiMinus) => (one, l),
        (PsiPlus, PhiPlus) => (l, one),
        (PsiPlus, PhiMinus) => (l, -one),
        (PsiMinus, PsiPlus) => (one, l),
        (PsiMinus, PsiMinus) => (one, -l),
        (PsiMinus, PhiPlus) => (-l, one),
        (PsiMinus, PhiMinus) => (-l, -one),
        (PhiPlus, PhiPlus) => (one, l),
        (PhiPlus, PhiMinus) => (one, -l),
        (PhiPlus, PsiPlus) => (l, -one),
        (PhiPlus, PsiMinus) => (l, one),
        (PhiMinus, PhiPlus) => (one, -l),
        (PhiMinus, PhiMinus) => (one, l),
        (PhiMinus, PsiPlus) => (-l, -one),
        (PhiMinus, PsiMinus) => (-l, one),
    };
    Ket::from_amplitudes(&[c0, c1]).expect("branch states have nonzero norm")
}

/// Check the channel symmetry: for every Alice outcome, the post-measurement
/// state over |Omega> with agent order (B, C, D) equals the state over |C4>
/// with order (D, C, B), amplitude by amplitude.
pub fn role_swap_check(lambda: SecretParam) -> Result<bool> {
    let omega_state = compose(&ChannelSpec::Omega, lambda)?;
    let cluster_state = compose(&ChannelSpec::Cluster4, lambda)?;
    for alice in BELL_OUTCOMES {
        let (_, post_omega) = omega_state.project_bell((0, 1), alice)?;
        let (_, post_cluster) = cluster_state.project_bell((0, 1), alice)?;
        // Reading the cluster register as (S, A, D, C, B).
        let swapped = post_cluster.permute_qubits(&[0, 1, 4, 3, 2])?;
        for i in 0..post_omega.amps().len() {
            if (post_omega.amplitude(i) - swapped.amplitude(i)).norm() > PROTOCOL_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
