//! Hierarchical quantum secret sharing: the information-splitting scheme
//! hardened with decoy qubits, sequence permutation and a conjugate-coding
//! eavesdropping check.
//!
//! One session over the |Omega> channel runs in phases:
//!
//! 1. Alice prepares n channel copies; qubit s of the 4n-qubit signal
//!    register is `Signal(s)`, with copy l holding 4l..4l+3 in A, B, C, D
//!    order. She keeps the A sequence.
//! 2. She appends n of her 3n random decoys (from {|0>, |1>, |+>, |->}) to
//!    each agent sequence and scrambles all three with one uniformly drawn
//!    permutation on 2n slots. Only she knows the order.
//! 3. After delivery is acknowledged, she announces the decoy coordinates;
//!    each agent measures every decoy in a random Z/X basis and announces
//!    (basis, position, outcome). Alice scores the matched-basis rounds;
//!    too many errors aborts the session.
//! 4. She discloses the remaining coordinates, the agents rearrange, and
//!    the ordinary information-splitting round runs once per copy.
//!
//! The permutation only protects qubits in transit: an insider who already
//! holds a sequence legitimately and waits for the coordinate disclosure is
//! outside its threat model, and a dishonest receiver measuring blindly
//! before the disclosure both leaves decoy evidence and loses fidelity,
//! which is what [`attack_effectiveness_study`] quantifies.

mod registry;

pub use registry::QubitId;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{omega, secret_state, ChannelSpec, SecretParam};
use crate::error::{Error, Result};
use crate::hqis::{
    correction_for_bob, correction_for_diana, dishonest_receiver_attack, AgentQubit, HelperOutcome,
    ProtocolTranscript, Receiver,
};
use crate::qcore::{Bit, Ket};
use registry::Registry;

/// Preparation/measurement basis of a decoy qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecoyBasis {
    Z,
    X,
}

/// One of the four conjugate-coding decoy states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecoyState {
    Z0,
    Z1,
    XPlus,
    XMinus,
}

impl DecoyState {
    pub fn sample<R: Rng>(rng: &mut R) -> DecoyState {
        match rng.gen_range(0..4u8) {
            0 => DecoyState::Z0,
            1 => DecoyState::Z1,
            2 => DecoyState::XPlus,
            _ => DecoyState::XMinus,
        }
    }

    pub fn ket(self) -> Ket {
        match self {
            DecoyState::Z0 => Ket::zero(),
            DecoyState::Z1 => Ket::one(),
            DecoyState::XPlus => Ket::plus(),
            DecoyState::XMinus => Ket::minus(),
        }
    }

    pub fn basis(self) -> DecoyBasis {
        match self {
            DecoyState::Z0 | DecoyState::Z1 => DecoyBasis::Z,
            DecoyState::XPlus | DecoyState::XMinus => DecoyBasis::X,
        }
    }

    /// The bit encoded in the preparation basis.
    pub fn bit(self) -> Bit {
        match self {
            DecoyState::Z0 | DecoyState::XPlus => Bit::Zero,
            DecoyState::Z1 | DecoyState::XMinus => Bit::One,
        }
    }
}

/// The three transmitted agent sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgentSequence {
    B,
    C,
    D,
}

pub const AGENT_SEQUENCES: [AgentSequence; 3] =
    [AgentSequence::B, AgentSequence::C, AgentSequence::D];

impl AgentSequence {
    pub fn index(self) -> usize {
        match self {
            AgentSequence::B => 0,
            AgentSequence::C => 1,
            AgentSequence::D => 2,
        }
    }

    /// Offset of this agent's qubit within a copy (A, B, C, D order).
    fn copy_offset(self) -> u32 {
        match self {
            AgentSequence::B => 1,
            AgentSequence::C => 2,
            AgentSequence::D => 3,
        }
    }

    pub fn owner(self) -> Receiver {
        match self {
            AgentSequence::B => Receiver::Bob,
            AgentSequence::C => Receiver::Charlie,
            AgentSequence::D => Receiver::Diana,
        }
    }
}

/// Where a decoy sits before the permutation is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyRecord {
    pub sequence: AgentSequence,
    /// Slot in the pre-permutation sequence (signal slots come first).
    pub slot: usize,
    pub state: DecoyState,
}

/// Full layout of one distribution round: per-party qubit sequences, decoy
/// records and the scrambling permutation. Together with the seed this
/// replays the session exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencePlan {
    pub n: usize,
    /// Alice's retained sequence [p1, p5, ...].
    pub alice: Vec<QubitId>,
    /// Pre-permutation sequences: n signal qubits then n decoys each.
    pub pre_permutation: [Vec<QubitId>; 3],
    /// Transmitted sequences after the permutation.
    pub transmitted: [Vec<QubitId>; 3],
    /// Decoy preparation states, indexed by decoy id.
    pub decoy_states: Vec<DecoyState>,
    pub decoy_records: Vec<DecoyRecord>,
    /// transmitted[s][j] = pre_permutation[s][permutation[j]].
    pub permutation: Vec<usize>,
}

impl SequencePlan {
    /// The coordinates Alice announces first: (transmitted position, decoy id).
    pub fn decoy_coordinates(&self, sequence: AgentSequence) -> Vec<(usize, u32)> {
        self.transmitted[sequence.index()]
            .iter()
            .enumerate()
            .filter_map(|(pos, id)| match id {
                QubitId::Decoy(d) => Some((pos, *d)),
                _ => None,
            })
            .collect()
    }

    /// The coordinates disclosed after the check: (transmitted position,
    /// original signal slot). The same permutation scrambles every
    /// sequence, so the positions agree across agents.
    pub fn signal_coordinates(&self, sequence: AgentSequence) -> Vec<(usize, usize)> {
        (0..2 * self.n)
            .filter(|&j| self.permutation[j] < self.n)
            .inspect(|&j| {
                debug_assert!(matches!(
                    self.transmitted[sequence.index()][j],
                    QubitId::Signal(_)
                ));
            })
            .map(|j| (j, self.permutation[j]))
            .collect()
    }

    /// Reorder a transmitted sequence by the disclosed coordinates; the
    /// result must be the original signal order.
    pub fn rearranged_signals(&self, sequence: AgentSequence) -> Vec<QubitId> {
        let mut out = vec![None; self.n];
        for (pos, slot) in self.signal_coordinates(sequence) {
            out[slot] = Some(self.transmitted[sequence.index()][pos]);
        }
        out.into_iter()
            .map(|q| q.expect("slot disclosed"))
            .collect()
    }
}

/// Distribution bookkeeping plus the quantum record of one session.
#[derive(Debug, Clone)]
pub struct DistributionState {
    pub plan: SequencePlan,
    registry: Registry,
}

impl DistributionState {
    /// Snapshot of the 4n-qubit signal register in canonical qubit order.
    pub fn global_signal_ket(&self) -> Result<Ket> {
        let ids: Vec<QubitId> = (0..4 * self.plan.n as u32).map(QubitId::Signal).collect();
        self.registry.assemble(&ids)
    }

    /// Snapshot of one decoy qubit.
    pub fn decoy_ket(&self, decoy: u32) -> Result<Ket> {
        self.registry.assemble(&[QubitId::Decoy(decoy)])
    }
}

/// Adversary acting on qubits in transit between distribution and the
/// delivery acknowledgment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdversaryModel {
    None,
    /// Measure each targeted in-transit qubit in a random Z/X basis with
    /// the given per-qubit probability and forward the fresh eigenstate.
    InterceptResend {
        sequences: Vec<AgentSequence>,
        probability: f64,
    },
    /// A dishonest Bob captures the C and D sequences for a later joint
    /// measurement; capture alone disturbs nothing he cannot identify.
    DishonestBobCapture,
}

impl AdversaryModel {
    /// Intercept-resend on every sequence with probability 1.
    pub fn full_intercept() -> Self {
        AdversaryModel::InterceptResend {
            sequences: AGENT_SEQUENCES.to_vec(),
            probability: 1.0,
        }
    }
}

/// One qubit the adversary measured in transit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterceptEvent {
    pub sequence: AgentSequence,
    /// Transmitted slot index (the adversary cannot tell signal from decoy).
    pub slot: usize,
    pub qubit: QubitId,
    pub basis: DecoyBasis,
    pub outcome: Bit,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AdversaryLog {
    pub intercepts: Vec<InterceptEvent>,
    pub captured_sequences: Vec<AgentSequence>,
}

/// Outcome of the decoy check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub decoys_checked: u32,
    pub bases_matched: u32,
    pub errors: u32,
    pub error_rate: f64,
    pub aborted: bool,
    pub threshold: f64,
}

/// Full record of one session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HqssTranscript {
    pub n: usize,
    pub lambda: SecretParam,
    pub receiver: Receiver,
    pub plan: SequencePlan,
    pub adversary_log: AdversaryLog,
    pub check: CheckReport,
    pub aborted: bool,
    /// One reconstruction per channel copy; empty when the session aborted.
    /// Under adversary disturbance the receiver's marginal can be mixed; the
    /// recorded fidelity is computed against the full marginal and
    /// `final_state` then holds its principal component.
    pub secret_runs: Vec<ProtocolTranscript>,
}

fn check_copy_count(n: usize) -> Result<()> {
    if !(1..=3).contains(&n) {
        return Err(Error::CopyCountOutOfRange(n));
    }
    Ok(())
}

/// Phase 1-2: prepare n channel copies and 3n decoys, build the agent
/// sequences and scramble them with a fresh uniform permutation.
pub fn prepare_distribution<R: Rng>(n: usize, rng: &mut R) -> Result<DistributionState> {
    check_copy_count(n)?;
    let mut registry = Registry::new();
    for l in 0..n as u32 {
        registry.insert(
            omega(),
            (0..4).map(|k| QubitId::Signal(4 * l + k)).collect(),
        );
    }

    let decoy_states: Vec<DecoyState> = (0..3 * n).map(|_| DecoyState::sample(rng)).collect();
    for (i, state) in decoy_states.iter().enumerate() {
        registry.insert(state.ket(), vec![QubitId::Decoy(i as u32)]);
    }

    let alice: Vec<QubitId> = (0..n as u32).map(|l| QubitId::Signal(4 * l)).collect();
    let mut pre_permutation: [Vec<QubitId>; 3] = Default::default();
    let mut decoy_records = Vec::with_capacity(3 * n);
    for seq in AGENT_SEQUENCES {
        let s = seq.index();
        let mut slots: Vec<QubitId> = (0..n as u32)
            .map(|l| QubitId::Signal(4 * l + seq.copy_offset()))
            .collect();
        for i in 0..n {
            let decoy_id = (s * n + i) as u32;
            slots.push(QubitId::Decoy(decoy_id));
            decoy_records.push(DecoyRecord {
                sequence: seq,
                slot: n + i,
                state: decoy_states[decoy_id as usize],
            });
        }
        pre_permutation[s] = slots;
    }

    let mut permutation: Vec<usize> = (0..2 * n).collect();
    permutation.shuffle(rng);
    let mut transmitted: [Vec<QubitId>; 3] = Default::default();
    for seq in AGENT_SEQUENCES {
        let s = seq.index();
        transmitted[s] = permutation.iter().map(|&i| pre_permutation[s][i]).collect();
    }

    Ok(DistributionState {
        plan: SequencePlan {
            n,
            alice,
            pre_permutation,
            transmitted,
            decoy_states,
            decoy_records,
            permutation,
        },
        registry,
    })
}

/// Phase 2-3 boundary: the adversary acts on the transmitted sequences.
pub fn transmit_with_adversary<R: Rng>(
    dist: &mut DistributionState,
    adversary: &AdversaryModel,
    rng: &mut R,
) -> Result<AdversaryLog> {
    let mut log = AdversaryLog::default();
    match adversary {
        AdversaryModel::None => {}
        AdversaryModel::InterceptResend {
            sequences,
            probability,
        } => {
            for seq in AGENT_SEQUENCES {
                if !sequences.contains(&seq) {
                    continue;
                }
                for slot in 0..2 * dist.plan.n {
                    if rng.gen::<f64>() >= *probability {
                        continue;
                    }
                    let qubit = dist.plan.transmitted[seq.index()][slot];
                    let basis = if rng.gen::<bool>() {
                        DecoyBasis::Z
                    } else {
                        DecoyBasis::X
                    };
                    // Measuring and forwarding the matching eigenstate is
                    // the same projection on the transmitted qubit.
                    let outcome = match basis {
                        DecoyBasis::Z => dist.registry.measure_z(qubit, rng)?,
                        DecoyBasis::X => dist.registry.measure_x(qubit, rng)?,
                    };
                    log.intercepts.push(InterceptEvent {
                        sequence: seq,
                        slot,
                        qubit,
                        basis,
                        outcome,
                    });
                }
            }
        }
        AdversaryModel::DishonestBobCapture => {
            log.captured_sequences = vec![AgentSequence::C, AgentSequence::D];
        }
    }
    Ok(log)
}

/// Phase 3: Alice announces the decoy coordinates, every agent measures
/// each decoy in a random Z/X basis and announces the outcome, and Alice
/// scores the matched-basis rounds against her preparation records.
pub fn run_check<R: Rng>(
    dist: &mut DistributionState,
    threshold: f64,
    rng: &mut R,
) -> Result<CheckReport> {
    let mut decoys_checked = 0u32;
    let mut bases_matched = 0u32;
    let mut errors = 0u32;
    for seq in AGENT_SEQUENCES {
        for (_pos, decoy_id) in dist.plan.decoy_coordinates(seq) {
            decoys_checked += 1;
            let measured_basis = if rng.gen::<bool>() {
                DecoyBasis::Z
            } else {
                DecoyBasis::X
            };
            let outcome = match measured_basis {
                DecoyBasis::Z => dist.registry.measure_z(QubitId::Decoy(decoy_id), rng)?,
                DecoyBasis::X => dist.registry.measure_x(QubitId::Decoy(decoy_id), rng)?,
            };
            let prepared = dist.plan.decoy_states[decoy_id as usize];
            if prepared.basis() == measured_basis {
                bases_matched += 1;
                if outcome != prepared.bit() {
                    errors += 1;
                }
            }
        }
    }
    let error_rate = f64::from(errors) / f64::from(bases_matched.max(1));
    Ok(CheckReport {
        decoys_checked,
        bases_matched,
        errors,
        error_rate,
        aborted: error_rate > threshold,
        threshold,
    })
}

fn signal_id(copy: usize, offset: u32) -> QubitId {
    QubitId::Signal(4 * copy as u32 + offset)
}

/// Phases 5-7 for one channel copy: Alice Bell-measures (secret, A);
/// the receiver path mirrors the plain information-splitting round.
fn secret_phase_for_copy<R: Rng>(
    registry: &mut Registry,
    copy: usize,
    lambda: SecretParam,
    receiver: Receiver,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let secret_id = QubitId::Secret(copy as u32);
    registry.insert(secret_state(lambda), vec![secret_id]);
    let alice_outcome = registry.measure_bell(secret_id, signal_id(copy, 0), rng)?;

    let (helper_outcomes, correction, bits) = match receiver {
        Receiver::Diana => {
            let bit = registry.measure_z(signal_id(copy, 1), rng)?;
            let correction = correction_for_diana(alice_outcome, bit);
            (
                vec![(Receiver::Bob, HelperOutcome::Computational(bit))],
                correction,
                3,
            )
        }
        Receiver::Bob => {
            let joint = registry.measure_bell(signal_id(copy, 2), signal_id(copy, 3), rng)?;
            let correction = correction_for_bob(alice_outcome, joint);
            (
                vec![
                    (Receiver::Charlie, HelperOutcome::Joint(joint)),
                    (Receiver::Diana, HelperOutcome::Joint(joint)),
                ],
                correction,
                4,
            )
        }
        Receiver::Charlie => {
            let joint = registry.measure_bell(signal_id(copy, 1), signal_id(copy, 3), rng)?;
            let correction = correction_for_bob(alice_outcome, joint);
            (
                vec![
                    (Receiver::Bob, HelperOutcome::Joint(joint)),
                    (Receiver::Diana, HelperOutcome::Joint(joint)),
                ],
                correction,
                4,
            )
        }
    };

    let receiver_qubit = match receiver {
        Receiver::Bob => signal_id(copy, 1),
        Receiver::Charlie => signal_id(copy, 2),
        Receiver::Diana => signal_id(copy, 3),
    };
    registry.apply_1q(receiver_qubit, &correction.matrix())?;

    let rho = registry.reduced_density(receiver_qubit)?;
    let fidelity = rho.fidelity_against(&secret_state(lambda))?;
    let (_, final_state) = rho.principal_component();
    Ok(ProtocolTranscript {
        channel: ChannelSpec::Omega,
        lambda,
        receiver,
        alice_outcome,
        helper_outcomes,
        correction,
        final_state,
        fidelity,
        classical_bits_consumed_by_receiver: bits,
        holders: vec![
            (AgentQubit::B, Receiver::Bob),
            (AgentQubit::C, Receiver::Charlie),
            (AgentQubit::D, Receiver::Diana),
        ],
    })
}

/// Run one full session. On abort no secret phase runs and the transcript
/// carries the evidence; retrying is the caller's policy, the engine stays
/// a single pass.
pub fn run_hqss<R: Rng>(
    n: usize,
    lambda: SecretParam,
    receiver: Receiver,
    adversary: &AdversaryModel,
    threshold: f64,
    rng: &mut R,
) -> Result<HqssTranscript> {
    let mut dist = prepare_distribution(n, rng)?;
    let adversary_log = transmit_with_adversary(&mut dist, adversary, rng)?;
    let check = run_check(&mut dist, threshold, rng)?;

    let mut secret_runs = Vec::new();
    if !check.aborted {
        // Coordinate disclosure: the rearranged sequences must recover the
        // original signal order before any copy is consumed.
        for seq in AGENT_SEQUENCES {
            debug_assert_eq!(
                dist.plan.rearranged_signals(seq),
                dist.plan.pre_permutation[seq.index()][..n].to_vec()
            );
        }
        for copy in 0..n {
            secret_runs.push(secret_phase_for_copy(
                &mut dist.registry,
                copy,
                lambda,
                receiver,
                rng,
            )?);
        }
    }

    Ok(HqssTranscript {
        n,
        lambda,
        receiver,
        plan: dist.plan,
        adversary_log,
        check,
        aborted: check.aborted,
        secret_runs,
    })
}

/// One trial of the dishonest-receiver study against the full protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackTrial {
    pub check: CheckReport,
    /// Receiver-marginal fidelity per copy under the blind strategy.
    pub copy_fidelities: Vec<f64>,
    /// Copies whose blind pairing happened to hit the right partner.
    pub correct_pairings: u32,
}

/// Side-by-side demonstration: unrestricted capture against the bare
/// splitting scheme recovers the secret exactly, while the same adversary
/// against the full session must measure blindly (random slot pairings on
/// the permuted sequences) and both loses fidelity and leaves decoy
/// evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackStudyReport {
    pub n: usize,
    pub lambda: SecretParam,
    pub trials: usize,
    pub bare_hqis_fidelity: f64,
    pub blind_trials: Vec<AttackTrial>,
    pub mean_blind_fidelity: f64,
    pub min_blind_fidelity: f64,
    pub max_blind_fidelity: f64,
    /// Fraction of trials whose matched-basis decoy checks caught at least
    /// one error.
    pub detection_rate: f64,
    pub mean_decoy_error_rate: f64,
}

/// Dishonest Bob against the full protocol, one session.
fn blind_capture_trial<R: Rng>(n: usize, lambda: SecretParam, rng: &mut R) -> Result<AttackTrial> {
    let mut dist = prepare_distribution(n, rng)?;

    // Bob captures the C and D sequences in transit. Before any coordinate
    // disclosure he cannot tell slots apart, so his best blind strategy is
    // Bell-measuring randomly paired slots across the two sequences.
    let mut d_slots: Vec<usize> = (0..2 * n).collect();
    d_slots.shuffle(rng);
    let mut pair_outcomes = Vec::with_capacity(2 * n);
    for (j, &d_slot) in d_slots.iter().enumerate() {
        let c_qubit = dist.plan.transmitted[AgentSequence::C.index()][j];
        let d_qubit = dist.plan.transmitted[AgentSequence::D.index()][d_slot];
        let outcome = dist.registry.measure_bell(c_qubit, d_qubit, rng)?;
        pair_outcomes.push((c_qubit, d_qubit, outcome));
    }

    // He forwards the disturbed qubits; the decoy check runs honestly.
    let check = run_check(&mut dist, 0.0, rng)?;

    // Study continuation: the secret phase is executed regardless of the
    // abort verdict to expose the counterfactual recovery quality.
    let secret = secret_state(lambda);
    let mut copy_fidelities = Vec::with_capacity(n);
    let mut correct_pairings = 0u32;
    for copy in 0..n {
        let secret_id = QubitId::Secret(copy as u32);
        dist.registry.insert(secret_state(lambda), vec![secret_id]);
        let alice_outcome = dist
            .registry
            .measure_bell(secret_id, signal_id(copy, 0), rng)?;

        // After the coordinate disclosure Bob learns which of his blind
        // pairs contained this copy's C qubit and reuses its outcome as the
        // joint-measurement announcement.
        let c_qubit = signal_id(copy, 2);
        let d_qubit = signal_id(copy, 3);
        let (_, paired_d, guessed) = *pair_outcomes
            .iter()
            .find(|(c, _, _)| *c == c_qubit)
            .expect("every C slot was measured");
        if paired_d == d_qubit {
            correct_pairings += 1;
        }
        let correction = correction_for_bob(alice_outcome, guessed);
        let bob_qubit = signal_id(copy, 1);
        dist.registry.apply_1q(bob_qubit, &correction.matrix())?;
        let rho = dist.registry.reduced_density(bob_qubit)?;
        copy_fidelities.push(rho.fidelity_against(&secret)?);
    }

    Ok(AttackTrial {
        check,
        copy_fidelities,
        correct_pairings,
    })
}

/// Run the capture adversary against bare HQIS and against the full
/// protocol, recording recovery fidelity and detection evidence.
pub fn attack_effectiveness_study<R: Rng>(
    n: usize,
    lambda: SecretParam,
    trials: usize,
    rng: &mut R,
) -> Result<AttackStudyReport> {
    check_copy_count(n)?;
    let bare = dishonest_receiver_attack(&ChannelSpec::Omega, lambda, rng)?;

    let mut blind_trials = Vec::with_capacity(trials);
    let mut fid_sum = 0.0;
    let mut fid_count = 0usize;
    let mut min_fid = f64::INFINITY;
    let mut max_fid = f64::NEG_INFINITY;
    let mut detected = 0usize;
    let mut error_rate_sum = 0.0;
    for _ in 0..trials {
        let trial = blind_capture_trial(n, lambda, rng)?;
        for &f in &trial.copy_fidelities {
            fid_sum += f;
            fid_count += 1;
            min_fid = min_fid.min(f);
            max_fid = max_fid.max(f);
        }
        if trial.check.errors > 0 {
            detected += 1;
        }
        error_rate_sum += trial.check.error_rate;
        blind_trials.push(trial);
    }

    Ok(AttackStudyReport {
        n,
        lambda,
        trials,
        bare_hqis_fidelity: bare.fidelity,
        blind_trials,
        mean_blind_fidelity: fid_sum / fid_count.max(1) as f64,
        min_blind_fidelity: min_fid,
        max_blind_fidelity: max_fid,
        detection_rate: detected as f64 / trials.max(1) as f64,
        mean_decoy_error_rate: error_rate_sum / trials.max(1) as f64,
    })
}
