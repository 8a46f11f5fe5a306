use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::channels::{omega, secret_state, SecretParam};
use crate::error::Error;
use crate::rng::trial_rng;

const TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn assert_close(a: Complex64, b: Complex64) {
    assert!((a - b).norm() < TOL, "{a} != {b}");
}

#[test]
fn from_amplitudes_basis_state() {
    let ket = Ket::from_amplitudes(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert_eq!(ket, Ket::zero());
    assert_eq!(ket.num_qubits(), 1);
}

#[test]
fn from_amplitudes_normalizes() {
    let ket = Ket::from_amplitudes(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert_close(ket.amplitude(0), c(h, 0.0));
    assert_close(ket.amplitude(1), c(h, 0.0));
}

#[test]
fn from_amplitudes_builds_the_four_qubit_channel() {
    let mut amps = vec![c(0.0, 0.0); 16];
    amps[0] = c(0.5, 0.0);
    amps[6] = c(0.5, 0.0);
    amps[9] = c(0.5, 0.0);
    amps[15] = c(-0.5, 0.0);
    assert_eq!(Ket::from_amplitudes(&amps).unwrap(), omega());
}

#[test]
fn from_amplitudes_rejects_bad_input() {
    assert_eq!(
        Ket::from_amplitudes(&[c(1.0, 0.0); 3]).unwrap_err(),
        Error::NonPowerOfTwoLength(3)
    );
    assert_eq!(
        Ket::from_amplitudes(&[c(1.0, 0.0)]).unwrap_err(),
        Error::NonPowerOfTwoLength(1)
    );
    assert_eq!(
        Ket::from_amplitudes(&[c(0.0, 0.0); 4]).unwrap_err(),
        Error::ZeroNorm
    );
}

#[test]
fn tensor_orders_left_qubit_first() {
    let ket = Ket::zero().tensor(&Ket::one()).unwrap();
    assert_eq!(ket, Ket::basis_state(2, 0b01));
}

#[test]
fn tensor_of_plus_states_is_uniform() {
    let ket = Ket::plus().tensor(&Ket::plus()).unwrap();
    for i in 0..4 {
        assert_close(ket.amplitude(i), c(0.5, 0.0));
    }
}

#[test]
fn tensor_respects_register_cap() {
    let eight = Ket::basis_state(8, 0);
    assert!(matches!(
        eight.tensor(&eight).unwrap_err(),
        Error::RegisterTooLarge(16)
    ));
}

// The composed secret (x) channel state must match the Bell-expanded form:
// 1/(2 sqrt(1+|l|^2)) [ psi+ (psi0 + l psi1) + psi- (psi0 - l psi1)
//                     + phi+ (psi1 + l psi0) + phi- (psi1 - l psi0) ].
#[test]
fn composition_matches_bell_expansion() {
    let lambda = c(0.7, -0.3);
    let secret = secret_state(SecretParam::new(lambda).unwrap());
    let composed = secret.tensor(&omega()).unwrap();

    let (psi0, psi1) = crate::channels::omega_components();
    let mut expected = vec![c(0.0, 0.0); 32];
    let scale = 1.0 / (2.0 * (1.0 + lambda.norm_sqr()).sqrt());
    for (bell, plus_first, coeff) in [
        (BellOutcome::PsiPlus, true, c(1.0, 0.0)),
        (BellOutcome::PsiMinus, true, c(-1.0, 0.0)),
        (BellOutcome::PhiPlus, false, c(1.0, 0.0)),
        (BellOutcome::PhiMinus, false, c(-1.0, 0.0)),
    ] {
        let pair = bell.pair_amps();
        for pair_idx in 0..4 {
            for agent_idx in 0..8 {
                // psi rows carry psi0 + l*psi1, phi rows psi1 + l*psi0,
                // with the sign on the lambda term.
                let agents = if plus_first {
                    psi0.amplitude(agent_idx) + coeff * lambda * psi1.amplitude(agent_idx)
                } else {
                    psi1.amplitude(agent_idx) + coeff * lambda * psi0.amplitude(agent_idx)
                };
                expected[pair_idx * 8 + agent_idx] += pair[pair_idx] * agents * scale;
            }
        }
    }
    for i in 0..32 {
        assert_close(composed.amplitude(i), expected[i]);
    }
}

#[test]
fn apply_x_flips_basis_state() {
    let ket = Ket::zero().apply_1q(&Unitary2::pauli_x(), 0).unwrap();
    assert_eq!(ket, Ket::one());
}

#[test]
fn apply_z_fixes_secret_sign() {
    let lambda = c(1.3, 0.4);
    let flipped = Ket::from_amplitudes(&[c(1.0, 0.0), -lambda]).unwrap();
    let fixed = flipped.apply_1q(&Unitary2::pauli_z(), 0).unwrap();
    let expected = Ket::from_amplitudes(&[c(1.0, 0.0), lambda]).unwrap();
    assert!(fixed.fidelity_up_to_phase(&expected).unwrap() > 1.0 - TOL);
}

// Direct 2x2 matrix-product oracle for the composite correction.
#[test]
fn apply_xz_matches_matrix_product() {
    let lambda = c(0.9, -1.1);
    let state = Ket::from_amplitudes(&[-lambda, c(1.0, 0.0)]).unwrap();

    let xz = Unitary2::pauli_x().mul(&Unitary2::pauli_z());
    assert_eq!(xz, Unitary2::xz());

    let via_gate = state.apply_1q(&Unitary2::xz(), 0).unwrap();
    let m = xz.matrix();
    let manual = [
        m[0][0] * state.amplitude(0) + m[0][1] * state.amplitude(1),
        m[1][0] * state.amplitude(0) + m[1][1] * state.amplitude(1),
    ];
    assert_close(via_gate.amplitude(0), manual[0]);
    assert_close(via_gate.amplitude(1), manual[1]);

    let expected = Ket::from_amplitudes(&[c(1.0, 0.0), lambda]).unwrap();
    assert!(via_gate.fidelity_up_to_phase(&expected).unwrap() > 1.0 - TOL);
}

#[test]
fn apply_rejects_bad_targets() {
    let ket = Ket::basis_state(2, 0);
    assert!(matches!(
        ket.apply_1q(&Unitary2::pauli_x(), 2).unwrap_err(),
        Error::IndexOutOfRange { index: 2, .. }
    ));
    let u4 = Unitary4::kron(&Unitary2::identity(), &Unitary2::identity());
    assert_eq!(
        ket.apply_2q(&u4, (1, 1)).unwrap_err(),
        Error::DuplicateTarget(1)
    );
}

#[test]
fn unitarity_check_rejects_non_unitary() {
    let err = Unitary2::new([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]).unwrap_err();
    assert!(matches!(err, Error::NotUnitary { .. }));

    let mut rows = [[c(0.0, 0.0); 4]; 4];
    rows[0][0] = c(1.0, 0.0);
    assert!(matches!(
        Unitary4::new(rows).unwrap_err(),
        Error::NotUnitary { .. }
    ));
}

#[test]
fn measure_definite_state_is_deterministic() {
    let mut rng = trial_rng(0, 0);
    for _ in 0..32 {
        let (bit, post) = Ket::one().measure_computational(0, &mut rng).unwrap();
        assert_eq!(bit, Bit::One);
        assert_eq!(post, Ket::one());
    }
}

// Measuring the first agent of the post-announcement state collapses the
// remaining pair exactly as the channel decomposition predicts.
#[test]
fn measurement_collapses_agent_state() {
    let lambda = c(1.0, 0.0);
    let secret = secret_state(SecretParam::new(lambda).unwrap());
    let composed = secret.tensor(&omega()).unwrap();
    let (_, post) = composed.project_bell((0, 1), BellOutcome::PsiPlus).unwrap();
    let (p0, collapsed) = post.project_computational(2, Bit::Zero).unwrap();
    assert!((p0 - 0.5).abs() < TOL);
    // B = C = 0 and D holds (|0> + lambda|1>)/sqrt(1+|lambda|^2).
    assert_eq!(collapsed.collapsed_bit(3), Some(0));
    let rho = collapsed.reduced_density_1q(4).unwrap();
    let expected = secret_state(SecretParam::new(lambda).unwrap());
    assert!((rho.fidelity_against(&expected).unwrap() - 1.0).abs() < TOL);
}

#[test]
fn sampled_frequency_matches_born_probability() {
    let mut rng = trial_rng(42, 0);
    let state = Ket::plus();
    let trials = 100_000u32;
    let mut zeros = 0u32;
    for _ in 0..trials {
        let (bit, _) = state.measure_computational(0, &mut rng).unwrap();
        if bit == Bit::Zero {
            zeros += 1;
        }
    }
    // 5 sigma binomial band around p = 1/2.
    let sigma = (f64::from(trials) * 0.25).sqrt();
    assert!((f64::from(zeros) - f64::from(trials) * 0.5).abs() < 5.0 * sigma);
}

#[test]
fn bell_sampling_matches_projection_probabilities() {
    // An asymmetric 3-qubit state: Bell-outcome weights on (0, 2) are not
    // uniform, so the comparison is against the projection oracle itself.
    let amps: Vec<Complex64> = [
        (0.9, 0.1),
        (0.0, 0.4),
        (-0.3, 0.2),
        (0.1, 0.0),
        (0.2, -0.6),
        (0.0, 0.0),
        (0.5, 0.3),
        (-0.2, 0.2),
    ]
    .iter()
    .map(|&(re, im)| c(re, im))
    .collect();
    let state = Ket::from_amplitudes(&amps).unwrap();

    let mut expected = [0.0f64; 4];
    for (k, outcome) in BELL_OUTCOMES.iter().enumerate() {
        if let Ok((p, _)) = state.project_bell((0, 2), *outcome) {
            expected[k] = p;
        }
    }

    let trials = 100_000u32;
    let mut counts = [0u32; 4];
    let mut rng = trial_rng(77, 0);
    for _ in 0..trials {
        let (outcome, _) = state.measure_bell((0, 2), &mut rng).unwrap();
        counts[outcome as usize] += 1;
    }
    for k in 0..4 {
        let sigma = (f64::from(trials) * expected[k] * (1.0 - expected[k]))
            .sqrt()
            .max(1.0);
        assert!(
            (f64::from(counts[k]) - f64::from(trials) * expected[k]).abs() < 5.0 * sigma,
            "outcome {k}: {} vs {}",
            counts[k],
            f64::from(trials) * expected[k]
        );
    }
}

#[test]
fn bell_measurement_of_bell_state_is_deterministic() {
    let mut rng = trial_rng(1, 0);
    let pair = BellOutcome::PsiPlus.state();
    let (outcome, post) = pair.measure_bell((0, 1), &mut rng).unwrap();
    assert_eq!(outcome, BellOutcome::PsiPlus);
    assert!(post.fidelity_up_to_phase(&pair).unwrap() > 1.0 - TOL);
}

#[test]
fn project_bell_orthogonal_branch_is_flagged() {
    let pair = BellOutcome::PsiPlus.state();
    assert_eq!(
        pair.project_bell((0, 1), BellOutcome::PhiPlus).unwrap_err(),
        Error::ZeroProbabilityBranch
    );
}

// Analytic branch weight for the non-maximal channel: the psi+ branch of
// |psi_s> (x) |Omega'> carries (a^2 + b^2 |l|^2)/(2 (1 + |l|^2)).
#[test]
fn project_bell_nonmaximal_probability() {
    let (a, b) = (0.8, 0.6);
    let lambda = c(1.0, 0.0);
    let secret = secret_state(SecretParam::new(lambda).unwrap());
    let state = secret
        .tensor(&crate::channels::omega_prime(a, b).unwrap())
        .unwrap();
    let (p, _) = state.project_bell((0, 1), BellOutcome::PsiPlus).unwrap();
    let expected = (a * a + b * b * lambda.norm_sqr()) / (2.0 * (1.0 + lambda.norm_sqr()));
    assert!((p - expected).abs() < TOL);
    assert!((p - 0.25).abs() < TOL);
}

#[test]
fn fidelity_cases() {
    let lambda = c(0.3, 0.8);
    let s = Ket::from_amplitudes(&[c(1.0, 0.0), lambda]).unwrap();
    let minus_s = Ket::from_amplitudes(&[c(-1.0, 0.0), -lambda]).unwrap();
    assert!((s.fidelity_up_to_phase(&minus_s).unwrap() - 1.0).abs() < TOL);
    assert!(Ket::zero().fidelity_up_to_phase(&Ket::one()).unwrap() < TOL);
    assert!((Ket::plus().fidelity_up_to_phase(&Ket::zero()).unwrap() - 0.5).abs() < TOL);
    assert_eq!(
        Ket::zero()
            .fidelity_up_to_phase(&Ket::basis_state(2, 0))
            .unwrap_err(),
        Error::SizeMismatch { left: 1, right: 2 }
    );
}

#[test]
fn reduced_density_of_product_and_entangled_states() {
    let rho = Ket::basis_state(2, 0b01).reduced_density_1q(0).unwrap();
    assert_close(rho.entry(0, 0), c(1.0, 0.0));
    assert_close(rho.entry(1, 1), c(0.0, 0.0));

    // First qubit of a generic product state keeps its projector.
    let q = Ket::from_amplitudes(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
    let rho = q
        .tensor(&Ket::zero())
        .unwrap()
        .reduced_density_1q(0)
        .unwrap();
    assert_close(rho.entry(0, 0), c(0.36, 0.0));
    assert_close(rho.entry(1, 1), c(0.64, 0.0));
    assert_close(rho.entry(0, 1), c(0.0, -0.48));

    // The first agent qubit of the post-announcement state is maximally
    // mixed for any secret parameter.
    let mut rng = trial_rng(9, 0);
    for _ in 0..8 {
        let lambda = crate::rng::random_lambda(&mut rng);
        let secret = secret_state(SecretParam::new(lambda).unwrap());
        let composed = secret.tensor(&omega()).unwrap();
        let (_, post) = composed.project_bell((0, 1), BellOutcome::PsiPlus).unwrap();
        let rho = post.reduced_density_1q(2).unwrap();
        assert!(rho.deviation_from_mixed() < TOL);
        assert!(rho.is_valid(TOL));
    }
}

#[test]
fn principal_component_of_pure_marginal() {
    let q = Ket::from_amplitudes(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
    let rho = q.reduced_density_1q(0).unwrap();
    let (value, vec) = rho.principal_component();
    assert!((value - 1.0).abs() < TOL);
    assert!(vec.fidelity_up_to_phase(&q).unwrap() > 1.0 - TOL);
}

#[test]
fn identical_seeds_reproduce_outcome_sequences() {
    let state = secret_state(SecretParam::real(1.0).unwrap())
        .tensor(&omega())
        .unwrap();
    let run = |seed: u64| -> Vec<u8> {
        let mut rng = trial_rng(seed, 3);
        (0..64)
            .map(|_| {
                let (outcome, _) = state.measure_bell((0, 1), &mut rng).unwrap();
                outcome as u8
            })
            .collect()
    };
    assert_eq!(run(7), run(7));
    assert_ne!(run(7), run(8));
}

#[test]
fn permute_qubits_roundtrip() {
    let ket = Ket::basis_state(3, 0b011);
    let rotated = ket.permute_qubits(&[2, 0, 1]).unwrap();
    // Result qubit j takes original qubit perm[j]: bits (b2, b0, b1) = (1, 0, 1).
    assert_eq!(rotated, Ket::basis_state(3, 0b101));
}

fn arb_state(num_qubits: usize) -> impl Strategy<Value = Ket> {
    let dim = 1usize << num_qubits;
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map(
        "nonzero norm",
        move |parts| {
            let amps: Vec<Complex64> = parts.iter().map(|&(re, im)| c(re, im)).collect();
            Ket::from_amplitudes(&amps).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Completeness: the four Bell branch probabilities sum to one, and so
    // do the two computational branches of every qubit.
    #[test]
    fn projection_probabilities_are_complete(state in arb_state(3)) {
        let mut total = 0.0;
        for outcome in BELL_OUTCOMES {
            match state.project_bell((0, 2), outcome) {
                Ok((p, post)) => {
                    total += p;
                    prop_assert!((post.norm_sqr() - 1.0).abs() < 1e-10);
                }
                Err(Error::ZeroProbabilityBranch) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-10);

        for qubit in 0..3 {
            let mut total = 0.0;
            for bit in [Bit::Zero, Bit::One] {
                match state.project_computational(qubit, bit) {
                    Ok((p, _)) => total += p,
                    Err(Error::ZeroProbabilityBranch) => {}
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
            }
            prop_assert!((total - 1.0).abs() < 1e-10);
        }
    }

    // Norm preservation through unitaries and measurement collapse.
    #[test]
    fn operations_preserve_norm(state in arb_state(3), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let rotated = state
            .apply_1q(&Unitary2::hadamard(), 1).unwrap()
            .apply_2q(&Unitary4::kron(&Unitary2::xz(), &Unitary2::i_y()), (2, 0)).unwrap();
        prop_assert!((rotated.norm_sqr() - 1.0).abs() < 1e-10);
        let (_, collapsed) = rotated.measure_computational(2, &mut rng).unwrap();
        prop_assert!((collapsed.norm_sqr() - 1.0).abs() < 1e-10);
        let (_, collapsed) = rotated.measure_bell((0, 1), &mut rng).unwrap();
        prop_assert!((collapsed.norm_sqr() - 1.0).abs() < 1e-10);
    }

    // A permutation followed by its inverse is the identity.
    #[test]
    fn permutation_inverts(state in arb_state(4)) {
        let perm = [3usize, 1, 0, 2];
        let mut inverse = [0usize; 4];
        for (j, &p) in perm.iter().enumerate() {
            inverse[p] = j;
        }
        let back = state
            .permute_qubits(&perm).unwrap()
            .permute_qubits(&inverse).unwrap();
        prop_assert_eq!(back, state);
    }
}
