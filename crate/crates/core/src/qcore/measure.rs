//! Born-rule measurement and deterministic projection oracles.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::ket::{Ket, ZERO_BRANCH_TOL};

/// Classical bit produced by a computational-basis measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn from_u8(v: u8) -> Bit {
        if v == 0 {
            Bit::Zero
        } else {
            Bit::One
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn flipped(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }
}

impl std::fmt::Display for Bit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Bell-measurement outcome.
///
/// Convention (fixed by the channel decomposition this simulator verifies,
/// the reverse of the most common literature naming):
///   |psi+-> = (|00> +- |11>)/sqrt(2),  |phi+-> = (|01> +- |10>)/sqrt(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellOutcome {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

pub const BELL_OUTCOMES: [BellOutcome; 4] = [
    BellOutcome::PsiPlus,
    BellOutcome::PsiMinus,
    BellOutcome::PhiPlus,
    BellOutcome::PhiMinus,
];

impl BellOutcome {
    /// Amplitudes of the Bell state, indexed by 2*b0 + b1.
    pub fn pair_amps(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let p = Complex64::new(h, 0.0);
        let m = Complex64::new(-h, 0.0);
        match self {
            BellOutcome::PsiPlus => [p, z, z, p],
            BellOutcome::PsiMinus => [p, z, z, m],
            BellOutcome::PhiPlus => [z, p, p, z],
            BellOutcome::PhiMinus => [z, p, m, z],
        }
    }

    /// The two-qubit Bell state as a Ket.
    pub fn state(self) -> Ket {
        Ket::from_amplitudes(&self.pair_amps()).expect("bell state is normalized")
    }

    pub fn label(self) -> &'static str {
        match self {
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
        }
    }
}

impl std::fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl Ket {
    /// Exact Born probability of finding `target` in |bit>, with the
    /// normalized projected state. Zero-probability branches are flagged
    /// instead of returning a non-state.
    pub fn project_computational(&self, target: usize, bit: Bit) -> Result<(f64, Ket)> {
        self.check_target(target)?;
        let mask = self.mask_of(target);
        let want = if bit == Bit::One { mask } else { 0 };
        let prob: f64 = self
            .amps()
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if prob < ZERO_BRANCH_TOL {
            return Err(Error::ZeroProbabilityBranch);
        }
        let scale = 1.0 / prob.sqrt();
        let amps: Vec<Complex64> = self
            .amps()
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                if i & mask == want {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((
            prob,
            Ket::from_amplitudes(&amps).expect("projection output is normalized"),
        ))
    }

    /// Sample a computational-basis measurement of `target` by the Born rule.
    /// The measured qubit is retained in the register, collapsed to a basis
    /// state, so index bookkeeping never shifts mid-protocol.
    pub fn measure_computational<R: Rng>(&self, target: usize, rng: &mut R) -> Result<(Bit, Ket)> {
        self.check_target(target)?;
        let mask = self.mask_of(target);
        let p0: f64 = self
            .amps()
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let outcome = if rng.gen::<f64>() < p0 {
            Bit::Zero
        } else {
            Bit::One
        };
        let (_, state) = self.project_computational(target, outcome)?;
        Ok((outcome, state))
    }

    /// Exact Born probability of a Bell outcome on the ordered pair
    /// `targets`, with the normalized projected state (targets collapse to
    /// the matching Bell state and stay in the register).
    pub fn project_bell(
        &self,
        targets: (usize, usize),
        outcome: BellOutcome,
    ) -> Result<(f64, Ket)> {
        self.check_pair(targets)?;
        let m0 = self.mask_of(targets.0);
        let m1 = self.mask_of(targets.1);
        let bell = outcome.pair_amps();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps().len()];
        let mut prob = 0.0;
        for i in 0..self.amps().len() {
            if i & m0 == 0 && i & m1 == 0 {
                let idx = [i, i | m1, i | m0, i | m0 | m1];
                let mut overlap = Complex64::new(0.0, 0.0);
                for r in 0..4 {
                    overlap += bell[r].conj() * self.amplitude(idx[r]);
                }
                prob += overlap.norm_sqr();
                for r in 0..4 {
                    amps[idx[r]] = overlap * bell[r];
                }
            }
        }
        if prob < ZERO_BRANCH_TOL {
            return Err(Error::ZeroProbabilityBranch);
        }
        let scale = 1.0 / prob.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Ok((
            prob,
            Ket::from_amplitudes(&amps).expect("projection output is normalized"),
        ))
    }

    /// Sample a Bell measurement on the ordered pair `targets`.
    pub fn measure_bell<R: Rng>(
        &self,
        targets: (usize, usize),
        rng: &mut R,
    ) -> Result<(BellOutcome, Ket)> {
        self.check_pair(targets)?;
        let mut probs = [0.0f64; 4];
        let mut states: [Option<Ket>; 4] = [None, None, None, None];
        for (k, outcome) in BELL_OUTCOMES.iter().enumerate() {
            match self.project_bell(targets, *outcome) {
                Ok((p, s)) => {
                    probs[k] = p;
                    states[k] = Some(s);
                }
                Err(Error::ZeroProbabilityBranch) => {}
                Err(e) => return Err(e),
            }
        }
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for k in 0..4 {
            acc += probs[k];
            if u < acc {
                if let Some(state) = states[k].take() {
                    return Ok((BELL_OUTCOMES[k], state));
                }
            }
        }
        // Rounding can leave u marginally above the accumulated total; take
        // the last reachable branch.
        let k = (0..4)
            .rev()
            .find(|&k| states[k].is_some())
            .expect("at least one Bell branch is reachable");
        Ok((BELL_OUTCOMES[k], states[k].take().expect("branch present")))
    }

    /// Sample an X-basis measurement of `target`: outcome Zero means |+>,
    /// One means |->. The qubit collapses to the measured eigenstate.
    pub fn measure_x_basis<R: Rng>(&self, target: usize, rng: &mut R) -> Result<(Bit, Ket)> {
        let h = crate::qcore::gates::Unitary2::hadamard();
        let rotated = self.apply_1q(&h, target)?;
        let (bit, collapsed) = rotated.measure_computational(target, rng)?;
        Ok((bit, collapsed.apply_1q(&h, target)?))
    }
}
