//! Dense statevector over an ordered qubit register.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::gates::{Unitary2, Unitary4};

/// Hard cap on register size; 2^14 amplitudes keep every operation desk-scale.
pub const MAX_QUBITS: usize = 14;

/// Tolerance below which a branch probability is treated as exactly zero.
pub(crate) const ZERO_BRANCH_TOL: f64 = 1e-15;

/// Pure quantum state as a dense vector of 2^n complex amplitudes.
///
/// Basis-index convention: qubit 0 is the leftmost label in ket notation,
/// so |b0 b1 .. b(n-1)> maps to index sum_k b_k * 2^(n-1-k). All operations
/// are pure: they take `&self` and return fresh, normalized states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ket {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Ket {
    /// Build a normalized state from raw amplitudes.
    ///
    /// The length must be a power of two >= 2 and the vector must have
    /// nonzero norm; the input is normalized on construction.
    pub fn from_amplitudes(amps: &[Complex64]) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NonPowerOfTwoLength(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(num_qubits));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / norm_sq.sqrt();
        Ok(Ket {
            num_qubits,
            amps: amps.iter().map(|a| a * scale).collect(),
        })
    }

    /// Computational basis state |index> of an n-qubit register.
    pub fn basis_state(num_qubits: usize, index: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&num_qubits));
        assert!(index < (1 << num_qubits));
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ket { num_qubits, amps }
    }

    /// Single-qubit |0>.
    pub fn zero() -> Self {
        Self::basis_state(1, 0)
    }

    /// Single-qubit |1>.
    pub fn one() -> Self {
        Self::basis_state(1, 1)
    }

    /// Single-qubit |+> = (|0> + |1>)/sqrt(2).
    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Ket {
            num_qubits: 1,
            amps: vec![h, h],
        }
    }

    /// Single-qubit |-> = (|0> - |1>)/sqrt(2).
    pub fn minus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Ket {
            num_qubits: 1,
            amps: vec![h, -h],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit of `qubit` inside basis index `index` under the leftmost-first convention.
    #[inline]
    pub fn bit_of(&self, index: usize, qubit: usize) -> u8 {
        ((index >> (self.num_qubits - 1 - qubit)) & 1) as u8
    }

    #[inline]
    pub(crate) fn mask_of(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    pub(crate) fn check_target(&self, target: usize) -> Result<()> {
        if target >= self.num_qubits {
            return Err(Error::IndexOutOfRange {
                index: target,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub(crate) fn check_pair(&self, targets: (usize, usize)) -> Result<()> {
        self.check_target(targets.0)?;
        self.check_target(targets.1)?;
        if targets.0 == targets.1 {
            return Err(Error::DuplicateTarget(targets.0));
        }
        Ok(())
    }

    /// Kronecker product with `self`'s qubits first (leftmost labels).
    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(n));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Ket {
            num_qubits: n,
            amps,
        })
    }

    /// Apply a single-qubit unitary to `target`.
    pub fn apply_1q(&self, gate: &Unitary2, target: usize) -> Result<Ket> {
        self.check_target(target)?;
        let mask = self.mask_of(target);
        let m = gate.matrix();
        let mut amps = self.amps.clone();
        for i in 0..amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let a0 = amps[i];
                let a1 = amps[j];
                amps[i] = m[0][0] * a0 + m[0][1] * a1;
                amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(Ket {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    /// Apply a two-qubit unitary to the ordered pair `targets`.
    ///
    /// The first listed target supplies the high bit of the gate's 4-dim
    /// index, matching the tensor convention (first qubit is leftmost).
    pub fn apply_2q(&self, gate: &Unitary4, targets: (usize, usize)) -> Result<Ket> {
        self.check_pair(targets)?;
        let m0 = self.mask_of(targets.0);
        let m1 = self.mask_of(targets.1);
        let m = gate.matrix();
        let mut amps = self.amps.clone();
        for i in 0..amps.len() {
            if i & m0 == 0 && i & m1 == 0 {
                let idx = [i, i | m1, i | m0, i | m0 | m1];
                let old = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
                for r in 0..4 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..4 {
                        acc += m[r][c] * old[c];
                    }
                    amps[idx[r]] = acc;
                }
            }
        }
        Ok(Ket {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    /// Inner product <self|other>.
    pub fn overlap(&self, other: &Ket) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |<self|other>|^2 -- the success metric for state reconstruction,
    /// insensitive to global phase.
    pub fn fidelity_up_to_phase(&self, other: &Ket) -> Result<f64> {
        Ok(self.overlap(other)?.norm_sqr())
    }

    /// Reorder the register: qubit `j` of the result is qubit `perm[j]` of `self`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Ket> {
        if perm.len() != self.num_qubits {
            return Err(Error::SizeMismatch {
                left: perm.len(),
                right: self.num_qubits,
            });
        }
        let mut seen = vec![false; self.num_qubits];
        for &p in perm {
            self.check_target(p)?;
            if seen[p] {
                return Err(Error::DuplicateTarget(p));
            }
            seen[p] = true;
        }
        let n = self.num_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let mut k = 0usize;
            for (j, &p) in perm.iter().enumerate() {
                if self.bit_of(i, p) == 1 {
                    k |= 1 << (n - 1 - j);
                }
            }
            amps[k] = a;
        }
        Ok(Ket {
            num_qubits: n,
            amps,
        })
    }

    /// If `target` is collapsed (its marginal is 0 or 1 within tolerance),
    /// return the definite bit value.
    pub fn collapsed_bit(&self, target: usize) -> Option<u8> {
        let mask = self.mask_of(target);
        let p1: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if p1 < 1e-9 {
            Some(0)
        } else if (1.0 - p1).abs() < 1e-9 {
            Some(1)
        } else {
            None
        }
    }

    /// Remove a qubit known to be collapsed to |bit>, returning the state of
    /// the remaining register. Panics if the discarded branch carries weight;
    /// callers must only factor out genuinely collapsed qubits.
    pub(crate) fn factor_out_qubit(&self, target: usize, bit: u8) -> Ket {
        assert!(self.num_qubits >= 2);
        let mask = self.mask_of(target);
        let want = if bit == 1 { mask } else { 0 };
        let mut amps = Vec::with_capacity(self.amps.len() / 2);
        let mut residual = 0.0;
        for (i, &a) in self.amps.iter().enumerate() {
            if i & mask == want {
                amps.push(a);
            } else {
                residual += a.norm_sqr();
            }
        }
        assert!(
            residual < 1e-9,
            "factor_out_qubit on an uncollapsed qubit (residual {residual:.3e})"
        );
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Ket {
            num_qubits: self.num_qubits - 1,
            amps,
        }
    }

    /// Remove an ordered qubit pair known to be in the two-qubit state
    /// `pair_amps` (indexed by 2*b0 + b1), returning the remaining register.
    pub(crate) fn factor_out_pair(
        &self,
        targets: (usize, usize),
        pair_amps: &[Complex64; 4],
    ) -> Ket {
        assert!(self.num_qubits >= 3);
        let m0 = self.mask_of(targets.0);
        let m1 = self.mask_of(targets.1);
        let mut amps = Vec::with_capacity(self.amps.len() / 4);
        for i in 0..self.amps.len() {
            if i & m0 == 0 && i & m1 == 0 {
                let idx = [i, i | m1, i | m0, i | m0 | m1];
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..4 {
                    acc += pair_amps[r].conj() * self.amps[idx[r]];
                }
                amps.push(acc);
            }
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        assert!(
            (norm_sq - 1.0).abs() < 1e-9,
            "factor_out_pair on a pair not in the given state (weight {norm_sq:.6})"
        );
        let norm = norm_sq.sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Ket {
            num_qubits: self.num_qubits - 2,
            amps,
        }
    }
}

impl std::fmt::Display for Ket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() < 1e-24 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({:.4}{:+.4}i)|{:0width$b}>",
                a.re,
                a.im,
                i,
                width = self.num_qubits
            )?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
