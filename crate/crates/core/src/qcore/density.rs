//! Single-qubit reduced density matrices via partial trace.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcore::ket::Ket;

/// 2x2 Hermitian, unit-trace density matrix of one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix2 {
    m: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    pub(crate) fn from_entries(m: [[Complex64; 2]; 2]) -> Self {
        DensityMatrix2 { m }
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Eigenvalues of the Hermitian 2x2 matrix, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let half_tr = 0.5 * (self.m[0][0].re + self.m[1][1].re);
        let det = (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).re;
        let disc = (half_tr * half_tr - det).max(0.0).sqrt();
        [half_tr - disc, half_tr + disc]
    }

    /// Largest entry-wise deviation from the maximally mixed state I/2.
    pub fn deviation_from_mixed(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let target = if r == c { 0.5 } else { 0.0 };
                dev = dev.max((self.m[r][c] - target).norm());
            }
        }
        dev
    }

    /// Largest entry-wise deviation from another density matrix.
    pub fn max_abs_diff(&self, other: &DensityMatrix2) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                dev = dev.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        dev
    }

    /// <psi| rho |psi>: fidelity of this (possibly mixed) qubit against a
    /// pure single-qubit target.
    pub fn fidelity_against(&self, target: &Ket) -> Result<f64> {
        target.check_target(0)?;
        let a = [target.amplitude(0), target.amplitude(1)];
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..2 {
            for c in 0..2 {
                acc += a[r].conj() * self.m[r][c] * a[c];
            }
        }
        Ok(acc.re)
    }

    /// Principal eigenvalue and its eigenvector. For a pure marginal the
    /// eigenvalue is 1 and the vector is the qubit's state.
    pub fn principal_component(&self) -> (f64, Ket) {
        let p = self.m[0][0].re;
        let q = self.m[1][1].re;
        let c = self.m[0][1];
        let half_diff = 0.5 * (p - q);
        let value = 0.5 * (p + q) + (half_diff * half_diff + c.norm_sqr()).sqrt();
        let vec = if c.norm() < 1e-15 {
            if p >= q {
                Ket::zero()
            } else {
                Ket::one()
            }
        } else {
            Ket::from_amplitudes(&[c, Complex64::new(value - p, 0.0)])
                .expect("eigenvector has nonzero norm")
        };
        (value, vec)
    }

    /// Checks Hermiticity, unit trace and eigenvalue bounds at `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let herm = (self.m[0][1] - self.m[1][0].conj()).norm() <= tol
            && self.m[0][0].im.abs() <= tol
            && self.m[1][1].im.abs() <= tol;
        let trace_ok = (self.trace() - Complex64::new(1.0, 0.0)).norm() <= tol;
        let [lo, hi] = self.eigenvalues();
        herm && trace_ok && lo >= -tol && hi <= 1.0 + tol
    }
}

impl Ket {
    /// Partial trace over every qubit except `keep`.
    pub fn reduced_density_1q(&self, keep: usize) -> Result<DensityMatrix2> {
        self.check_target(keep)?;
        let mask = self.mask_of(keep);
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, &a) in self.amps().iter().enumerate() {
            if i & mask != 0 {
                continue;
            }
            let j = i | mask;
            let b = self.amplitude(j);
            m[0][0] += a * a.conj();
            m[0][1] += a * b.conj();
            m[1][0] += b * a.conj();
            m[1][1] += b * b.conj();
        }
        Ok(DensityMatrix2::from_entries(m))
    }
}
