//! Small dense unitaries with a construction-time unitarity check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constructing a unitary with max |UU^dag - I| above this is rejected.
pub const UNITARITY_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Unitary2 {
    m: [[Complex64; 2]; 2],
}

impl Unitary2 {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let mut dev: f64 = 0.0;
        for r in 0..2 {
            for cidx in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += m[r][k] * m[cidx][k].conj();
                }
                let target = if r == cidx { 1.0 } else { 0.0 };
                dev = dev.max((acc - target).norm());
            }
        }
        if dev > UNITARITY_TOL {
            return Err(Error::NotUnitary { max_deviation: dev });
        }
        Ok(Unitary2 { m })
    }

    pub fn identity() -> Self {
        Unitary2 {
            m: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        }
    }

    pub fn pauli_x() -> Self {
        Unitary2 {
            m: [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        }
    }

    pub fn pauli_y() -> Self {
        Unitary2 {
            m: [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        }
    }

    pub fn pauli_z() -> Self {
        Unitary2 {
            m: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        }
    }

    /// X * Z: Z is applied first, then X.
    pub fn xz() -> Self {
        Unitary2 {
            m: [[c(0.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        }
    }

    /// i * Y, which equals -X*Z; kept as its own matrix exactly as named.
    pub fn i_y() -> Self {
        Unitary2 {
            m: [[c(0.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]],
        }
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Unitary2 {
            m: [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        }
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    /// Matrix product self * other (other acts first).
    pub fn mul(&self, other: &Unitary2) -> Unitary2 {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for cidx in 0..2 {
                for k in 0..2 {
                    m[r][cidx] += self.m[r][k] * other.m[k][cidx];
                }
            }
        }
        Unitary2 { m }
    }

    pub fn adjoint(&self) -> Unitary2 {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for cidx in 0..2 {
                m[r][cidx] = self.m[cidx][r].conj();
            }
        }
        Unitary2 { m }
    }
}

/// 4x4 unitary matrix acting on an ordered qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Unitary4 {
    m: [[Complex64; 4]; 4],
}

impl Unitary4 {
    pub fn new(m: [[Complex64; 4]; 4]) -> Result<Self> {
        let mut dev: f64 = 0.0;
        for r in 0..4 {
            for cidx in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += m[r][k] * m[cidx][k].conj();
                }
                let target = if r == cidx { 1.0 } else { 0.0 };
                dev = dev.max((acc - target).norm());
            }
        }
        if dev > UNITARITY_TOL {
            return Err(Error::NotUnitary { max_deviation: dev });
        }
        Ok(Unitary4 { m })
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    /// Kronecker product a (x) b: a acts on the first (leftmost) qubit.
    pub fn kron(a: &Unitary2, b: &Unitary2) -> Unitary4 {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for cidx in 0..4 {
                m[r][cidx] = a.m[r >> 1][cidx >> 1] * b.m[r & 1][cidx & 1];
            }
        }
        Unitary4 { m }
    }

    /// Matrix product self * other (other acts first).
    pub fn mul(&self, other: &Unitary4) -> Unitary4 {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for cidx in 0..4 {
                for k in 0..4 {
                    m[r][cidx] += self.m[r][k] * other.m[k][cidx];
                }
            }
        }
        Unitary4 { m }
    }

    pub fn adjoint(&self) -> Unitary4 {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for cidx in 0..4 {
                m[r][cidx] = self.m[cidx][r].conj();
            }
        }
        Unitary4 { m }
    }
}
