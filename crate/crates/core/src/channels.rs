//! Channel and secret-state constructors.
//!
//! Every pre-shared entangled channel used by the protocol engines is built
//! here, together with the secret qubit and the |psi0>/|psi1> decomposition
//! accessors the engines rely on. Qubit order for 4-qubit channels is
//! A, B, C, D with A leftmost.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::Ket;

/// Tolerance for exact algebraic identities (normalization, orthogonality).
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// The complex parameter of the secret qubit (|0> + lambda|1>)/sqrt(1+|lambda|^2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecretParam(Complex64);

impl SecretParam {
    pub fn new(lambda: Complex64) -> Result<Self> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::NonFiniteLambda);
        }
        Ok(SecretParam(lambda))
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(Complex64::new(re, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    /// The induced secret state, normalized by construction.
    pub fn state(self) -> Ket {
        secret_state(self)
    }
}

/// (|0> + lambda|1>)/sqrt(1 + |lambda|^2).
pub fn secret_state(p: SecretParam) -> Ket {
    let lambda = p.value();
    let scale = 1.0 / (1.0 + lambda.norm_sqr()).sqrt();
    let amps = [Complex64::new(scale, 0.0), lambda * scale];
    Ket::from_amplitudes(&amps).expect("secret state is normalized")
}

/// The 4-qubit |Omega> channel: (|0000> + |0110> + |1001> - |1111>)/2.
pub fn omega() -> Ket {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    amps[0b0000] = Complex64::new(0.5, 0.0);
    amps[0b0110] = Complex64::new(0.5, 0.0);
    amps[0b1001] = Complex64::new(0.5, 0.0);
    amps[0b1111] = Complex64::new(-0.5, 0.0);
    Ket::from_amplitudes(&amps).expect("omega is normalized")
}

/// The 4-qubit cluster channel: (|0000> + |0011> + |1100> - |1111>)/2.
pub fn cluster4() -> Ket {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    amps[0b0000] = Complex64::new(0.5, 0.0);
    amps[0b0011] = Complex64::new(0.5, 0.0);
    amps[0b1100] = Complex64::new(0.5, 0.0);
    amps[0b1111] = Complex64::new(-0.5, 0.0);
    Ket::from_amplitudes(&amps).expect("cluster4 is normalized")
}

/// Agent-side components of |Omega>: |psi0> = (|000> + |110>)/sqrt(2),
/// |psi1> = (|001> - |111>)/sqrt(2), over qubits B, C, D.
pub fn omega_components() -> (Ket, Ket) {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let psi0 = Ket::from_amplitudes(&[h, z, z, z, z, z, h, z]).expect("normalized");
    let psi1 = Ket::from_amplitudes(&[z, h, z, z, z, z, z, -h]).expect("normalized");
    (psi0, psi1)
}

/// Agent-side components of |C4>: |psi0> = (|000> + |011>)/sqrt(2),
/// |psi1> = (|100> - |111>)/sqrt(2), over qubits B, C, D.
pub fn cluster4_components() -> (Ket, Ket) {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let psi0 = Ket::from_amplitudes(&[h, z, z, h, z, z, z, z]).expect("normalized");
    let psi1 = Ket::from_amplitudes(&[z, z, z, z, h, z, z, -h]).expect("normalized");
    (psi0, psi1)
}

/// Validates the non-maximal coefficients: a^2 + b^2 = 1 and a >= b > 0.
fn check_omega_prime_coeffs(a: f64, b: f64) -> Result<()> {
    let norm_sq = a * a + b * b;
    if (norm_sq - 1.0).abs() > ALGEBRAIC_TOL {
        return Err(Error::NotNormalized(norm_sq));
    }
    if b <= 0.0 || b > a {
        return Err(Error::DegenerateOrdering { a, b });
    }
    Ok(())
}

/// Whether (a, b) sits at the maximal point a = b = 1/sqrt(2), where the
/// channel degenerates to |Omega> and the probabilistic machinery is not
/// needed (the state itself stays valid).
pub fn is_effectively_maximal(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

/// The non-maximally entangled |Omega'> channel of the probabilistic
/// scheme: a|0>_A|psi0> + b|1>_A|psi1> with normalized |psi0>, |psi1>,
/// i.e. amplitudes a/sqrt(2), a/sqrt(2), b/sqrt(2), -b/sqrt(2) at
/// |0000>, |0110>, |1001>, |1111>.
pub fn omega_prime(a: f64, b: f64) -> Result<Ket> {
    check_omega_prime_coeffs(a, b)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    amps[0b0000] = Complex64::new(a * h, 0.0);
    amps[0b0110] = Complex64::new(a * h, 0.0);
    amps[0b1001] = Complex64::new(b * h, 0.0);
    amps[0b1111] = Complex64::new(-b * h, 0.0);
    Ket::from_amplitudes(&amps)
}

/// The generic channel (|0>|psi0> + |1>|psi1>)/sqrt(2) for orthogonal,
/// normalized n-qubit components; orthogonality is what makes the channel
/// entangled.
pub fn generic_channel(psi0: &Ket, psi1: &Ket) -> Result<Ket> {
    if psi0.num_qubits() != psi1.num_qubits() {
        return Err(Error::SizeMismatch {
            left: psi0.num_qubits(),
            right: psi1.num_qubits(),
        });
    }
    let overlap = psi0.overlap(psi1)?.norm();
    if overlap > ALGEBRAIC_TOL {
        return Err(Error::NotOrthogonal { overlap });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let dim = psi0.amps().len();
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * dim];
    for i in 0..dim {
        amps[i] = psi0.amplitude(i) * h;
        amps[dim + i] = psi1.amplitude(i) * h;
    }
    Ket::from_amplitudes(&amps)
}

/// Channel selection carried through configs, transcripts and reports.
///
/// The kind names (`omega`, `cluster4`, `omega-prime`, `generic`) are the
/// canonical strings used by the CLI and config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelSpec {
    Omega,
    Cluster4,
    OmegaPrime { a: f64, b: f64 },
    Generic { psi0: Ket, psi1: Ket },
}

impl ChannelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Omega => "omega",
            ChannelSpec::Cluster4 => "cluster4",
            ChannelSpec::OmegaPrime { .. } => "omega-prime",
            ChannelSpec::Generic { .. } => "generic",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::Omega | ChannelSpec::Cluster4 => Ok(()),
            ChannelSpec::OmegaPrime { a, b } => check_omega_prime_coeffs(*a, *b),
            ChannelSpec::Generic { psi0, psi1 } => generic_channel(psi0, psi1).map(|_| ()),
        }
    }

    /// The channel state itself (qubit order A, B, C, D for the 4-qubit kinds).
    pub fn ket(&self) -> Result<Ket> {
        match self {
            ChannelSpec::Omega => Ok(omega()),
            ChannelSpec::Cluster4 => Ok(cluster4()),
            ChannelSpec::OmegaPrime { a, b } => omega_prime(*a, *b),
            ChannelSpec::Generic { psi0, psi1 } => generic_channel(psi0, psi1),
        }
    }

    pub fn is_maximal_four_qubit(&self) -> bool {
        matches!(self, ChannelSpec::Omega | ChannelSpec::Cluster4)
    }
}

impl std::fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
