//! Error types shared across the simulator.

use thiserror::Error;

/// Errors produced by state construction, protocol engines, and the harness.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("amplitude vector length {0} is not a power of two >= 2")]
    NonPowerOfTwoLength(usize),
    #[error("amplitude vector has zero norm")]
    ZeroNorm,
    #[error("register of {0} qubits exceeds the {max} qubit cap", max = crate::qcore::MAX_QUBITS)]
    RegisterTooLarge(usize),
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),
    #[error("size mismatch: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },
    #[error("projection onto a zero-probability branch")]
    ZeroProbabilityBranch,
    #[error("matrix is not unitary (max |UU^dag - I| entry = {max_deviation:.3e})")]
    NotUnitary { max_deviation: f64 },
    #[error("lambda must be finite")]
    NonFiniteLambda,
    #[error("channel coefficients not normalized: a^2 + b^2 = {0}")]
    NotNormalized(f64),
    #[error("channel coefficients must satisfy a >= b > 0 (got a = {a}, b = {b})")]
    DegenerateOrdering { a: f64, b: f64 },
    #[error("component states are not orthogonal (|<psi0|psi1>| = {overlap:.3e})")]
    NotOrthogonal { overlap: f64 },
    #[error("perfect HQIS requires a maximally entangled channel (omega or cluster4), got {0}")]
    UnsupportedChannelForPerfectPath(String),
    #[error("invalid helper {helper} for this channel/receiver combination")]
    InvalidHelper { helper: String },
    #[error("copy count {0} out of range (1..=3 in full-statevector mode)")]
    CopyCountOutOfRange(usize),
    #[error("invalid config field `{field}`: {message}")]
    InvalidConfig { field: String, message: String },
    #[error("i/o failure: {0}")]
    IoFailure(String),
}

impl Error {
    pub(crate) fn invalid_config(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::IoFailure(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
