//! Minimal dense statevector engine.
//!
//! State construction, tensor products, unitary application, Born-rule
//! measurement in the computational and Bell bases, deterministic
//! projection oracles, partial trace, and fidelity. Kets are immutable
//! values and every operation is a pure function of (state, rng), so
//! concurrent protocol runs are safe as long as each run owns its own
//! random stream.

mod density;
mod gates;
mod ket;
mod measure;

pub use density::DensityMatrix2;
pub use gates::{Unitary2, Unitary4, UNITARITY_TOL};
pub use ket::{Ket, MAX_QUBITS};
pub use measure::{BellOutcome, Bit, BELL_OUTCOMES};

#[cfg(test)]
mod tests;
