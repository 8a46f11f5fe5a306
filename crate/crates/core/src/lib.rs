//! Desk-scale simulator and verification harness for hierarchical quantum
//! communication protocols.
//!
//! Three protocol families are implemented over a minimal dense statevector
//! engine:
//!
//! - perfect hierarchical quantum information splitting (HQIS) over the
//!   4-qubit |Omega> and cluster channels, with graded recovery cost per
//!   agent ([`hqis`]);
//! - probabilistic HQIS over the non-maximally entangled |Omega'> channel,
//!   where recovery succeeds exactly when an ancilla measurement yields 0
//!   ([`phqis`]);
//! - hierarchical quantum secret sharing (HQSS), which hardens HQIS with
//!   decoy qubits, sequence permutation and a conjugate-coding eavesdropping
//!   check, plus pluggable adversaries ([`hqss`]).
//!
//! The [`harness`] module adds seeded Monte Carlo batches, exhaustive
//! correction-table verification and reproducible report emission; the
//! `hiqs` CLI is a thin wrapper over it.
//!
//! # Bell-basis convention
//!
//! The channel decompositions verified here fix the naming
//!
//! ```text
//! |psi+-> = (|00> +- |11>)/sqrt(2),   |phi+-> = (|01> +- |10>)/sqrt(2)
//! ```
//!
//! which is the reverse of the most common literature convention. Every
//! table, transcript and report in this crate uses these labels.

// Index loops over 2x2/4x4 matrices read better than iterator chains here.
#![allow(clippy::needless_range_loop)]

pub mod channels;
pub mod error;
pub mod harness;
pub mod hqis;
pub mod hqss;
pub mod phqis;
pub mod qcore;
pub mod rng;

pub use channels::{ChannelSpec, SecretParam};
pub use error::{Error, Result};
pub use hqis::{PauliCorrection, ProtocolTranscript, Receiver};
pub use qcore::{BellOutcome, Bit, DensityMatrix2, Ket, Unitary2, Unitary4};
