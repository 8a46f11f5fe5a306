//! Seeded, splittable random streams.
//!
//! A single root seed is expanded into per-trial streams by a counter-based
//! split, so trial k of a batch is reproducible in isolation and trials can
//! run concurrently without sharing state.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The random source used throughout the simulator; ChaCha output is
/// portable, so identical seeds produce identical transcripts everywhere.
pub type RandomSource = ChaCha8Rng;

/// Root stream for a scenario seed.
pub fn root_rng(seed: u64) -> RandomSource {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> RandomSource {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A random secret parameter with Re and Im uniform in [-2, 2].
pub fn random_lambda<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0))
}
