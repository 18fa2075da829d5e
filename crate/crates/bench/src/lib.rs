//! Fixed inputs shared by the benchmarks in `benches/`.

use jres_core::models::random_perturbation;
use jres_core::spectral::spectral_data;
use jres_core::{Perturbation, Tolerances};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Class sizes exercised by every benchmark group.
pub const CLASSES: [usize; 4] = [2, 6, 12, 20];

/// A reproducible perturbation of class `k`.
pub fn perturbation(k: usize) -> Perturbation {
    random_perturbation(&mut ChaCha8Rng::seed_from_u64(k as u64), k)
}

/// Jost roots of [`perturbation`]`(k)`, with multiplicity.
pub fn roots(k: usize) -> Vec<Complex64> {
    spectral_data(&perturbation(k), &Tolerances::default())
        .expect("forward map on bench input")
        .roots()
        .expanded()
}
