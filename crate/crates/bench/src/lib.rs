//! Inputs shared by the benchmarks in `benches/`.

use bgcd_core::fixpoint::iterate_to_fixpoint;
use bgcd_core::gcdsim::{random_odd, seeded_rng};
use bgcd_core::{DensityFunction, TailFunction, TruncationPolicy};

/// The converged tail on `n` nodes.
pub fn limit_tail(n: usize) -> TailFunction {
    iterate_to_fixpoint(n, TruncationPolicy::default(), 1e-10, 200)
        .expect("iteration converges")
        .last
}

/// A smooth positive density of mass 1 on `n` nodes.
pub fn smooth_density(n: usize) -> DensityFunction {
    let h = DensityFunction::sample(n, |x| 1.0 + 0.3 * (3.0 * x).cos()).expect("valid grid");
    h.scaled(1.0 / h.integral()).expect("positive mass")
}

/// `count` pairs of random odd numbers of `bits` bits.
pub fn odd_pairs(count: usize, bits: u32, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| (random_odd(&mut rng, bits), random_odd(&mut rng, bits))).collect()
}
