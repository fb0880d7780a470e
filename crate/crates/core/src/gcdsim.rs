//! The binary gcd algorithm with cycle accounting, and two Monte Carlo
//! engines: the continuous ratio chain of the model and the integer
//! algorithm on random odd pairs.
//!
//! Both engines split their work into fixed chunks of [`CHUNK`] samples.
//! Chunk `i` draws from ChaCha8 seeded with `seed` on stream `i`, so the
//! output depends on the seed only, never on the number of worker threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{uniform_nodes, GridFunction};

/// Samples per RNG stream.
pub const CHUNK: usize = 1 << 14;

/// Number of cycles after which integer-run ratios are recorded for tails.
pub const TRACKED_CYCLES: usize = 3;

/// Threshold nodes in reported empirical tails.
pub const TAIL_THRESHOLDS: usize = 257;

/// One run of the binary gcd.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleStats {
    pub gcd: u64,
    /// Subtract-and-shift cycles until the odd parts coincide.
    pub cycles: u64,
    /// Cycles plus the final subtraction that yields zero.
    pub subtractions: u64,
    /// Common power of two removed before the cycles.
    pub initial_halvings: u32,
    /// `min/max` of the odd pair after each cycle.
    pub ratio_trace: Vec<f64>,
}

fn ratio(u: u64, v: u64) -> f64 {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    lo as f64 / hi as f64
}

/// Stein's algorithm. Common factors of two are removed first, then the
/// remaining powers of two of each operand; every cycle subtracts the
/// smaller odd number from the larger and shifts the difference until odd.
pub fn binary_gcd(u: u64, v: u64) -> Result<CycleStats> {
    if u == 0 || v == 0 {
        return Err(Error::ZeroInput);
    }
    let k = (u | v).trailing_zeros();
    let mut a = u >> u.trailing_zeros();
    let mut b = v >> v.trailing_zeros();
    let mut trace = Vec::new();
    while a != b {
        if a > b {
            a -= b;
            a >>= a.trailing_zeros();
        } else {
            b -= a;
            b >>= b.trailing_zeros();
        }
        trace.push(ratio(a, b));
    }
    let cycles = trace.len() as u64;
    Ok(CycleStats {
        gcd: a << k,
        cycles,
        subtractions: cycles + 1,
        initial_halvings: k,
        ratio_trace: trace,
    })
}

/// Euclid's algorithm by remainders; the reference for [`binary_gcd`].
pub fn euclid_gcd(mut u: u64, mut v: u64) -> u64 {
    while v != 0 {
        (u, v) = (v, u % v);
    }
    u
}

/// `1 + floor(log2 max(u, v))`, the worst-case subtraction count.
pub fn subtraction_bound(u: u64, v: u64) -> u64 {
    64 - u64::from(u.max(v).leading_zeros())
}

/// A geometric shift count: `P(m) = 2^-m`, `m >= 1`, read off the leading
/// zeros of a random word and capped at 64.
pub fn draw_shift(rng: &mut impl RngCore) -> u32 {
    (rng.next_u64().leading_zeros() + 1).min(64)
}

/// One step of the chain for a given shift `m`: the pair `(1, x)` becomes
/// `(t, x)` with `t = (1 - x) / 2^m`, normalized to `min/max`. Returns `None`
/// when `x = 1` (the difference vanishes and the chain is absorbed).
pub fn model_step_with_shift(x: f64, m: u32) -> Option<f64> {
    if x >= 1.0 {
        return None;
    }
    let t = (1.0 - x) / 2f64.powi(m as i32);
    Some(if t < x { t / x } else { x / t })
}

pub fn model_step(x: f64, rng: &mut impl RngCore) -> Option<f64> {
    let m = draw_shift(rng);
    model_step_with_shift(x, m)
}

/// A uniform draw from the open interval `(0, 1)`.
pub fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn chunks(total: usize) -> Vec<(usize, usize)> {
    (0..total.div_ceil(CHUNK))
        .map(|i| (i, CHUNK.min(total - i * CHUNK)))
        .collect()
}

/// Empirical survival function `P(ratio >= threshold)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalTail {
    pub after_cycles: usize,
    pub n_samples: usize,
    pub thresholds: Vec<f64>,
    pub survival: Vec<f64>,
}

impl EmpiricalTail {
    /// Tail of `sorted` (ascending) at each threshold.
    pub fn from_sorted(sorted: &[f64], thresholds: &[f64], after_cycles: usize) -> Self {
        let n = sorted.len();
        let survival = thresholds
            .iter()
            .map(|&t| {
                if n == 0 {
                    return 0.0;
                }
                let below = sorted.partition_point(|&s| s < t);
                (n - below) as f64 / n as f64
            })
            .collect();
        Self { after_cycles, n_samples: n, thresholds: thresholds.to_vec(), survival }
    }

    /// `max |survival - g|` over the thresholds.
    pub fn sup_distance_to(&self, g: &GridFunction) -> f64 {
        self.thresholds
            .iter()
            .zip(&self.survival)
            .map(|(&t, &s)| (s - g.eval_unchecked(t)).abs())
            .fold(0.0, f64::max)
    }
}

/// Kolmogorov-Smirnov distance between the empirical survival function of
/// `sorted` (ascending) and a continuous survival function `g`: the supremum
/// is attained at a sample, just before or just after its jump.
pub fn ks_distance(sorted: &[f64], g: &GridFunction) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let gs = g.eval_unchecked(s.clamp(0.0, 1.0));
            let at = (n - i as f64) / n;
            let after = (n - i as f64 - 1.0) / n;
            (at - gs).abs().max((after - gs).abs())
        })
        .fold(0.0, f64::max)
}

/// Runs `n_chains` chains for `n_steps` steps from uniform starting ratios.
/// Element `n` of the result holds the sorted states after `n` steps.
/// Absorbed chains are recorded as 0 from then on.
pub fn simulate_model_samples(n_chains: usize, n_steps: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n_chains == 0 {
        return Err(Error::Parameter("need at least one chain".into()));
    }
    let parts: Vec<Vec<Vec<f64>>> = chunks(n_chains)
        .into_par_iter()
        .map(|(index, len)| {
            let mut rng = chunk_rng(seed, index);
            let mut by_step = vec![Vec::with_capacity(len); n_steps + 1];
            for _ in 0..len {
                let mut x = open_unit(&mut rng);
                by_step[0].push(x);
                for step in by_step.iter_mut().skip(1) {
                    x = model_step(x, &mut rng).unwrap_or(0.0);
                    step.push(x);
                }
            }
            by_step
        })
        .collect();
    let mut out = vec![Vec::with_capacity(n_chains); n_steps + 1];
    for part in parts {
        for (dst, src) in out.iter_mut().zip(part) {
            dst.extend(src);
        }
    }
    out.par_iter_mut().for_each(|v| v.sort_unstable_by(f64::total_cmp));
    Ok(out)
}

/// Empirical tails of the chain after `0..=n_steps` steps on `thresholds`.
pub fn simulate_model(
    n_chains: usize,
    n_steps: usize,
    seed: u64,
    thresholds: &[f64],
) -> Result<Vec<EmpiricalTail>> {
    Ok(simulate_model_samples(n_chains, n_steps, seed)?
        .iter()
        .enumerate()
        .map(|(n, s)| EmpiricalTail::from_sorted(s, thresholds, n))
        .collect())
}

/// A random odd number with `bits` bits at most: uniform on the odd values
/// of `[1, 2^bits)`.
pub fn random_odd(rng: &mut impl RngCore, bits: u32) -> u64 {
    (rng.next_u64() >> (64 - bits)) | 1
}

/// Aggregate results of [`simulate_integers`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerReport {
    pub n_pairs: usize,
    pub bit_size: u32,
    pub seed: u64,
    pub mean_cycles: f64,
    /// Mean of `ln(uv)`.
    pub mean_log_uv: f64,
    /// `mean_log_uv / mean_cycles`.
    pub b_implied: f64,
    /// `mean lg(uv) / mean_cycles`.
    pub b_implied_bits: f64,
    /// Mean of `ln(uv) / cycles` over runs with at least one cycle.
    pub mean_log_uv_per_cycle: f64,
    /// `mean_cycles / (mean_log_uv / b_reference)`.
    pub cycle_ratio: f64,
    /// `mean_cycles / (mean lg(uv) / b_reference)`.
    pub cycle_ratio_bits: f64,
    pub b_reference: f64,
    pub gcd_mismatches: usize,
    pub bound_violations: usize,
    /// Largest `subtractions - (1 + floor(lg max(u, v)))` seen.
    pub worst_bound_margin: i64,
    /// Ratios after `0..=3` cycles, among runs that had not yet terminated.
    pub tails: Vec<EmpiricalTail>,
    #[serde(skip)]
    pub sorted_ratios: Vec<Vec<f64>>,
}

impl IntegerReport {
    /// KS distance between the ratios after `n` cycles and `g`.
    pub fn ks_distance(&self, n: usize, g: &GridFunction) -> f64 {
        ks_distance(&self.sorted_ratios[n], g)
    }
}

#[derive(Default)]
struct Partial {
    cycles: f64,
    log_uv: f64,
    log_uv_per_cycle: f64,
    with_cycles: usize,
    mismatches: usize,
    violations: usize,
    worst_margin: i64,
    ratios: Vec<Vec<f64>>,
}

/// Runs the binary gcd on `n_pairs` random odd pairs of at most `bit_size`
/// bits, checking every result against Euclid.
pub fn simulate_integers(
    n_pairs: usize,
    bit_size: u32,
    seed: u64,
    b_reference: f64,
) -> Result<IntegerReport> {
    if !(16..=64).contains(&bit_size) {
        return Err(Error::Parameter(format!("bit size {bit_size} outside 16..=64")));
    }
    if n_pairs == 0 {
        return Err(Error::Parameter("need at least one pair".into()));
    }
    let parts: Vec<Partial> = chunks(n_pairs)
        .into_par_iter()
        .map(|(index, len)| {
            let mut rng = chunk_rng(seed, index);
            let mut p = Partial {
                ratios: vec![Vec::new(); TRACKED_CYCLES + 1],
                worst_margin: i64::MIN,
                ..Partial::default()
            };
            for _ in 0..len {
                let u = random_odd(&mut rng, bit_size);
                let v = random_odd(&mut rng, bit_size);
                let stats = binary_gcd(u, v).expect("odd inputs are nonzero");
                if stats.gcd != euclid_gcd(u, v) {
                    p.mismatches += 1;
                }
                let margin = stats.subtractions as i64 - subtraction_bound(u, v) as i64;
                p.worst_margin = p.worst_margin.max(margin);
                if margin > 0 {
                    p.violations += 1;
                }
                let log_uv = (u as f64).ln() + (v as f64).ln();
                p.cycles += stats.cycles as f64;
                p.log_uv += log_uv;
                if stats.cycles > 0 {
                    p.log_uv_per_cycle += log_uv / stats.cycles as f64;
                    p.with_cycles += 1;
                }
                p.ratios[0].push(ratio(u, v));
                for (n, &r) in stats.ratio_trace.iter().take(TRACKED_CYCLES).enumerate() {
                    // The trace value after the final cycle is 1 (equal pair);
                    // such runs have terminated and are excluded.
                    if (n as u64) + 1 < stats.cycles {
                        p.ratios[n + 1].push(r);
                    }
                }
            }
            p
        })
        .collect();

    let mut total = Partial {
        ratios: vec![Vec::new(); TRACKED_CYCLES + 1],
        worst_margin: i64::MIN,
        ..Partial::default()
    };
    for p in parts {
        total.cycles += p.cycles;
        total.log_uv += p.log_uv;
        total.log_uv_per_cycle += p.log_uv_per_cycle;
        total.with_cycles += p.with_cycles;
        total.mismatches += p.mismatches;
        total.violations += p.violations;
        total.worst_margin = total.worst_margin.max(p.worst_margin);
        for (dst, src) in total.ratios.iter_mut().zip(p.ratios) {
            dst.extend(src);
        }
    }
    total.ratios.par_iter_mut().for_each(|v| v.sort_unstable_by(f64::total_cmp));

    let n = n_pairs as f64;
    let mean_cycles = total.cycles / n;
    let mean_log_uv = total.log_uv / n;
    let mean_lg_uv = mean_log_uv / std::f64::consts::LN_2;
    let thresholds = uniform_nodes(TAIL_THRESHOLDS)?;
    let tails = total
        .ratios
        .iter()
        .enumerate()
        .map(|(k, s)| EmpiricalTail::from_sorted(s, &thresholds, k))
        .collect();
    Ok(IntegerReport {
        n_pairs,
        bit_size,
        seed,
        mean_cycles,
        mean_log_uv,
        b_implied: mean_log_uv / mean_cycles,
        b_implied_bits: mean_lg_uv / mean_cycles,
        mean_log_uv_per_cycle: total.log_uv_per_cycle / total.with_cycles.max(1) as f64,
        cycle_ratio: mean_cycles / (mean_log_uv / b_reference),
        cycle_ratio_bits: mean_cycles / (mean_lg_uv / b_reference),
        b_reference,
        gcd_mismatches: total.mismatches,
        bound_violations: total.violations,
        worst_bound_margin: total.worst_margin,
        tails,
        sorted_ratios: total.ratios,
    })
}

/// Draws `n` values with [`draw_shift`]; exposed for distribution tests.
pub fn shift_histogram(n: usize, seed: u64, max_m: u32) -> Vec<usize> {
    let mut rng = chunk_rng(seed, 0);
    let mut counts = vec![0; max_m as usize + 1];
    for _ in 0..n {
        let m = draw_shift(&mut rng).min(max_m);
        counts[m as usize] += 1;
    }
    counts
}

/// A generator for callers that need the same stream layout as the
/// simulators (chunk `0` of `seed`).
pub fn seeded_rng(seed: u64) -> impl Rng {
    chunk_rng(seed, 0)
}
