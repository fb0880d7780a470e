//! The two linear operators of Brent's model.
//!
//! `F` advances a survival function by one subtract-and-shift cycle:
//!
//! ```text
//! F(g)(x) = sum_{k>=1} 2^-k [ g(x/(x + 2^k)) - g(1/(1 + 2^k x)) ]
//! ```
//!
//! and `B2`, its formal derivative, advances a density:
//!
//! ```text
//! B2(h)(x) = sum_{k>=1} (x + 2^k)^-2 h(x/(x + 2^k)) + (1 + 2^k x)^-2 h(1/(1 + 2^k x))
//! ```
//!
//! Both series are truncated after `K` terms and summed from `k = K` down to
//! `k = 1`. Node values are independent, so they are computed in parallel;
//! the per-node summation order is fixed, which makes the result identical to
//! a sequential evaluation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspace::{
    eval_extended_raw, is_uniform_from_first, l1_distance, shape_report, sup_distance,
    DensityFunction, GridFunction, ShapeReport, TailFunction,
};
use crate::moebius::{pow2, MAX_K};

/// Default number of series terms.
pub const DEFAULT_K: u32 = 60;

/// Number of terms kept from the operator series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    k: u32,
}

impl TruncationPolicy {
    pub fn new(k: u32) -> Result<Self> {
        if !(1..=MAX_K).contains(&k) {
            return Err(Error::Parameter(format!("truncation K = {k} outside 1..={MAX_K}")));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `2^-K`, a bound on the omitted tail of `F` for functions with values
    /// in `[0, 1]`.
    pub fn tail_bound(&self) -> f64 {
        1.0 / pow2(self.k)
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { k: DEFAULT_K }
    }
}

#[inline]
fn f_at(x: f64, k_max: u32, g: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for k in (1..=k_max).rev() {
        acc += f_term_at(x, k, &g);
    }
    acc
}

#[inline]
fn f_term_at(x: f64, k: u32, g: impl Fn(f64) -> f64) -> f64 {
    let p = pow2(k);
    (g(x / (x + p)) - g(1.0 / (1.0 + p * x))) / p
}

#[inline]
fn b2_at(x: f64, k_max: u32, h: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for k in (1..=k_max).rev() {
        let p = pow2(k);
        let w1 = 1.0 / (x + p);
        let w2 = 1.0 / (1.0 + p * x);
        acc += w1 * w1 * h(x * w1) + w2 * w2 * h(w2);
    }
    acc
}

/// The `k`-th summand `2^-k [g(mu_k(x)) - g(nu_k(x))]` of `F(g)` at `x`.
pub fn f_term(g: &GridFunction, k: u32, x: f64) -> f64 {
    f_term_at(x, k, |t| g.eval_unchecked(t))
}

/// Truncated series for `F(g)` at every node, with no endpoint adjustment.
/// This is the linear operator itself; [`apply_f`] adds the exact endpoint
/// values of a tail.
pub fn apply_f_linear(g: &GridFunction, policy: TruncationPolicy) -> GridFunction {
    let k_max = policy.k();
    let ys: Vec<f64> = g
        .xs()
        .par_iter()
        .map(|&x| f_at(x, k_max, |t| g.eval_unchecked(t)))
        .collect();
    g.with_values(ys).expect("same grid")
}

/// `F(g)` for a tail function, with `F(g)(0) = 1` and `F(g)(1) = 0` imposed
/// exactly. The truncation error at other nodes is at most `2^-K`.
pub fn apply_f(g: &TailFunction, policy: TruncationPolicy) -> Result<TailFunction> {
    let grid = g.grid();
    let n = grid.len();
    let k_max = policy.k();
    let xs = grid.xs();
    let mut ys: Vec<f64> = xs
        .par_iter()
        .map(|&x| f_at(x, k_max, |t| grid.eval_unchecked(t)))
        .collect();
    ys[0] = 1.0;
    ys[n - 1] = 0.0;
    TailFunction::new(grid.with_values(ys)?, g.tolerance())
}

/// `sup|F(g1) - F(g2)| / sup|g1 - g2|`; bounded by 2.
pub fn operator_norm_ratio(
    g1: &TailFunction,
    g2: &TailFunction,
    policy: TruncationPolicy,
) -> Result<f64> {
    let denom = sup_distance(g1.grid(), g2.grid());
    if denom == 0.0 {
        return Err(Error::DegenerateRatio);
    }
    let f1 = apply_f(g1, policy)?;
    let f2 = apply_f(g2, policy)?;
    Ok(sup_distance(f1.grid(), f2.grid()) / denom)
}

/// `B2(h)` at the nodes of `h`. Arguments below the first node read the
/// first value (constant extension).
pub fn apply_b2(h: &DensityFunction, policy: TruncationPolicy) -> Result<DensityFunction> {
    let ys = apply_b2_signed(h.xs(), h.ys(), policy);
    h.with_values(ys)
}

/// `B2` on arbitrary (possibly signed) nodal values over a density grid
/// `xs` in `(0, 1]`. Used for differences of densities and for assembling
/// the operator matrix.
pub fn apply_b2_signed(xs: &[f64], ys: &[f64], policy: TruncationPolicy) -> Vec<f64> {
    debug_assert_eq!(xs.len(), ys.len());
    let uniform = is_uniform_from_first(xs);
    let k_max = policy.k();
    xs.par_iter()
        .map(|&x| b2_at(x, k_max, |t| eval_extended_raw(xs, ys, uniform, t)))
        .collect()
}

/// `(||B2 h1 - B2 h2||_1, ||h1 - h2||_1)`. The first never exceeds the second
/// beyond discretization error.
pub fn contraction_check(
    h1: &DensityFunction,
    h2: &DensityFunction,
    policy: TruncationPolicy,
) -> Result<(f64, f64)> {
    let before = l1_distance(h1, h2)?;
    let after = l1_distance(&apply_b2(h1, policy)?, &apply_b2(h2, policy)?)?;
    Ok((after, before))
}

/// The checkable surface of the invariant set: endpoint values, monotone
/// decrease and convexity, each within `tolerance`.
pub fn check_k1_surface(g: &GridFunction, tolerance: f64) -> ShapeReport {
    shape_report(g, tolerance)
}
