//! The harmonic sum `S(x) = sum_{k>=1} 2^-k / (1 + 2^k x)` and its closed
//! form on `(0, 1]`:
//!
//! ```text
//! S(x) = 1 + x lg x + x P(lg x) + x/2 - sum_{k>=2} (-1)^k 2^(k-1)/(2^(k-1) - 1) x^k
//! P(y) = (2 pi / ln 2) sum_{k>=1} sin(2 pi k y) / sinh(2 k pi^2 / ln 2)
//! ```
//!
//! `P` is 1-periodic, odd and below `8e-12` in absolute value.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::moebius::pow2;

/// `(2 pi / ln 2) * 4 / (exp(2 pi^2 / ln 2) - 4)`, a bound on `|P|`.
pub fn p_bound_geometric() -> f64 {
    2.0 * PI / LN_2 * 4.0 / ((2.0 * PI * PI / LN_2).exp() - 4.0)
}

/// The sharper bound on `|P|` found in the literature.
pub const P_BOUND_SHARP: f64 = 8e-12;

/// Terms of `P` needed for full double precision.
pub const DEFAULT_K_P: u32 = 3;
pub const DEFAULT_K_LHS: u32 = 60;
pub const DEFAULT_K_ALT: u32 = 200;

/// `sum_{k=1..K} 2^-k / (1 + 2^k x)`, smallest term first. The omitted tail
/// is below `2^-K`.
pub fn lhs_sum(x: f64, k: u32) -> f64 {
    (1..=k.min(1023)).rev().map(|k| {
        let p = pow2(k);
        1.0 / (p * (1.0 + p * x))
    }).sum()
}

/// Truncated Fourier series of `P`.
pub fn p_eval(y: f64, k_p: u32) -> f64 {
    let frac = y - y.floor();
    let mut acc = 0.0;
    for k in (1..=k_p).rev() {
        let kf = k as f64;
        acc += (2.0 * PI * kf * frac).sin() / (2.0 * kf * PI * PI / LN_2).sinh();
    }
    2.0 * PI / LN_2 * acc
}

/// The literal partial sum `sum_{k=2..K} (-1)^k 2^(k-1)/(2^(k-1) - 1) x^k`.
/// Consecutive partial sums straddle the limit for `0 < x < 1`.
pub fn alternating_partial_sum(x: f64, k_alt: u32) -> f64 {
    let mut acc = 0.0;
    let mut xk = x;
    for k in 2..=k_alt.max(1) {
        xk *= x;
        let q = pow2(k - 1);
        let term = q / (q - 1.0) * xk;
        acc += if k % 2 == 0 { term } else { -term };
    }
    acc
}

/// The alternating sum in closed form plus a fast series:
/// `x^2/(1 + x) + sum_{k=2..K} (-1)^k x^k / (2^(k-1) - 1)`.
///
/// The second series has terms below `(x/2)^k`, so `K = 60` already reaches
/// rounding level on all of `[0, 1]`. At `x = 1` the literal series diverges
/// and this form gives its Abel sum.
pub fn alternating_sum(x: f64, k_alt: u32) -> f64 {
    let mut fast = 0.0;
    for k in (2..=k_alt.clamp(2, 1023)).rev() {
        let term = x.powi(k as i32) / (pow2(k - 1) - 1.0);
        fast += if k % 2 == 0 { term } else { -term };
    }
    x * x / (1.0 + x) + fast
}

/// Right side of the identity at `x` in `[0, 1]`; `1` at `x = 0`.
pub fn rhs_identity(x: f64, k_p: u32, k_alt: u32) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let lg = x.log2();
    1.0 + x * lg + x * p_eval(lg, k_p) + 0.5 * x - alternating_sum(x, k_alt)
}

/// `sum_{k>=1} 2^-k x / (x + 2^k) = sum_{j>=0} (-1)^j x^(j+1) / (2^(j+2) - 1)`,
/// the second half of `g_1`.
fn reflected_sum(x: f64, terms: u32) -> f64 {
    let mut acc = 0.0;
    for j in (0..terms.min(1020)).rev() {
        let term = x.powi(j as i32 + 1) / (pow2(j + 2) - 1.0);
        acc += if j % 2 == 0 { term } else { -term };
    }
    acc
}

/// `g_1(x) = S(x) - S(1/x)` with `S(x)` taken from the closed form.
pub fn g1_closed_form(x: f64) -> f64 {
    rhs_identity(x, DEFAULT_K_P, DEFAULT_K_ALT) - reflected_sum(x, 120)
}

/// Both sides of the identity at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinEvaluation {
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub p_value: f64,
    /// `(K_lhs, K_P, K_alt)`.
    pub terms_used: (u32, u32, u32),
}

impl MellinEvaluation {
    pub fn new(x: f64, k_lhs: u32, k_p: u32, k_alt: u32) -> Self {
        let p_value = if x > 0.0 { p_eval(x.log2(), k_p) } else { 0.0 };
        Self {
            x,
            lhs: lhs_sum(x, k_lhs),
            rhs: rhs_identity(x, k_p, k_alt),
            p_value,
            terms_used: (k_lhs, k_p, k_alt),
        }
    }

    pub fn at(x: f64) -> Self {
        Self::new(x, DEFAULT_K_LHS, DEFAULT_K_P, DEFAULT_K_ALT)
    }

    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    /// Truncation bound for the residual: the `S` tail `2^-K_lhs`, the first
    /// omitted fast-series term, the first omitted Fourier term, and rounding.
    pub fn truncation_bound(&self) -> f64 {
        let (k_lhs, k_p, k_alt) = self.terms_used;
        let p_tail = 2.0 * PI / LN_2 * self.x
            / (2.0 * (k_p + 1) as f64 * PI * PI / LN_2).sinh();
        1.0 / pow2(k_lhs) + self.x.powi(k_alt as i32 + 1) / pow2(k_alt) + p_tail + 1e-14
    }
}

/// `n` points evenly spaced in `(lo, hi]`.
pub fn x_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}
