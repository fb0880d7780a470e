//! The iteration `g_{n+1} = F(g_n)` from `g_0(x) = 1 - x`, its limit, and the
//! constant `b = 2 + (1/ln 2) * int_0^1 g_inf(x) / (1 - x) dx`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{
    check_k2, discrete_derivative, l1_distance, sup_distance, DensityFunction, GridFunction,
    TailFunction,
    ITERATE_TOLERANCE,
};
use crate::operators::{apply_f, TruncationPolicy};

/// Iterates with index up to this bound are all kept in the history.
pub const STORED_ITERATES: usize = 50;

/// Published value of the constant.
pub const B_REFERENCE: f64 = 2.83297657;

/// Settings of the high-accuracy reference run.
pub const REFERENCE_GRID: usize = 65537;
pub const REFERENCE_K: u32 = 62;
pub const REFERENCE_TOL: f64 = 1e-12;

/// Record of one run of the iteration.
#[derive(Clone, Debug)]
pub struct IterationHistory {
    /// `g_0, g_1, ...` up to index [`STORED_ITERATES`].
    pub iterates: Vec<TailFunction>,
    /// The most recent iterate (the limit approximation after convergence).
    pub last: TailFunction,
    /// `sup |g_{n+1} - g_n|` for `n = 0, 1, ...`.
    pub sup_deltas: Vec<f64>,
    /// `|| g'_{n+1} - g'_n ||_1`.
    pub l1_derivative_deltas: Vec<f64>,
    /// Index of the first iterate within `tol` of its predecessor.
    pub converged_at: Option<usize>,
    pub policy: TruncationPolicy,
    pub tol: f64,
}

impl IterationHistory {
    pub fn iterations(&self) -> usize {
        self.sup_deltas.len()
    }

    pub fn converged(&self) -> bool {
        self.converged_at.is_some()
    }

    pub fn grid_size(&self) -> usize {
        self.last.len()
    }
}

/// Runs the iteration on a uniform grid until consecutive iterates differ by
/// less than `tol` in the sup norm. Every iterate is checked against the
/// shape conditions and the sandwich bounds.
pub fn iterate_to_fixpoint(
    grid_size: usize,
    policy: TruncationPolicy,
    tol: f64,
    max_iter: usize,
) -> Result<IterationHistory> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::Parameter("max_iter must be at least 1".into()));
    }
    let g0 = TailFunction::initial(grid_size)?.with_tolerance(ITERATE_TOLERANCE)?;
    let mut history = IterationHistory {
        iterates: vec![g0.clone()],
        last: g0,
        sup_deltas: Vec::new(),
        l1_derivative_deltas: Vec::new(),
        converged_at: None,
        policy,
        tol,
    };
    let mut derivative = discrete_derivative(&history.last)?;
    for n in 1..=max_iter {
        let next = apply_f(&history.last, policy)?;
        let k2 = check_k2(next.grid(), ITERATE_TOLERANCE);
        if !k2.member {
            return Err(Error::Shape(format!(
                "iterate {n} leaves the sandwich bounds at x = {} (margin {:e})",
                k2.worst_x, k2.worst_margin
            )));
        }
        let next_derivative = discrete_derivative(&next)?;
        let delta = sup_distance(next.grid(), history.last.grid());
        history.sup_deltas.push(delta);
        history.l1_derivative_deltas.push(l1_distance(&next_derivative, &derivative)?);
        if n <= STORED_ITERATES {
            history.iterates.push(next.clone());
        }
        history.last = next;
        derivative = next_derivative;
        if delta < tol {
            history.converged_at = Some(n);
            return Ok(history);
        }
    }
    let last_delta = history.sup_deltas.last().copied().unwrap_or(f64::NAN);
    Err(Error::NotConverged { iterations: max_iter, last_delta, history: Box::new(history) })
}

/// The constant `b` together with how it was computed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrentConstant {
    pub b: f64,
    pub quadrature_grid: usize,
    /// Integrand value used at `x = 1`, the estimate of `-g'(1)`.
    pub endpoint_limit: f64,
}

/// Trapezoidal quadrature of `g(x)/(1 - x)` on the grid of `g`, with the
/// integrand at `x = 1` replaced by its limit `-g'(1)`.
pub fn compute_b(g: &TailFunction) -> Result<BrentConstant> {
    b_from_grid(g.grid())
}

/// [`compute_b`] without the shape requirements; only `g(1) = 0` is checked.
pub fn b_from_grid(g: &GridFunction) -> Result<BrentConstant> {
    let (xs, ys) = (g.xs(), g.ys());
    let n = xs.len();
    if ys[n - 1].abs() > 1e-12 {
        return Err(Error::SingularEndpoint(ys[n - 1]));
    }
    let (x0, x1, x2) = (xs[n - 3], xs[n - 2], xs[n - 1]);
    let (y0, y1, y2) = (ys[n - 3], ys[n - 2], ys[n - 1]);
    let slope = y0 * (x2 - x1) / ((x0 - x1) * (x0 - x2))
        + y1 * (x2 - x0) / ((x1 - x0) * (x1 - x2))
        + y2 * (2.0 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1));
    let endpoint_limit = -slope;
    let integrand = |i: usize| if i == n - 1 { endpoint_limit } else { ys[i] / (1.0 - xs[i]) };
    let integral: f64 = (0..n - 1)
        .map(|i| 0.5 * (xs[i + 1] - xs[i]) * (integrand(i) + integrand(i + 1)))
        .sum();
    Ok(BrentConstant { b: 2.0 + integral / LN_2, quadrature_grid: n, endpoint_limit })
}

/// `-g'_inf` from a converged history.
pub fn extract_limit_density(history: &IterationHistory) -> Result<DensityFunction> {
    if !history.converged() {
        let last_delta = history.sup_deltas.last().copied().unwrap_or(f64::NAN);
        return Err(Error::NotConverged {
            iterations: history.iterations(),
            last_delta,
            history: Box::new(history.clone()),
        });
    }
    discrete_derivative(&history.last)
}

/// `u_n = || g'_inf - g'_n ||_1` for every stored iterate.
pub fn error_sequence(history: &IterationHistory) -> Result<Vec<f64>> {
    let limit = discrete_derivative(&history.last)?;
    history
        .iterates
        .iter()
        .map(|g| l1_distance(&limit, &discrete_derivative(g)?))
        .collect()
}

/// Geometric mean of `sup_deltas[n+1] / sup_deltas[n]` over `n >= 1`, using
/// only deltas at least `floor`. Below the grid spacing the deltas are
/// dominated by discretization rather than by the operator's spectrum, so
/// callers pass `1 / (grid_size - 1)`. Returns `None` with fewer than two
/// usable deltas.
pub fn contraction_ratio_estimate(sup_deltas: &[f64], floor: f64) -> Option<f64> {
    let usable: Vec<f64> =
        sup_deltas.iter().skip(1).take_while(|&&d| d >= floor).copied().collect();
    if usable.len() < 2 {
        return None;
    }
    let steps = (usable.len() - 1) as f64;
    Some((usable[usable.len() - 1] / usable[0]).powf(1.0 / steps))
}

/// The JSON summary of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixpointSummary {
    pub iterations: usize,
    pub sup_deltas: Vec<f64>,
    pub b: f64,
    pub b_grid: usize,
    pub converged: bool,
    pub contraction_ratio_estimate: Option<f64>,
}

impl FixpointSummary {
    pub fn new(history: &IterationHistory, constant: &BrentConstant) -> Self {
        let floor = 1.0 / (history.grid_size() - 1) as f64;
        Self {
            iterations: history.iterations(),
            sup_deltas: history.sup_deltas.clone(),
            b: constant.b,
            b_grid: constant.quadrature_grid,
            converged: history.converged(),
            contraction_ratio_estimate: contraction_ratio_estimate(&history.sup_deltas, floor),
        }
    }
}
