//! Real functions on `[0, 1]` carried by their values on a grid.
//!
//! Every function in this crate is represented by samples at ascending nodes
//! and evaluated between nodes by piecewise-linear interpolation. That rule
//! keeps monotone samples monotone and convex samples convex, which is what
//! the shape checks on tail functions rely on.
//!
//! Three carriers are provided:
//!
//! * [`GridFunction`]: samples on a grid spanning `[0, 1]`.
//! * [`TailFunction`]: a grid function with survival-function shape
//!   (`g(0) = 1`, `g(1) = 0`, nonincreasing, convex) checked at construction.
//! * [`DensityFunction`]: nonnegative samples on `(eps, 1]`, where `eps` is the
//!   first node. Below the first node a density is extended by its first
//!   value; integrals include that cell.

use crate::error::{Error, Result};

/// Default number of grid nodes (spacing `2^-12`).
pub const DEFAULT_GRID_SIZE: usize = 4097;

/// Shape-check tolerance for functions given in closed form.
pub const ANALYTIC_TOLERANCE: f64 = 1e-9;

/// Shape-check tolerance for iterated functions.
pub const ITERATE_TOLERANCE: f64 = 1e-6;

/// `n` equally spaced nodes from 0 to 1 inclusive.
pub fn uniform_nodes(n: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::Grid(format!("need at least 3 nodes, got {n}")));
    }
    let last = (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| i as f64 / last).collect();
    xs[n - 1] = 1.0;
    Ok(xs)
}

fn is_uniform(xs: &[f64]) -> bool {
    let last = (xs.len() - 1) as f64;
    xs.iter()
        .enumerate()
        .all(|(i, &x)| (x - i as f64 / last).abs() <= 1e-15)
}

/// Index `j` such that `xs[j] <= x <= xs[j + 1]`, for `x` inside the grid.
#[inline]
pub(crate) fn bracket(xs: &[f64], uniform: bool, x: f64) -> usize {
    let n = xs.len();
    if uniform {
        let span = xs[n - 1] - xs[0];
        let guess = ((x - xs[0]) / span * (n - 1) as f64) as usize;
        let mut j = guess.min(n - 2);
        while j > 0 && xs[j] > x {
            j -= 1;
        }
        while j < n - 2 && xs[j + 1] < x {
            j += 1;
        }
        j
    } else {
        xs.partition_point(|&node| node <= x).clamp(1, n - 1) - 1
    }
}

#[inline]
fn lerp(xs: &[f64], ys: &[f64], j: usize, x: f64) -> f64 {
    let (x0, x1) = (xs[j], xs[j + 1]);
    if x == x0 {
        return ys[j];
    }
    if x == x1 {
        return ys[j + 1];
    }
    let t = (x - x0) / (x1 - x0);
    ys[j] + (ys[j + 1] - ys[j]) * t
}

/// Trapezoidal weights on `xs`, plus the cell `[0, xs[0]]` carried by the
/// first node (constant extension). For a grid starting at 0 the extra cell
/// has zero width.
pub fn quadrature_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![0.0; n];
    w[0] = xs[0];
    for i in 0..n - 1 {
        let half = 0.5 * (xs[i + 1] - xs[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    w
}

/// Samples of a real function on a grid spanning `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
    uniform: bool,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Grid(format!(
                "{} nodes but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 3 {
            return Err(Error::Grid(format!("need at least 3 nodes, got {}", xs.len())));
        }
        if xs[0] != 0.0 || xs[xs.len() - 1] != 1.0 {
            return Err(Error::Grid("grid must start at 0 and end at 1".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("nodes must be strictly increasing".into()));
        }
        if let Some(y) = ys.iter().find(|y| !y.is_finite()) {
            return Err(Error::Grid(format!("non-finite value {y}")));
        }
        let uniform = is_uniform(&xs);
        Ok(Self { xs, ys, uniform })
    }

    /// Samples `f` on `n` uniform nodes.
    pub fn sample(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let xs = uniform_nodes(n)?;
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ys)
    }

    /// Same grid, new values.
    pub fn with_values(&self, ys: Vec<f64>) -> Result<Self> {
        if ys.len() != self.xs.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(y) = ys.iter().find(|y| !y.is_finite()) {
            return Err(Error::Grid(format!("non-finite value {y}")));
        }
        Ok(Self { xs: self.xs.clone(), ys, uniform: self.uniform })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.xs == other.xs
    }

    /// Piecewise-linear interpolant at `x`; exact at nodes.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain { value: x, lo: 0.0, hi: 1.0 });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Interpolant at `x` already known to lie in `[0, 1]`.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        let j = bracket(&self.xs, self.uniform, x);
        lerp(&self.xs, &self.ys, j, x)
    }

    /// Trapezoidal integral over `[0, 1]`.
    pub fn integral(&self) -> f64 {
        quadrature_weights(&self.xs)
            .iter()
            .zip(&self.ys)
            .map(|(w, y)| w * y)
            .sum()
    }
}

/// `max |f - g|` over the union of both grids.
pub fn sup_distance(f: &GridFunction, g: &GridFunction) -> f64 {
    if f.same_grid(g) {
        return f
            .ys
            .iter()
            .zip(&g.ys)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
    }
    f.xs
        .iter()
        .chain(&g.xs)
        .map(|&x| (f.eval_unchecked(x) - g.eval_unchecked(x)).abs())
        .fold(0.0, f64::max)
}

/// `max |g(x) - g(y)| / |x - y|^exponent` over all pairs of nodes.
pub fn holder_seminorm(g: &GridFunction, exponent: f64) -> f64 {
    let (xs, ys) = (&g.xs, &g.ys);
    let mut best = 0.0_f64;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let q = (ys[j] - ys[i]).abs() / (xs[j] - xs[i]).powf(exponent);
            best = best.max(q);
        }
    }
    best
}

/// Lower edge of the sandwich `1 + (3/2) x log2 x - 5x <= g(x) <= 1 - x`,
/// taking its limit 1 at `x = 0`.
pub fn k2_lower_bound(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        1.0 + 1.5 * x * x.log2() - 5.0 * x
    }
}

/// Result of testing the sandwich bounds at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct K2Report {
    pub member: bool,
    /// Smallest signed distance to either bound; negative means a violation.
    pub worst_margin: f64,
    pub worst_x: f64,
}

/// Checks `1 + (3/2) x log2 x - 5x <= g(x) <= 1 - x` at every node, allowing
/// violations up to `tolerance`.
pub fn check_k2(g: &GridFunction, tolerance: f64) -> K2Report {
    let mut worst_margin = f64::INFINITY;
    let mut worst_x = 0.0;
    for (&x, &y) in g.xs.iter().zip(&g.ys) {
        let margin = (y - k2_lower_bound(x)).min(1.0 - x - y);
        if margin < worst_margin {
            worst_margin = margin;
            worst_x = x;
        }
    }
    K2Report { member: worst_margin >= -tolerance, worst_margin, worst_x }
}

/// Shape diagnostics for a candidate tail function.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeReport {
    pub endpoints_ok: bool,
    pub monotone_ok: bool,
    pub convex_ok: bool,
    /// Largest increase between consecutive nodes.
    pub max_increase: f64,
    /// Most negative second divided difference scaled to a unit step.
    pub min_second_difference: f64,
}

impl ShapeReport {
    pub fn ok(&self) -> bool {
        self.endpoints_ok && self.monotone_ok && self.convex_ok
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.endpoints_ok {
            parts.push("endpoint values are not 1 and 0".to_string());
        }
        if !self.monotone_ok {
            parts.push(format!("increases by {:e}", self.max_increase));
        }
        if !self.convex_ok {
            parts.push(format!("second difference {:e}", self.min_second_difference));
        }
        parts.join("; ")
    }
}

/// Endpoint, monotonicity and discrete convexity checks within `tolerance`.
pub fn shape_report(g: &GridFunction, tolerance: f64) -> ShapeReport {
    let (xs, ys) = (&g.xs, &g.ys);
    let n = ys.len();
    let endpoints_ok = (ys[0] - 1.0).abs() <= tolerance && ys[n - 1].abs() <= tolerance;
    let max_increase = ys.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    // Second differences on a nonuniform grid: slope change between adjacent
    // cells, which is what convexity of the interpolant requires.
    let min_second_difference = (1..n - 1)
        .map(|i| {
            let left = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            let right = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
            (right - left) * 0.5 * (xs[i + 1] - xs[i - 1])
        })
        .fold(f64::INFINITY, f64::min);
    ShapeReport {
        endpoints_ok,
        monotone_ok: max_increase <= tolerance,
        convex_ok: min_second_difference >= -tolerance,
        max_increase,
        min_second_difference,
    }
}

/// A grid function with the shape of a survival function.
#[derive(Clone, Debug, PartialEq)]
pub struct TailFunction {
    grid: GridFunction,
    tolerance: f64,
}

impl TailFunction {
    pub fn new(grid: GridFunction, tolerance: f64) -> Result<Self> {
        if !(tolerance >= 0.0) {
            return Err(Error::Parameter(format!("tolerance {tolerance} must be nonnegative")));
        }
        let report = shape_report(&grid, tolerance);
        if !report.ok() {
            return Err(Error::Shape(report.describe()));
        }
        Ok(Self { grid, tolerance })
    }

    /// The starting tail `g_0(x) = 1 - x` on `n` uniform nodes.
    pub fn initial(n: usize) -> Result<Self> {
        Self::new(GridFunction::sample(n, |x| 1.0 - x)?, ANALYTIC_TOLERANCE)
    }

    pub fn grid(&self) -> &GridFunction {
        &self.grid
    }

    pub fn into_grid(self) -> GridFunction {
        self.grid
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        let report = shape_report(&self.grid, tolerance);
        if !report.ok() {
            return Err(Error::Shape(report.describe()));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.grid.eval(x)
    }

    pub fn xs(&self) -> &[f64] {
        self.grid.xs()
    }

    pub fn ys(&self) -> &[f64] {
        self.grid.ys()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// Nonnegative samples on `(eps, 1]` with `eps = xs[0] > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
    uniform: bool,
}

impl DensityFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Grid(format!(
                "{} nodes but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::Grid(format!("need at least 2 nodes, got {}", xs.len())));
        }
        if !(xs[0] > 0.0) || xs[xs.len() - 1] != 1.0 {
            return Err(Error::Grid("density grid must lie in (0, 1] and end at 1".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("nodes must be strictly increasing".into()));
        }
        if let Some((x, y)) = xs.iter().zip(&ys).find(|(_, y)| !(**y >= 0.0) || !y.is_finite()) {
            return Err(Error::NegativeDensity { x: *x, value: *y });
        }
        let uniform = is_uniform_from_first(&xs);
        Ok(Self { xs, ys, uniform })
    }

    /// Samples `f` at the nodes `i / (n - 1)`, `i = 1..n`, of an `n`-node
    /// uniform grid (the node at 0 is excluded).
    pub fn sample(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let xs = uniform_nodes(n)?.split_off(1);
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ys)
    }

    pub fn with_values(&self, ys: Vec<f64>) -> Result<Self> {
        if ys.len() != self.xs.len() {
            return Err(Error::GridMismatch);
        }
        Self::new(self.xs.clone(), ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Width of the excluded cell `[0, eps)`.
    pub fn eps(&self) -> f64 {
        self.xs[0]
    }

    pub fn same_grid(&self, other: &DensityFunction) -> bool {
        self.xs == other.xs
    }

    /// Value at `x` in `[0, 1]`: the first sample below the first node,
    /// linear interpolation elsewhere.
    #[inline]
    pub fn eval_extended(&self, x: f64) -> f64 {
        eval_extended_raw(&self.xs, &self.ys, self.uniform, x)
    }

    /// Mass of the represented function: trapezoid on the grid plus the
    /// constant cell below the first node.
    pub fn integral(&self) -> f64 {
        weighted_sum(&quadrature_weights(&self.xs), &self.ys, |y| y)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.with_values(self.ys.iter().map(|y| y * factor).collect())
    }
}

/// Constant-below-first-node interpolation on raw slices; `ys` may be signed.
#[inline]
pub(crate) fn eval_extended_raw(xs: &[f64], ys: &[f64], uniform: bool, x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let j = bracket(xs, uniform, x);
    lerp(xs, ys, j, x)
}

pub(crate) fn is_uniform_from_first(xs: &[f64]) -> bool {
    let h = xs[0];
    xs.iter()
        .enumerate()
        .all(|(i, &x)| (x - (i + 1) as f64 * h).abs() <= 1e-15)
}

fn weighted_sum(w: &[f64], ys: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    w.iter().zip(ys).map(|(w, &y)| w * f(y)).sum()
}

/// `L1` distance between two densities on the same grid, using the same
/// quadrature as [`DensityFunction::integral`].
pub fn l1_distance(f: &DensityFunction, g: &DensityFunction) -> Result<f64> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    Ok(l1_norm_of_difference(&f.xs, &f.ys, &g.ys))
}

pub(crate) fn l1_norm_of_difference(xs: &[f64], a: &[f64], b: &[f64]) -> f64 {
    quadrature_weights(xs)
        .iter()
        .zip(a.iter().zip(b))
        .map(|(w, (p, q))| w * (p - q).abs())
        .sum()
}

/// `-g'` at the nodes of `g` other than 0: central differences inside, a
/// three-point one-sided difference at 1. Slightly negative values (within
/// the tail's tolerance, or rounding) are clamped to 0.
pub fn discrete_derivative(g: &TailFunction) -> Result<DensityFunction> {
    let (xs, ys) = (g.xs(), g.ys());
    let n = xs.len();
    if n < 3 {
        return Err(Error::Grid(format!("need at least 3 nodes, got {n}")));
    }
    let mut out = Vec::with_capacity(n - 1);
    for i in 1..n - 1 {
        out.push(-(ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]));
    }
    // Derivative of the quadratic through the last three nodes, at x = 1.
    let (x0, x1, x2) = (xs[n - 3], xs[n - 2], xs[n - 1]);
    let (y0, y1, y2) = (ys[n - 3], ys[n - 2], ys[n - 1]);
    let d = y0 * (x2 - x1) / ((x0 - x1) * (x0 - x2))
        + y1 * (x2 - x0) / ((x1 - x0) * (x1 - x2))
        + y2 * (2.0 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1));
    out.push(-d);
    for v in &mut out {
        *v = v.max(0.0);
    }
    DensityFunction::new(xs[1..].to_vec(), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> GridFunction {
        GridFunction::sample(4097, |x| 1.0 - x).unwrap()
    }

    #[test]
    fn eval_two_segment_line() {
        let f = GridFunction::new(vec![0.0, 0.5, 1.0], vec![1.0, 0.5, 0.0]).unwrap();
        assert_eq!(f.eval(0.25).unwrap(), 0.75);
        assert_eq!(line().eval(0.5).unwrap(), 0.5);
    }

    #[test]
    fn eval_rejects_outside_domain() {
        assert!(matches!(line().eval(1.5), Err(Error::Domain { .. })));
        assert!(line().eval(-1e-9).is_err());
    }

    #[test]
    fn eval_square_at_midpoints_within_interpolation_bound() {
        let f = GridFunction::sample(257, |x| x * x).unwrap();
        let h = 1.0 / 256.0;
        for i in 0..256 {
            let x = (i as f64 + 0.5) * h;
            let err = (f.eval(x).unwrap() - x * x).abs();
            // max |f''| = 2, so the bound is 2 h^2 / 8.
            assert!(err <= h * h / 4.0 + 1e-16, "x={x} err={err}");
        }
    }

    #[test]
    fn grid_validation() {
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(GridFunction::new(vec![0.0, 0.7, 0.5, 1.0], vec![0.0; 4]).is_err());
        assert!(GridFunction::new(vec![0.1, 0.5, 1.0], vec![0.0; 3]).is_err());
        assert!(uniform_nodes(2).is_err());
    }

    #[test]
    fn sup_distance_examples() {
        let g0 = line();
        assert_eq!(sup_distance(&g0, &g0), 0.0);
        let one = GridFunction::sample(4097, |_| 1.0).unwrap();
        assert_eq!(sup_distance(&g0, &one), 1.0);
        let parabola = GridFunction::sample(4097, |x| 1.0 - x * x).unwrap();
        assert!((sup_distance(&g0, &parabola) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sup_distance_across_grids_uses_union() {
        let coarse = GridFunction::sample(3, |x| x).unwrap();
        let fine = GridFunction::sample(5, |x| x * x).unwrap();
        // max of x - x^2 on the union {0, 1/4, 1/2, 3/4, 1} is at 1/2.
        assert!((sup_distance(&coarse, &fine) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn l1_distance_examples() {
        let one = DensityFunction::sample(4097, |_| 1.0).unwrap();
        let zero = DensityFunction::sample(4097, |_| 0.0).unwrap();
        assert_eq!(l1_distance(&one, &one).unwrap(), 0.0);
        assert!((l1_distance(&one, &zero).unwrap() - 1.0).abs() < 1e-12);
        let two_x = DensityFunction::sample(4097, |x| 2.0 * x).unwrap();
        let h = 1.0 / 4096.0;
        // Trapezoid on [h, 1] is exact for 2x; the first cell adds 2h^2.
        let got = l1_distance(&two_x, &zero).unwrap();
        assert!((got - (1.0 + h * h)).abs() < 1e-12, "{got}");
        let other = DensityFunction::sample(2049, |_| 0.0).unwrap();
        assert!(matches!(l1_distance(&one, &other), Err(Error::GridMismatch)));
    }

    #[test]
    fn derivative_of_line_is_one() {
        let d = discrete_derivative(&TailFunction::initial(4097).unwrap()).unwrap();
        assert!(d.ys().iter().all(|&y| (y - 1.0).abs() < 1e-9));
        assert!((d.integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_of_convex_tail_is_nonincreasing() {
        let g = TailFunction::new(
            GridFunction::sample(1025, |x| (1.0 - x) * (1.0 - x)).unwrap(),
            ANALYTIC_TOLERANCE,
        )
        .unwrap();
        let d = discrete_derivative(&g).unwrap();
        assert!(d.ys().windows(2).all(|w| w[1] <= w[0] + 1e-9));
        // -g'(x) = 2(1 - x) is reproduced exactly by central differences.
        assert!(d.ys().iter().zip(d.xs()).all(|(y, x)| (y - 2.0 * (1.0 - x)).abs() < 1e-9));
    }

    #[test]
    fn holder_examples() {
        let c = GridFunction::sample(65, |_| 0.3).unwrap();
        assert_eq!(holder_seminorm(&c, 0.5), 0.0);
        let g0 = GridFunction::sample(65, |x| 1.0 - x).unwrap();
        assert!((holder_seminorm(&g0, 0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn k2_examples() {
        assert!(check_k2(&line(), ANALYTIC_TOLERANCE).member);
        let one = GridFunction::sample(65, |_| 1.0).unwrap();
        let r = check_k2(&one, ANALYTIC_TOLERANCE);
        assert!(!r.member);
        assert_eq!(r.worst_x, 1.0);
        assert_eq!(k2_lower_bound(0.0), 1.0);
        assert!((k2_lower_bound(1.0) + 4.0).abs() < 1e-15);
    }

    #[test]
    fn tail_shape_rejections() {
        let flat = GridFunction::sample(65, |_| 0.5).unwrap();
        assert!(TailFunction::new(flat, ANALYTIC_TOLERANCE).is_err());
        let concave = GridFunction::sample(65, |x| 1.0 - x * x).unwrap();
        let err = TailFunction::new(concave, ANALYTIC_TOLERANCE).unwrap_err();
        assert!(err.to_string().contains("second difference"));
        let rising = GridFunction::sample(65, |x| x).unwrap();
        assert!(TailFunction::new(rising, ANALYTIC_TOLERANCE).is_err());
    }

    #[test]
    fn density_rejects_negative_values() {
        let err = DensityFunction::sample(65, |x| x - 0.5).unwrap_err();
        assert!(matches!(err, Error::NegativeDensity { .. }));
        assert!(DensityFunction::new(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn density_constant_extension() {
        let d = DensityFunction::sample(5, |x| 1.0 + x).unwrap();
        assert_eq!(d.eval_extended(0.0), 1.25);
        assert_eq!(d.eval_extended(0.1), 1.25);
        assert!((d.eval_extended(0.375) - 1.375).abs() < 1e-15);
        assert_eq!(d.eps(), 0.25);
    }
}
