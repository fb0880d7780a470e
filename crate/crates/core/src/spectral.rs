//! Finite-dimensional versions of `B2` and their leading eigenvalues.
//!
//! Two discretizations are provided.
//!
//! [`DiscretizedOperator`] is the matrix of `B2` on piecewise-linear densities
//! (hat functions on a uniform grid). It represents [`apply_b2`] exactly, so
//! its leading eigenvector is directly comparable with `-g'_inf`. Its
//! subdominant spectrum, however, is dominated by discretization modes near
//! `x = 0`: the true eigenfunctions behave like `a(x) + b(x) ln x` there,
//! which hats resolve poorly, and the power method on the deflated hat matrix
//! settles near 0.3 instead of the true modulus.
//!
//! [`CollocationOperator`] represents densities as
//! `sum_j c_j T_j(2x - 1) + ln x * sum_j e_j T_j(2x - 1)` with Chebyshev
//! polynomials `T_j`, and fits the image of each basis function by least
//! squares at Chebyshev points. With eight polynomials per part it resolves
//! the subdominant pair to five digits.
//!
//! [`apply_b2`]: crate::operators::apply_b2

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{bracket, is_uniform_from_first, quadrature_weights, uniform_nodes};
use crate::moebius::pow2;
use crate::operators::TruncationPolicy;

/// Iterations in the norm-growth window.
pub const WINDOW: usize = 20;

/// Iterations discarded before the window starts.
pub const BURN_IN: usize = 60;

/// Largest tolerated `(max - min) / last` over the sliding window estimates.
pub const MAX_WINDOW_SPREAD: f64 = 0.5;

/// Default matrix dimension for hat-basis runs.
pub const DEFAULT_SPECTRAL_GRID: usize = 1024;

/// Default number of Chebyshev polynomials per part of the collocation basis.
pub const DEFAULT_COLLOCATION_DEGREE: usize = 8;

/// A linear map on `R^n` standing in for `B2`.
pub trait TransferMatrix {
    fn dim(&self) -> usize;

    fn apply(&self, v: &[f64]) -> Vec<f64>;

    /// A norm equivalent to the `L1` norm of the represented function.
    fn norm(&self, v: &[f64]) -> f64;

    /// A left eigenvector for the eigenvalue near 1; for an integral
    /// preserving discretization this is the integral functional.
    fn functional(&self) -> Vec<f64>;

    /// Basis label reported in estimates.
    fn basis(&self) -> &'static str;

    /// Grid size or basis dimension reported in estimates.
    fn grid(&self) -> usize {
        self.dim()
    }
}

/// Matrix of `B2` on hat functions at the nodes `i/n`, `i = 1..n`.
#[derive(Clone, Debug)]
pub struct DiscretizedOperator {
    pub n: usize,
    pub k: u32,
    pub xs: Vec<f64>,
    pub entries: DMatrix<f64>,
    pub quad_weights: Vec<f64>,
}

/// Builds the hat-basis matrix. Column `j` is `B2` of the `j`-th hat sampled
/// at the nodes; the hat of the first node is extended by 1 down to 0.
pub fn discretize_b2(n: usize, policy: TruncationPolicy) -> Result<DiscretizedOperator> {
    if n < 64 {
        return Err(Error::Parameter(format!("spectral grid {n} below 64")));
    }
    let xs = uniform_nodes(n + 1)?.split_off(1);
    let uniform = is_uniform_from_first(&xs);
    let k_max = policy.k();
    let rows: Vec<Vec<(usize, f64)>> = xs
        .par_iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(8 * k_max as usize);
            let mut push = |t: f64, w: f64| {
                if t <= xs[0] {
                    row.push((0, w));
                } else {
                    let j = bracket(&xs, uniform, t);
                    let tau = (t - xs[j]) / (xs[j + 1] - xs[j]);
                    row.push((j, w * (1.0 - tau)));
                    row.push((j + 1, w * tau));
                }
            };
            for k in (1..=k_max).rev() {
                let p = pow2(k);
                let w1 = 1.0 / (x + p);
                let w2 = 1.0 / (1.0 + p * x);
                push(x * w1, w1 * w1);
                push(w2, w2 * w2);
            }
            row
        })
        .collect();
    let mut entries = DMatrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, w) in row {
            entries[(i, j)] += w;
        }
    }
    let quad_weights = quadrature_weights(&xs);
    Ok(DiscretizedOperator { n, k: k_max, xs, entries, quad_weights })
}

impl DiscretizedOperator {
    /// Smallest entry; nonnegative up to rounding.
    pub fn min_entry(&self) -> f64 {
        self.entries.min()
    }

    /// `w^T A v - w^T v` for the trapezoidal weights `w`.
    pub fn integral_defect(&self, v: &[f64]) -> f64 {
        let av = self.apply(v);
        dot(&self.quad_weights, &av) - dot(&self.quad_weights, v)
    }
}

impl TransferMatrix for DiscretizedOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let out = &self.entries * DVector::from_column_slice(v);
        out.as_slice().to_vec()
    }

    fn norm(&self, v: &[f64]) -> f64 {
        self.quad_weights.iter().zip(v).map(|(w, x)| w * x.abs()).sum()
    }

    fn functional(&self) -> Vec<f64> {
        self.quad_weights.clone()
    }

    fn basis(&self) -> &'static str {
        "hat"
    }
}

/// `B2` on the log-augmented Chebyshev basis, fitted at Chebyshev points.
#[derive(Clone, Debug)]
pub struct CollocationOperator {
    pub degree: usize,
    pub k: u32,
    pub nodes: Vec<f64>,
    /// Basis values at the nodes (`nodes x 2 degree`).
    pub basis_at_nodes: DMatrix<f64>,
    /// Coefficient map (`2 degree x 2 degree`).
    pub matrix: DMatrix<f64>,
    functional: Vec<f64>,
}

fn chebyshev_row(x: f64, degree: usize, out: &mut [f64]) {
    let t = 2.0 * x - 1.0;
    let lnx = x.ln();
    let (mut prev, mut cur) = (1.0, t);
    for j in 0..degree {
        let v = match j {
            0 => 1.0,
            1 => t,
            _ => {
                let next = 2.0 * t * cur - prev;
                prev = cur;
                cur = next;
                next
            }
        };
        out[j] = v;
        out[degree + j] = v * lnx;
    }
}

/// Builds the collocation operator with `degree` polynomials per part and
/// `8 * degree` Chebyshev points.
pub fn collocation_b2(degree: usize, policy: TruncationPolicy) -> Result<CollocationOperator> {
    if !(2..=24).contains(&degree) {
        return Err(Error::Parameter(format!("collocation degree {degree} outside 2..=24")));
    }
    let dim = 2 * degree;
    let m = 8 * degree;
    let nodes: Vec<f64> = (0..m)
        .map(|j| 0.5 * (1.0 - ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos()))
        .collect();
    let mut phi = DMatrix::zeros(m, dim);
    let mut image = DMatrix::zeros(m, dim);
    let mut row = vec![0.0; dim];
    for (i, &x) in nodes.iter().enumerate() {
        chebyshev_row(x, degree, &mut row);
        for j in 0..dim {
            phi[(i, j)] = row[j];
        }
        for k in (1..=policy.k()).rev() {
            let p = pow2(k);
            let w1 = 1.0 / (x + p);
            let w2 = 1.0 / (1.0 + p * x);
            chebyshev_row(x * w1, degree, &mut row);
            for j in 0..dim {
                image[(i, j)] += w1 * w1 * row[j];
            }
            chebyshev_row(w2, degree, &mut row);
            for j in 0..dim {
                image[(i, j)] += w2 * w2 * row[j];
            }
        }
    }
    let matrix = phi
        .clone()
        .svd(true, true)
        .solve(&image, 1e-13)
        .map_err(|e| Error::Parameter(format!("collocation least squares failed: {e}")))?;
    // Left eigenvector for the real eigenvalue nearest 1: the left singular
    // vector of `M - lambda I` with the smallest singular value.
    let lambda = matrix
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < 1e-9)
        .map(|z| z.re)
        .min_by(|a, b| (a - 1.0).abs().total_cmp(&(b - 1.0).abs()))
        .ok_or_else(|| Error::Parameter("collocation matrix has no real eigenvalue".into()))?;
    let shifted = &matrix - DMatrix::identity(dim, dim) * lambda;
    let svd = shifted.svd(true, false);
    let u = svd.u.as_ref().expect("requested");
    let smallest = svd.singular_values.imin();
    let functional = u.column(smallest).iter().copied().collect();
    Ok(CollocationOperator {
        degree,
        k: policy.k(),
        nodes,
        basis_at_nodes: phi,
        matrix,
        functional,
    })
}

impl CollocationOperator {
    /// All eigenvalues of the coefficient map, by modulus descending.
    pub fn eigenvalues(&self) -> Vec<(f64, f64)> {
        let mut ev: Vec<(f64, f64)> =
            self.matrix.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
        ev.sort_by(|a, b| b.0.hypot(b.1).total_cmp(&a.0.hypot(a.1)));
        ev
    }
}

impl TransferMatrix for CollocationOperator {
    fn dim(&self) -> usize {
        2 * self.degree
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(v)).as_slice().to_vec()
    }

    /// Mean absolute value at the Chebyshev points.
    fn norm(&self, v: &[f64]) -> f64 {
        let values = &self.basis_at_nodes * DVector::from_column_slice(v);
        values.iter().map(|x| x.abs()).sum::<f64>() / self.nodes.len() as f64
    }

    fn functional(&self) -> Vec<f64> {
        self.functional.clone()
    }

    fn basis(&self) -> &'static str {
        "log-chebyshev"
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Result of the power method on the leading eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingEigen {
    pub lambda1: f64,
    /// Normalized to unit norm.
    pub vector: Vec<f64>,
    /// `||A v - lambda1 v|| / ||v||`.
    pub residual: f64,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

fn power_method(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    norm: impl Fn(&[f64]) -> f64,
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<LeadingEigen> {
    let scale = norm(start);
    let mut v: Vec<f64> = start.iter().map(|x| x / scale).collect();
    let mut residuals = Vec::new();
    for it in 1..=max_iter {
        let av = apply(&v);
        let lambda = norm(&av);
        let diff: Vec<f64> = av.iter().zip(&v).map(|(a, b)| a - lambda * b).collect();
        let residual = norm(&diff);
        residuals.push(residual);
        v = av.iter().map(|x| x / lambda).collect();
        if residual < tol {
            return Ok(LeadingEigen { lambda1: lambda, vector: v, residual, iterations: it, residuals });
        }
    }
    let residual = residuals.last().copied().unwrap_or(f64::NAN);
    Err(Error::EigenNotConverged { iterations: max_iter, residual, residuals })
}

/// Power iteration from the constant density, renormalized each step.
pub fn leading_eigen<T: TransferMatrix + ?Sized>(
    op: &T,
    tol: f64,
    max_iter: usize,
) -> Result<LeadingEigen> {
    let start = match op.basis() {
        // The first coefficient of the Chebyshev basis is the constant.
        "log-chebyshev" => {
            let mut e = vec![0.0; op.dim()];
            e[0] = 1.0;
            e
        }
        _ => vec![1.0; op.dim()],
    };
    power_method(|v| op.apply(v), |v| op.norm(v), &start, tol, max_iter)
}

/// Leading and subdominant eigenvalue estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub lambda1: f64,
    /// Geometric mean of the norm growth over the window.
    pub lambda2_modulus: f64,
    /// The pair `re +- i im` from fitting `x_{n+2} = a x_{n+1} + b x_n` to the
    /// deflated iterates.
    pub lambda2_re: f64,
    pub lambda2_im: f64,
    pub residual1: f64,
    pub iterations: usize,
    pub grid: usize,
    pub basis: String,
    /// `(max - min) / lambda2_modulus` over the sliding window estimates.
    pub window_spread: f64,
    /// Largest `|w . x| / ||x||` after projection over all steps.
    pub max_functional_drift: f64,
}

impl SpectralEstimate {
    pub fn lambda2_pair_modulus(&self) -> f64 {
        self.lambda2_re.hypot(self.lambda2_im)
    }
}

/// Deflated power iteration. Each step applies the operator and projects
/// along the leading eigenvector onto the kernel of the functional; the
/// subdominant modulus is the geometric mean of the norm growth over the
/// last [`WINDOW`] of `BURN_IN + 2 WINDOW` steps. If the windows ending at
/// the last `WINDOW + 1` steps disagree by more than [`MAX_WINDOW_SPREAD`],
/// the window is too short for the rotation of a complex pair and an error
/// is returned. The complex pair itself is
/// read off a two-term recurrence fitted over the same window.
pub fn subdominant_modulus<T: TransferMatrix + ?Sized>(
    op: &T,
    leading: &LeadingEigen,
    max_iter: usize,
) -> Result<SpectralEstimate> {
    let steps = (BURN_IN + 2 * WINDOW).min(max_iter.max(2 * WINDOW));
    let w = op.functional();
    let v1 = &leading.vector;
    let wv1 = dot(&w, v1);
    let project = |x: &mut Vec<f64>| {
        let c = dot(&w, x) / wv1;
        for (xi, vi) in x.iter_mut().zip(v1) {
            *xi -= c * vi;
        }
    };
    let dim = op.dim();
    let mut x: Vec<f64> = (0..dim).map(|i| ((i + 1) as f64).sin()).collect();
    project(&mut x);
    let s = op.norm(&x);
    x.iter_mut().for_each(|v| *v /= s);

    let mut ratios = Vec::with_capacity(steps);
    let mut drift: f64 = 0.0;
    for _ in 0..steps {
        let mut y = op.apply(&x);
        project(&mut y);
        let ny = op.norm(&y);
        drift = drift.max(dot(&w, &y).abs() / ny / w.iter().map(|v| v.abs()).fold(0.0, f64::max));
        ratios.push(ny / op.norm(&x));
        y.iter_mut().for_each(|v| *v /= ny);
        x = y;
    }
    // Window estimates ending at each of the last WINDOW + 1 steps. Single
    // ratios swing widely while the pair rotates; a window spanning enough
    // of the rotation gives stable estimates.
    let logs: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let estimates: Vec<f64> = (logs.len() - WINDOW..=logs.len())
        .map(|end| (logs[end - WINDOW..end].iter().sum::<f64>() / WINDOW as f64).exp())
        .collect();
    let modulus = *estimates.last().expect("nonempty");
    let (lo, hi) = estimates.iter().fold((f64::MAX, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    let spread = (hi - lo) / modulus;
    if spread > MAX_WINDOW_SPREAD {
        return Err(Error::WindowSpread { spread });
    }

    // Three further unnormalized steps from the final iterate give
    // x_{n+2} = a x_{n+1} + b x_n in the least-squares sense.
    let mut seq = vec![x.clone()];
    for _ in 0..2 {
        let mut y = op.apply(seq.last().unwrap());
        project(&mut y);
        seq.push(y);
    }
    let (re, im) = fit_pair(&seq[0], &seq[1], &seq[2]);
    Ok(SpectralEstimate {
        lambda1: leading.lambda1,
        lambda2_modulus: modulus,
        lambda2_re: re,
        lambda2_im: im,
        residual1: leading.residual,
        iterations: steps,
        grid: op.grid(),
        basis: op.basis().to_string(),
        window_spread: spread,
        max_functional_drift: drift,
    })
}

/// Roots of `z^2 - a z - b` for the least-squares fit
/// `x2 = a x1 + b x0`; real roots are returned with the larger modulus and
/// zero imaginary part.
fn fit_pair(x0: &[f64], x1: &[f64], x2: &[f64]) -> (f64, f64) {
    let (s00, s01, s11) = (dot(x0, x0), dot(x0, x1), dot(x1, x1));
    let (r0, r1) = (dot(x2, x0), dot(x2, x1));
    let det = s11 * s00 - s01 * s01;
    let a = (r1 * s00 - r0 * s01) / det;
    let b = (r0 * s11 - r1 * s01) / det;
    let disc = a * a + 4.0 * b;
    if disc < 0.0 {
        (0.5 * a, 0.5 * (-disc).sqrt())
    } else {
        let r = 0.5 * (a.abs() + disc.sqrt());
        (r * a.signum(), 0.0)
    }
}

/// The JSON record of a spectral run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: u32,
    pub lambda1: f64,
    pub lambda2_modulus: f64,
    pub residual1: f64,
    pub iterations: usize,
    pub lambda2_re: f64,
    pub lambda2_im: f64,
    pub collocation_degree: usize,
    /// Subdominant modulus seen on the hat matrix itself.
    pub hat_lambda2_modulus: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::DensityFunction;
    use crate::operators::apply_b2_signed;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn matrix_matches_operator() {
        let op = discretize_b2(256, policy()).unwrap();
        let h: Vec<f64> = op.xs.iter().map(|&x| (5.0 * x).cos() + 0.3 * x).collect();
        let direct = apply_b2_signed(&op.xs, &h, policy());
        let via = op.apply(&h);
        let diff = direct.iter().zip(&via).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn entries_nonnegative_and_integral_preserved() {
        // The mass defect of the constant is about 1.3 / n.
        let op = discretize_b2(1024, policy()).unwrap();
        assert!(op.min_entry() >= -1e-12);
        assert!(op.integral_defect(&vec![1.0; op.n]).abs() < 2e-3);
        assert!(discretize_b2(32, policy()).is_err());
    }

    #[test]
    fn leading_eigenvalue_is_one() {
        let op = discretize_b2(1024, policy()).unwrap();
        let e = leading_eigen(&op, 1e-10, 500).unwrap();
        assert!((e.lambda1 - 1.0).abs() < 5e-3, "{}", e.lambda1);
        assert!(e.residual < 1e-8);
        let after_burn_in = &e.residuals[5..];
        assert!(after_burn_in.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)), "{:?}", e.residuals);
        assert!(e.vector.iter().all(|&v| v > 0.0));
        let density = DensityFunction::new(op.xs.clone(), e.vector.clone()).unwrap();
        assert!((density.integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_method_reports_failure() {
        let op = discretize_b2(128, policy()).unwrap();
        match leading_eigen(&op, 1e-30, 3) {
            Err(Error::EigenNotConverged { iterations, residuals, .. }) => {
                assert_eq!(iterations, 3);
                assert_eq!(residuals.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn collocation_pair() {
        let op = collocation_b2(DEFAULT_COLLOCATION_DEGREE, policy()).unwrap();
        let ev = op.eigenvalues();
        assert!((ev[0].0 - 1.0).abs() < 1e-6 && ev[0].1.abs() < 1e-9, "{ev:?}");
        assert!((ev[1].0 - 0.17354).abs() < 1e-4 && (ev[1].1.abs() - 0.08843).abs() < 1e-4);
        let lead = leading_eigen(&op, 1e-9, 500).unwrap();
        assert!((lead.lambda1 - 1.0).abs() < 1e-6);
        let est = subdominant_modulus(&op, &lead, 200).unwrap();
        let exact = ev[1].0.hypot(ev[1].1);
        assert!((est.lambda2_pair_modulus() - exact).abs() < 1e-6, "{est:?}");
        assert!((est.lambda2_modulus - exact).abs() < 0.01, "{est:?}");
        assert!(est.max_functional_drift < 1e-10);
    }

    #[test]
    fn fit_pair_recovers_rotation() {
        let (r, th) = (0.2f64, 0.45f64);
        // A rotation-scaling on R^2 embedded in R^3.
        let step = |v: &[f64]| {
            vec![r * (th.cos() * v[0] - th.sin() * v[1]), r * (th.sin() * v[0] + th.cos() * v[1]), 0.0]
        };
        let x0 = vec![1.0, 0.3, 0.0];
        let x1 = step(&x0);
        let x2 = step(&x1);
        let (re, im) = fit_pair(&x0, &x1, &x2);
        assert!((re - r * th.cos()).abs() < 1e-12 && (im - r * th.sin()).abs() < 1e-12);
    }
}
