//! A quick run of the library's invariants on small grids, for command-line
//! smoke checks. The full-size checks live in the acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fixpoint::{compute_b, error_sequence, iterate_to_fixpoint, B_REFERENCE};
use crate::funcspace::{
    check_k2, discrete_derivative, holder_seminorm, l1_distance, sup_distance, DensityFunction,
    GridFunction, TailFunction, ITERATE_TOLERANCE,
};
use crate::gcdsim::{binary_gcd, euclid_gcd, ks_distance, simulate_model_samples, subtraction_bound};
use crate::mellin::{g1_closed_form, p_bound_geometric, p_eval, x_grid, MellinEvaluation};
use crate::moebius::{g1_series, s_condition_partial_sums, MoebiusSeries};
use crate::operators::{
    apply_b2, apply_f, apply_f_linear, check_k1_surface, contraction_check, operator_norm_ratio,
    TruncationPolicy,
};
use crate::spectral::{
    collocation_b2, discretize_b2, leading_eigen, subdominant_modulus, DEFAULT_COLLOCATION_DEGREE,
};

/// Outcome of one invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

/// A smooth random density: `1 + sum a_j cos(j pi x + phi_j)` with small
/// amplitudes, scaled to mass `mass`.
pub fn random_density(rng: &mut impl Rng, n: usize, mass: f64) -> Result<DensityFunction> {
    let terms: Vec<(f64, f64, f64)> = (1..=4)
        .map(|j| (rng.random_range(0.0..0.2), j as f64, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    let raw = DensityFunction::sample(n, |x| {
        1.0 + terms
            .iter()
            .map(|(a, j, p)| a * (j * std::f64::consts::PI * x + p).cos())
            .sum::<f64>()
    })?;
    raw.scaled(mass / raw.integral())
}

/// A random convex tail `(1 - a)(1 - x) + a (1 - x)^p` with `p > 1`.
pub fn random_tail(rng: &mut impl Rng, n: usize) -> Result<TailFunction> {
    let a: f64 = rng.random_range(0.0..1.0);
    let p: f64 = rng.random_range(1.5..4.0);
    let grid = GridFunction::sample(n, |x| (1.0 - a) * (1.0 - x) + a * (1.0 - x).powf(p))?;
    TailFunction::new(grid, ITERATE_TOLERANCE)
}

/// Runs every quick check. Grid sizes are kept small so the whole suite
/// finishes in seconds.
pub fn run_quick_suite(seed: u64) -> Result<Vec<CheckOutcome>> {
    let policy = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let n = 2049;

    let series = MoebiusSeries::g1_truncated(60)?;
    let (sup, der) = s_condition_partial_sums(&series);
    let worst = x_grid(200, 0.0, 1.0)
        .into_iter()
        .map(|x| (series.eval(x) - g1_series(x, 60)).abs())
        .fold(0.0, f64::max);
    out.push(check(
        "moebius series of g1",
        sup.is_finite() && der.is_finite() && worst < 1e-12,
        format!("sup sum {sup:.6}, derivative sum {der:.6}, max deviation {worst:.2e}"),
    ));

    let history = iterate_to_fixpoint(n, policy, 1e-10, 200)?;
    let shapes_ok = history.iterates.iter().skip(1).all(|g| {
        check_k1_surface(g.grid(), ITERATE_TOLERANCE).ok() && check_k2(g.grid(), ITERATE_TOLERANCE).member
    });
    out.push(check(
        "iterates stay convex and inside the sandwich",
        shapes_ok,
        format!("{} iterates", history.iterates.len()),
    ));
    let holder = history.iterates.iter().skip(1).map(|g| holder_seminorm(g.grid(), 0.5)).fold(0.0, f64::max);
    out.push(check("Holder 1/2 seminorm at most 5", holder <= 5.0 + 1e-6, format!("max {holder:.4}")));
    let converged_at = history.converged_at.unwrap_or(usize::MAX);
    out.push(check(
        "iteration converges within 40 steps",
        converged_at <= 40,
        format!("converged at {converged_at}"),
    ));

    let b = compute_b(&history.last)?.b;
    out.push(check(
        "constant b near 2.83297657",
        (b - B_REFERENCE).abs() < 2e-4,
        format!("b = {b:.9} on {n} nodes"),
    ));

    let u = error_sequence(&history)?;
    let worst_rise = u.windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max);
    out.push(check(
        "L1 error of derivatives nonincreasing",
        worst_rise <= 1e-6,
        format!("largest increase {worst_rise:.2e}"),
    ));

    let mut lin_err: f64 = 0.0;
    let mut norm_ratio: f64 = 0.0;
    for _ in 0..10 {
        let g1 = random_tail(&mut rng, 513)?;
        let g2 = random_tail(&mut rng, 513)?;
        let (alpha, beta): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let combo: Vec<f64> = g1.ys().iter().zip(g2.ys()).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = apply_f_linear(&g1.grid().with_values(combo)?, policy);
        let f1 = apply_f_linear(g1.grid(), policy);
        let f2 = apply_f_linear(g2.grid(), policy);
        for i in 0..lhs.len() {
            lin_err = lin_err.max((lhs.ys()[i] - alpha * f1.ys()[i] - beta * f2.ys()[i]).abs());
        }
        if sup_distance(g1.grid(), g2.grid()) > 0.0 {
            norm_ratio = norm_ratio.max(operator_norm_ratio(&g1, &g2, policy)?);
        }
    }
    out.push(check("F is linear", lin_err < 1e-12, format!("max deviation {lin_err:.2e}")));
    out.push(check("sup-norm ratio of F at most 2", norm_ratio <= 2.0, format!("max ratio {norm_ratio:.4}")));

    let mut worst_contraction = f64::MIN;
    let mut worst_mass: f64 = 0.0;
    for _ in 0..10 {
        let (m1, m2) = (rng.random_range(0.1..1.0), rng.random_range(0.1..1.0));
        let h1 = random_density(&mut rng, n, m1)?;
        let h2 = random_density(&mut rng, n, m2)?;
        let (after, before) = contraction_check(&h1, &h2, policy)?;
        worst_contraction = worst_contraction.max(after - before);
        worst_mass = worst_mass.max((apply_b2(&h1, policy)?.integral() - h1.integral()).abs());
    }
    out.push(check(
        "B2 contracts in L1",
        worst_contraction <= 1e-9,
        format!("max(after - before) {worst_contraction:.2e}"),
    ));
    out.push(check("B2 preserves mass", worst_mass <= 2e-3, format!("max defect {worst_mass:.2e}")));

    let mut commutation: f64 = 0.0;
    for g in history.iterates.iter().take(2) {
        let left = apply_b2(&discrete_derivative(g)?, policy)?;
        let right = discrete_derivative(&apply_f(g, policy)?)?;
        commutation = commutation.max(l1_distance(&left, &right)?);
    }
    out.push(check(
        "derivative commutes with F",
        commutation < 5e-3,
        format!("max L1 distance {commutation:.2e}"),
    ));

    let residual = x_grid(1000, 0.01, 0.99)
        .into_iter()
        .map(|x| MellinEvaluation::at(x).residual())
        .fold(0.0, f64::max);
    out.push(check("harmonic sum closed form", residual < 1e-9, format!("max residual {residual:.2e}")));
    let p_max = (0..10_000).map(|i| p_eval(i as f64 / 10_000.0, 3).abs()).fold(0.0, f64::max);
    out.push(check(
        "fluctuation P bounded",
        p_max < p_bound_geometric(),
        format!("max |P| {p_max:.4e}"),
    ));
    let g1_gap = x_grid(1000, 0.0, 1.0)
        .into_iter()
        .map(|x| (g1_closed_form(x) - g1_series(x, 200)).abs())
        .fold(0.0, f64::max);
    out.push(check("two paths to g1 agree", g1_gap < 1e-9, format!("max gap {g1_gap:.2e}")));

    let mut gcd_ok = true;
    for _ in 0..10_000 {
        let (u, v) = (rng.random_range(1..=u64::MAX), rng.random_range(1..=u64::MAX));
        let s = binary_gcd(u, v)?;
        gcd_ok &= s.gcd == euclid_gcd(u, v) && s.subtractions <= subtraction_bound(u, v);
    }
    out.push(check("binary gcd agrees with Euclid", gcd_ok, "10000 random pairs".into()));

    let chains = 100_000;
    let samples = simulate_model_samples(chains, 4, seed)?;
    let mut ks: f64 = 0.0;
    for (step, s) in samples.iter().enumerate() {
        ks = ks.max(ks_distance(s, history.iterates[step].grid()));
    }
    let bound = 5.0 / (chains as f64).sqrt();
    out.push(check("model chain follows F", ks < bound, format!("max KS {ks:.2e} (bound {bound:.2e})")));

    let hat = discretize_b2(512, policy)?;
    let lead = leading_eigen(&hat, 1e-10, 1000)?;
    out.push(check(
        "leading eigenvalue of B2 is 1",
        (lead.lambda1 - 1.0).abs() < 5e-3,
        format!("lambda1 = {:.6}", lead.lambda1),
    ));
    let colloc = collocation_b2(DEFAULT_COLLOCATION_DEGREE, policy)?;
    let est = subdominant_modulus(&colloc, &leading_eigen(&colloc, 1e-9, 1000)?, 200)?;
    out.push(check(
        "subdominant modulus near 0.1948",
        (est.lambda2_modulus - 0.1948).abs() < 0.02,
        format!("|lambda2| = {:.5}, pair {:.5} +- {:.5}i", est.lambda2_modulus, est.lambda2_re, est.lambda2_im),
    ));
    Ok(out)
}
