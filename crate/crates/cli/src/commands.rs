use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use bgcd_core::fixpoint::{b_from_grid, FixpointSummary};
use bgcd_core::funcspace::{uniform_nodes, TailFunction, DEFAULT_GRID_SIZE};
use bgcd_core::gcdsim::{ks_distance, simulate_integers, simulate_model_samples, TAIL_THRESHOLDS};
use bgcd_core::io::{format_f64, read_grid_function, write_grid_function, write_tails, TailRows};
use bgcd_core::mellin::x_grid;
use bgcd_core::spectral::{
    collocation_b2, discretize_b2, leading_eigen, subdominant_modulus, SpectrumReport,
    DEFAULT_COLLOCATION_DEGREE, DEFAULT_SPECTRAL_GRID,
};
use bgcd_core::verify::run_quick_suite;
use bgcd_core::{
    apply_f, compute_b, iterate_to_fixpoint, EmpiricalTail, Error, IterationHistory,
    MellinEvaluation, TruncationPolicy, B_REFERENCE,
};
use serde::Serialize;

use crate::{Common, SimulateArgs, EXIT_IO, EXIT_NOT_CONVERGED, EXIT_USAGE, EXIT_VERIFY};

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NotConverged { .. } | Error::EigenNotConverged { .. } | Error::WindowSpread { .. }) => {
            EXIT_NOT_CONVERGED
        }
        Some(Error::Grid(_) | Error::Parameter(_)) => EXIT_USAGE,
        _ => EXIT_IO,
    }
}

fn policy(c: &Common) -> Result<TruncationPolicy> {
    Ok(TruncationPolicy::new(c.truncation_k)?)
}

fn output_dir(c: &Common) -> Result<&Path> {
    fs::create_dir_all(&c.output_dir)
        .with_context(|| format!("cannot create {}", c.output_dir.display()))?;
    Ok(&c.output_dir)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn run_iteration(c: &Common) -> Result<std::result::Result<IterationHistory, Box<IterationHistory>>> {
    let n = c.grid_size.unwrap_or(DEFAULT_GRID_SIZE);
    match iterate_to_fixpoint(n, policy(c)?, c.tol, c.max_iter) {
        Ok(h) => Ok(Ok(h)),
        Err(Error::NotConverged { history, .. }) => Ok(Err(history)),
        Err(e) => Err(e.into()),
    }
}

pub fn iterate(c: &Common) -> Result<u8> {
    let dir = output_dir(c)?;
    let (history, converged) = match run_iteration(c)? {
        Ok(h) => (h, true),
        Err(h) => (*h, false),
    };
    let iterates = dir.join("iterates");
    fs::create_dir_all(&iterates).with_context(|| format!("cannot create {}", iterates.display()))?;
    for (n, g) in history.iterates.iter().enumerate() {
        write_grid_function(&iterates.join(format!("g_{n:03}.csv")), g.grid())?;
    }
    let constant = compute_b(&history.last)?;
    let summary = FixpointSummary::new(&history, &constant);
    write_json(&dir.join("history.json"), &summary)?;
    if !converged {
        eprintln!(
            "error: no convergence after {} iterations (last sup delta {:.3e})",
            history.iterations(),
            history.sup_deltas.last().copied().unwrap_or(f64::NAN)
        );
        return Ok(EXIT_NOT_CONVERGED);
    }
    write_grid_function(&dir.join("g_inf.csv"), history.last.grid())?;
    println!("converged after {} iterations on {} nodes", history.iterations(), history.grid_size());
    println!("b = {:.9}", constant.b);
    if let Some(r) = summary.contraction_ratio_estimate {
        println!("contraction ratio estimate {r:.4}");
    }
    Ok(0)
}

#[derive(Serialize)]
struct ConstantRecord {
    b: f64,
    quadrature_grid: usize,
    endpoint_limit: f64,
    source: String,
}

pub fn constant(c: &Common, input: Option<&Path>) -> Result<u8> {
    let dir = output_dir(c)?;
    let (constant, source) = match input {
        Some(path) => (b_from_grid(&read_grid_function(path)?)?, path.display().to_string()),
        None => match run_iteration(c)? {
            Ok(h) => (compute_b(&h.last)?, "iteration".to_string()),
            Err(h) => {
                eprintln!("error: no convergence after {} iterations", h.iterations());
                return Ok(EXIT_NOT_CONVERGED);
            }
        },
    };
    println!("b = {:.9}", constant.b);
    write_json(
        &dir.join("constant.json"),
        &ConstantRecord {
            b: constant.b,
            quadrature_grid: constant.quadrature_grid,
            endpoint_limit: constant.endpoint_limit,
            source,
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct ModelRecord {
    n_chains: usize,
    steps: usize,
    seed: u64,
    grid_size: usize,
    /// KS distance to `F^n(1 - x)` after each step.
    ks_distances: Vec<f64>,
    tails: Vec<EmpiricalTail>,
}

fn tail_rows(tails: &[EmpiricalTail]) -> Vec<TailRows<'_>> {
    tails
        .iter()
        .map(|t| TailRows { n: t.after_cycles, thresholds: &t.thresholds, survival: &t.survival })
        .collect()
}

pub fn simulate(c: &Common, args: &SimulateArgs) -> Result<u8> {
    let dir = output_dir(c)?;
    let pairs = usize::try_from(args.pairs).context("--pairs too large")?;
    let report = simulate_integers(pairs, args.bits, c.seed, B_REFERENCE)?;
    write_json(&dir.join("simulate.json"), &report)?;
    write_tails(&dir.join("simulate_tails.csv"), &tail_rows(&report.tails))?;
    println!("pairs {} of {} bits, seed {}", report.n_pairs, report.bit_size, report.seed);
    println!("mean cycles {:.6}", report.mean_cycles);
    println!("mean ln(uv) {:.6}", report.mean_log_uv);
    println!("b implied by ln(uv) {:.6}", report.b_implied);
    println!("b implied by lg(uv) {:.6}", report.b_implied_bits);
    println!("gcd mismatches {}, bound violations {}", report.gcd_mismatches, report.bound_violations);

    if args.chains > 0 {
        let chains = usize::try_from(args.chains).context("--chains too large")?;
        let n = c.grid_size.unwrap_or(DEFAULT_GRID_SIZE);
        let policy = policy(c)?;
        let samples = simulate_model_samples(chains, args.steps, c.seed)?;
        let thresholds = uniform_nodes(TAIL_THRESHOLDS)?;
        let mut g = TailFunction::initial(n)?;
        let mut ks_distances = Vec::with_capacity(samples.len());
        let mut tails = Vec::with_capacity(samples.len());
        for (step, s) in samples.iter().enumerate() {
            if step > 0 {
                g = apply_f(&g, policy)?;
            }
            ks_distances.push(ks_distance(s, g.grid()));
            tails.push(EmpiricalTail::from_sorted(s, &thresholds, step));
        }
        let worst = ks_distances.iter().copied().fold(0.0, f64::max);
        println!("model chains {chains}, {} steps, max KS distance {worst:.3e}", args.steps);
        write_tails(&dir.join("model_tails.csv"), &tail_rows(&tails))?;
        write_json(
            &dir.join("model.json"),
            &ModelRecord { n_chains: chains, steps: args.steps, seed: c.seed, grid_size: n, ks_distances, tails },
        )?;
    }
    Ok(0)
}

pub fn spectrum(c: &Common) -> Result<u8> {
    let dir = output_dir(c)?;
    let policy = policy(c)?;
    let n = c.grid_size.unwrap_or(DEFAULT_SPECTRAL_GRID);
    let hat = discretize_b2(n, policy)?;
    let lead = leading_eigen(&hat, c.tol, c.max_iter)?;
    let hat_lambda2 = subdominant_modulus(&hat, &lead, c.max_iter).ok().map(|e| e.lambda2_modulus);
    let colloc = collocation_b2(DEFAULT_COLLOCATION_DEGREE, policy)?;
    let colloc_lead = leading_eigen(&colloc, 1e-9, c.max_iter)?;
    let est = subdominant_modulus(&colloc, &colloc_lead, c.max_iter)?;
    let report = SpectrumReport {
        n,
        k: policy.k(),
        lambda1: lead.lambda1,
        lambda2_modulus: est.lambda2_modulus,
        residual1: lead.residual,
        iterations: lead.iterations,
        lambda2_re: est.lambda2_re,
        lambda2_im: est.lambda2_im,
        collocation_degree: DEFAULT_COLLOCATION_DEGREE,
        hat_lambda2_modulus: hat_lambda2,
    };
    write_json(&dir.join("spectrum.json"), &report)?;
    println!("lambda1 {:.6} (hat functions, n = {n}, residual {:.2e})", report.lambda1, report.residual1);
    println!(
        "|lambda2| {:.5}, pair {:.5} +- {:.5}i (collocation, degree {})",
        report.lambda2_modulus,
        report.lambda2_re,
        report.lambda2_im.abs(),
        report.collocation_degree
    );
    Ok(0)
}

pub fn mellin(c: &Common, points: usize) -> Result<u8> {
    let dir = output_dir(c)?;
    let mut csv = String::from("x,lhs,rhs,residual,p_value\n");
    let mut worst: f64 = 0.0;
    for x in x_grid(points, 0.0, 1.0) {
        let e = MellinEvaluation::at(x);
        worst = worst.max(e.residual());
        writeln!(
            csv,
            "{},{},{},{},{}",
            format_f64(e.x),
            format_f64(e.lhs),
            format_f64(e.rhs),
            format_f64(e.residual()),
            format_f64(e.p_value)
        )?;
    }
    write_text(&dir.join("mellin.csv"), &csv)?;
    println!("max residual {worst:.3e} over {points} points");
    Ok(0)
}

pub fn verify(c: &Common) -> Result<u8> {
    let results = run_quick_suite(c.seed)?;
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        println!("{mark}  {:width$}  {}", r.name, r.detail);
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        println!("all {} checks passed", results.len());
        Ok(0)
    } else {
        eprintln!("failed: {}", failed.join(", "));
        Ok(EXIT_VERIFY)
    }
}
