use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;

/// Numerical laboratory for Brent's model of the binary gcd.
#[derive(Debug, Parser)]
#[command(name = "bgcd", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Nodes of the uniform grid on [0, 1] (spectrum: hat functions, default 1024)
    #[arg(long, global = true)]
    pub grid_size: Option<usize>,
    /// Terms kept in the operator series
    #[arg(long, global = true, default_value_t = 60)]
    pub truncation_k: u32,
    /// Sup-norm stopping tolerance for the iteration
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Maximum number of iterations
    #[arg(long, global = true, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Directory receiving CSV and JSON outputs
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,
    /// Worker threads (default: logical processors); results do not depend on it
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate F from 1 - x; writes g_inf.csv, history.json and iterates/
    Iterate,
    /// Compute b from a tail on disk, or from a fresh iteration; writes constant.json
    Constant {
        /// CSV grid file with header `x,value`
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the binary gcd on random odd pairs and optionally the model chain
    Simulate(SimulateArgs),
    /// Estimate the leading and subdominant eigenvalues of B2; writes spectrum.json
    Spectrum,
    /// Check the harmonic sum identity on (0, 1]; writes mellin.csv
    Mellin {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
        points: u32,
    },
    /// Run the quick invariant suite and print a pass/fail table
    Verify,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of random odd pairs
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub pairs: u64,
    /// Bit size of the operands
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(16..=64))]
    pub bits: u32,
    /// Chains of the continuous model (0 skips the model run)
    #[arg(long, default_value_t = 0)]
    pub chains: u64,
    /// Steps per model chain
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
}

pub const EXIT_IO: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Some(threads) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads.into()).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let c = &cli.common;
    let result = match cli.command {
        Command::Iterate => commands::iterate(c),
        Command::Constant { input } => commands::constant(c, input.as_deref()),
        Command::Simulate(args) => commands::simulate(c, &args),
        Command::Spectrum => commands::spectrum(c),
        Command::Mellin { points } => commands::mellin(c, points as usize),
        Command::Verify => commands::verify(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
