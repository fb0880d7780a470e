use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the numerical library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {value} outside the domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grids differ between operands")]
    GridMismatch,

    #[error("tail function invariant violated: {0}")]
    Shape(String),

    #[error("density has a negative value {value} at x = {x}")]
    NegativeDensity { x: f64, value: f64 },

    #[error("invalid Moebius map: {0}")]
    Moebius(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("undefined ratio: the two inputs coincide")]
    DegenerateRatio,

    #[error("iteration did not converge after {iterations} steps (last delta {last_delta:e})")]
    NotConverged {
        iterations: usize,
        last_delta: f64,
        history: Box<crate::fixpoint::IterationHistory>,
    },

    #[error("power iteration did not converge after {iterations} steps (residual {residual:e})")]
    EigenNotConverged { iterations: usize, residual: f64, residuals: Vec<f64> },

    #[error("complex-pair window too short: growth ratios spread {spread:.3} over the window")]
    WindowSpread { spread: f64 },

    #[error("integrand singular at x = 1: g(1) = {0:e}")]
    SingularEndpoint(f64),

    #[error("zero input to the gcd")]
    ZeroInput,

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
