//! Numerical laboratory for Brent's continuous model of the binary gcd.
//!
//! The model tracks the ratio `min(u, v) / max(u, v)` of the two odd
//! operands across subtract-and-shift cycles. Its survival functions obey
//! `g_{n+1} = F(g_n)` from `g_0(x) = 1 - x`; the limit `g_inf` gives the
//! expected cycle count through the constant `b ~ 2.83297657`.
//!
//! * [`funcspace`]: grid functions, tails, densities and their norms.
//! * [`moebius`]: the maps `mu_k`, `nu_k` and finite Moebius series.
//! * [`operators`]: `F` and its derivative operator `B2`.
//! * [`fixpoint`]: the iteration, `g_inf` and `b`.
//! * [`mellin`]: the closed form of `sum 2^-k / (1 + 2^k x)`.
//! * [`gcdsim`]: the integer algorithm and Monte Carlo engines.
//! * [`spectral`]: eigenvalues of discretized `B2`.
//! * [`verify`]: a quick invariant suite.

pub mod error;
pub mod fixpoint;
pub mod funcspace;
pub mod gcdsim;
pub mod io;
pub mod mellin;
pub mod moebius;
pub mod operators;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use fixpoint::{
    compute_b, extract_limit_density, iterate_to_fixpoint, BrentConstant, FixpointSummary,
    IterationHistory, B_REFERENCE,
};
pub use funcspace::{DensityFunction, GridFunction, TailFunction};
pub use gcdsim::{binary_gcd, CycleStats, EmpiricalTail, IntegerReport};
pub use mellin::MellinEvaluation;
pub use moebius::{MoebiusMap, MoebiusSeries};
pub use operators::{apply_b2, apply_f, TruncationPolicy};
pub use spectral::{DiscretizedOperator, SpectralEstimate};
