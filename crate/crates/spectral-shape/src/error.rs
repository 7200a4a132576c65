//! Error type shared by every module.

use thiserror::Error;

/// Everything that can go wrong in the toolkit.
///
/// Numerical failures carry enough context (attained residuals, offending
/// values) to diagnose a run from the error message alone.
#[derive(Error, Debug)]
pub enum Error {
    /// The radial function `r(θ)` is not strictly positive, or a deformed
    /// boundary cannot be seen from the origin (a cast ray misses or hits the
    /// curve more than once).
    #[error("domain is not star-shaped with respect to the origin: {reason}")]
    NonStarShaped { reason: String },

    /// Least-squares projection of a deformed boundary onto the Fourier basis
    /// left a residual above the configured tolerance.
    #[error(
        "Fourier fit of the deformed boundary has relative residual {residual:.3e} \
         (tolerance {tol:.3e}); increase the mode count or reduce the step"
    )]
    FitResidualTooLarge { residual: f64, tol: f64 },

    /// A mesh triangle has (numerically) vanishing or negative area.
    #[error("triangle {triangle} has degenerate area {area:.3e}")]
    DegenerateTriangle { triangle: usize, area: f64 },

    /// The eigenvalue iteration exhausted its budget before reaching the
    /// requested residual tolerance.
    #[error(
        "eigenvalue solver did not converge within {iterations} iterations: \
         worst relative residual {residual:.3e} (tolerance {tol:.3e})"
    )]
    NotConverged { iterations: usize, residual: f64, tol: f64 },

    /// An operation that requires a simple eigenvalue was applied to a
    /// degenerate one (or the requested index sits inside a larger cluster).
    #[error(
        "eigenvalue #{index} (λ = {value:.6}) belongs to a cluster of size {cluster_size}; \
         this operation requires a simple eigenvalue"
    )]
    DegenerateEigenvalue { index: usize, value: f64, cluster_size: usize },

    /// The Weyl tail estimate of a truncated heat-trace sum exceeds the
    /// requested accuracy.
    #[error(
        "heat-trace tail bound {bound:.3e} at t = {t} exceeds the requested accuracy {tol:.3e}; \
         increase the number of eigenvalues or t"
    )]
    TailTooLarge { t: f64, bound: f64, tol: f64 },

    /// Backtracking line search in the gradient flow shrank the step below
    /// its floor without finding a decrease.
    #[error("line search step {step:.3e} fell below the floor {floor:.3e} at flow step {at_step}")]
    StepTooSmall { step: f64, floor: f64, at_step: usize },

    /// Configuration file or command-line input is invalid.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Filesystem failure while reading configs or writing reports.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure.
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the thin CLI: `2` for configuration/usage
    /// errors, `1` for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::Io { .. } | Error::Json(_) => 2,
            _ => 1,
        }
    }
}
