//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the laboratory.
///
/// Numerical routines distinguish *domain* errors (the caller asked for
/// something outside a precondition, e.g. quadrature over a non-admissible
/// orbit) from *numerics* errors (an iteration failed to converge or a
/// trajectory blew up), because the former are caller bugs and the latter
/// are legitimate experimental outcomes that must be reported, not hidden.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two fields on different grids were combined.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Newton continuation stopped making progress.
    #[error("Newton diverged at delta = {delta_reached}: {detail}")]
    NewtonDiverged { delta_reached: f64, detail: String },

    /// The pin row u(0) = 0 is near-degenerate (|u_x(0)| below tolerance);
    /// re-shift the state to a transversal zero crossing before continuing.
    #[error(
        "pin degeneracy: |u_x(0)| = {ux0:.3e} below {tol:.3e}; \
         shift the state so it crosses zero transversally at x = 0"
    )]
    PinDegenerate { ux0: f64, tol: f64 },

    /// A trajectory produced a non-finite value.
    #[error("blow-up detected at t = {time}")]
    BlowUp { time: f64 },

    /// The dense eigensolver failed; never silently truncated.
    #[error("eigensolver failure: {0}")]
    Eigen(String),

    /// A linear solve failed (singular bordered system and the like).
    #[error("linear solve failure: {0}")]
    LinearSolve(String),

    /// Monotone inversion of x(u) failed during profile reconstruction,
    /// signalling an inconsistency in the orbit quadrature.
    #[error("profile inversion failure: {0}")]
    Inversion(String),

    /// Filesystem / serialization trouble in the harness.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed configuration or data file.
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
