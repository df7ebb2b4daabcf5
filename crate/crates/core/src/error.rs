//! Error types shared across the crate.

use thiserror::Error;

/// Errors from the special-function and scaled-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series or continued fraction did not converge within its term cap.
    #[error("no convergence after {0} terms")]
    NoConvergence(usize),
    /// A plain-real accessor was asked for a value outside the representable
    /// range (natural-log magnitude attached).
    #[error("overflow: value has log magnitude {0:.3}")]
    Overflow(f64),
}

/// Errors from the solver, oracle and assembly layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Math(#[from] MathError),
    /// The problem description violates an invariant (radii, dimensions,
    /// spectrum shape, ...).
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    /// `R(eps)` vanished to working precision, so `sigma = -R'(eps)/R(eps)`
    /// is not defined for this mode.
    #[error("mode (k={k}, j={j}) is singular: {reason}")]
    ModeSingular { k: usize, j: usize, reason: String },
    /// The numerical integrator produced a non-finite state.
    #[error("integration failure: {0}")]
    IntegrationFailure(String),
    /// A table is not certified complete below the threshold a consumer
    /// requires.
    #[error("spectrum not certified: {0}")]
    Uncertified(String),
    /// Two supposedly identical evaluation paths disagree.
    #[error("dual-path mismatch: {0}")]
    DualPathMismatch(String),
    /// A regression design matrix was degenerate.
    #[error("fit error: {0}")]
    DegenerateFit(String),
    /// A state the solver proves impossible for valid inputs.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
