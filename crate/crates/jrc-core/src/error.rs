//! Error type shared by every module of the crate.
//!
//! All fallible operations return [`JrcError`]; pure evaluations that cannot
//! fail on their stated domain return plain values.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum JrcError {
    /// An argument lies outside the mathematical domain of the operation
    /// (e.g. `E1(x)` with `x <= 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration struct violates one of its documented invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A series or quadrature failed to reach its tolerance within the
    /// configured term/subdivision budget.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// A rejection-sampling loop exceeded its iteration budget.
    #[error(
        "iteration budget exceeded: sub-pulse {subpulse} used {used} of {budget} draws"
    )]
    IterationBudgetExceeded {
        subpulse: usize,
        used: u64,
        budget: u64,
    },

    /// An empirical batch is not covered by the analytic curve it is being
    /// compared against.
    #[error("coverage error: {0}")]
    Coverage(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, JrcError>;
