//! Crate-wide error type.
//!
//! Guard violations, malformed inputs, and contract breaches are reported as
//! typed errors; they are never papered over by rounding or silent clamping.

use thiserror::Error;

/// Errors surfaced by the solvers and their supporting machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// Vector or matrix dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An input failed structural validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The feasible set (or a required fiber) is empty.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A linear program that must be bounded was not.
    #[error("unbounded: {0}")]
    Unbounded(String),

    /// An enumeration or magnitude guard was exceeded.
    #[error("cap exceeded: {what} requires {needed}, cap is {cap}")]
    CapExceeded {
        /// What was being guarded.
        what: String,
        /// Size the computation would need.
        needed: String,
        /// Configured limit.
        cap: String,
    },

    /// The cutting-plane driver ran out of its cut budget.
    #[error("cut budget exhausted after {budget} cuts")]
    CutBudgetExhausted {
        /// Budget that was exhausted.
        budget: usize,
    },

    /// A separation oracle returned an inequality not violated at the query
    /// point, or otherwise broke its contract.
    #[error("separation oracle contract breach: {0}")]
    OracleContractBreach(String),

    /// A vertex that must be integral came out fractional; this indicates a
    /// violated precondition on the caller's side and is reported, never
    /// rounded.
    #[error("non-integer vertex coordinate {coordinate} = {value}")]
    NonIntegerVertex {
        /// Index of the offending coordinate.
        coordinate: usize,
        /// Exact fractional value found.
        value: String,
    },

    /// The matroid pair admits no common base.
    #[error("matroid pair has no common base")]
    NoCommonBase,

    /// Every randomized run failed to produce a common base.
    #[error("randomized search returned no common base after {runs} runs; increase repeats")]
    RandomizedSearchFailed {
        /// Number of runs attempted.
        runs: usize,
    },

    /// An instance file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Convenience constructor for cap violations.
    pub fn cap(what: impl Into<String>, needed: impl ToString, cap: impl ToString) -> Self {
        Error::CapExceeded {
            what: what.into(),
            needed: needed.to_string(),
            cap: cap.to_string(),
        }
    }
}
