//! Error types shared across the crate.

use std::fmt;

/// Errors produced by distribution functions, estimators, and workflows.
#[derive(Debug, Clone, PartialEq)]
pub enum LomaxError {
    /// A parameter failed validation (non-positive, NaN, infinite, out of range).
    InvalidParameter {
        name: String,
        value: f64,
        reason: String,
    },
    /// A sample failed validation (empty, non-finite entries, negative values).
    InvalidSample { reason: String },
    /// A requested moment does not exist for the given shape parameter.
    MomentDoesNotExist { order: u32, beta: f64 },
    /// An optimizer or other numerical routine failed.
    NumericalFailure { reason: String },
    /// An estimator did not converge when a converged fit was required.
    EstimationFailed { method: String, reason: String },
    /// The parametric bootstrap lost more than half of its refits.
    BootstrapUnstable { failed: usize, total: usize },
    /// A data file could not be read or parsed.
    DataError { reason: String },
}

impl fmt::Display for LomaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LomaxError::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid parameter {name}={value}: {reason}"),
            LomaxError::InvalidSample { reason } => write!(f, "invalid sample: {reason}"),
            LomaxError::MomentDoesNotExist { order, beta } => write!(
                f,
                "raw moment of order {order} does not exist for shape beta={beta} (requires beta > order)"
            ),
            LomaxError::NumericalFailure { reason } => write!(f, "numerical failure: {reason}"),
            LomaxError::EstimationFailed { method, reason } => {
                write!(f, "estimation failed for {method}: {reason}")
            }
            LomaxError::BootstrapUnstable { failed, total } => write!(
                f,
                "bootstrap unstable: {failed} of {total} refits failed (more than half)"
            ),
            LomaxError::DataError { reason } => write!(f, "data error: {reason}"),
        }
    }
}

impl std::error::Error for LomaxError {}

/// Crate-wide result alias.
pub type LomaxResult<T> = Result<T, LomaxError>;
