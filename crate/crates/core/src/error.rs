use num_bigint::BigUint;
use thiserror::Error;

use crate::space::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid space: {0}")]
    Invalid(ValidationReport),

    #[error("index out of range: {what} index {index} but size is {size}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("instance too large for exact search: {what} (search space {}, limit {limit})", magnitude(size))]
    GuardExceeded {
        what: String,
        size: BigUint,
        limit: String,
    },

    #[error("relation is not a correspondence")]
    NotCorrespondence,

    #[error("not a probability vector: {0}")]
    NotProbability(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Short rendering of a possibly enormous count.
fn magnitude(n: &BigUint) -> String {
    let digits = n.to_string();
    if digits.len() <= 20 {
        digits
    } else {
        format!("~{}.{}e{}", &digits[..1], &digits[1..3], digits.len() - 1)
    }
}
