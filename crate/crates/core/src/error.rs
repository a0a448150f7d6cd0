use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a direct sum: {0} is reached by two different pairs")]
    NotDirectSum(Rational),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("cardinality mismatch: {digits} digits but {labels} labels")]
    CardinalityMismatch { digits: usize, labels: usize },

    #[error("degenerate label set: expansion {0} is reached twice")]
    DegenerateLabels(Rational),

    #[error("cannot decide whether {} is a zero (pair {}, {})", .0.difference, .0.left, .0.right)]
    Indeterminate(Box<UndecidedPair>),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

/// Frequency pair whose difference could not be classified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndecidedPair {
    pub left: Rational,
    pub right: Rational,
    pub difference: Rational,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
