use thiserror::Error;

use crate::rootdata::RankProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank profile gl({m}|{n}): both ranks must be positive")]
    InvalidProfile { m: usize, n: usize },

    #[error("profile mismatch: {left} vs {right}")]
    ProfileMismatch { left: RankProfile, right: RankProfile },

    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what}: size {size} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: u128,
        bound: u128,
    },

    #[error("malformed partition {0:?} for the box")]
    MalformedPartition(Vec<usize>),

    #[error("root {0} is not an odd simple root of the Borel")]
    NotOddSimple(String),

    #[error("root {0} is not an even simple root of the Borel")]
    NotEvenSimple(String),

    #[error("weight is not dominant: {0}")]
    NotDominant(String),

    #[error("weight is not regular: {0}")]
    NotRegular(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot divide by a factor in direction {0:?}: depth functional is not positive on it")]
    InvalidDivision(Vec<i64>),

    #[error("weight {weight:?} lies beyond the valid depth {depth} of the series")]
    BeyondDepth { weight: Vec<i64>, depth: u32 },

    #[error("weight {0:?} is not below the top weight of the series")]
    OutsideCone(Vec<i64>),

    #[error("series tops {0:?} and {1:?} are not comparable")]
    IncomparableTops(Vec<i64>, Vec<i64>),

    #[error("reflection order {0} is not a positive integer")]
    NotPositiveInteger(String),

    #[error("unsupported profile for this check: {0}")]
    UnsupportedProfile(RankProfile),

    #[error("mixed elements of different Verma modules")]
    ModuleMismatch,

    #[error("element is not homogeneous")]
    Inhomogeneous,

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
