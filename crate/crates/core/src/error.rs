use thiserror::Error;

use crate::ionad::FlatnessCounterexample;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("not a functor: {0}")]
    NotFunctorial(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("point sets differ: expected {expected} points, found {found}")]
    PointMismatch { expected: usize, found: usize },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("basis is not flat: {0}")]
    NotFlat(FlatnessCounterexample),

    #[error("budget exceeded while computing {what}: limit {limit}, required at least {required}")]
    Budget {
        what: &'static str,
        limit: u64,
        required: u64,
    },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("diagram does not commute: {0}")]
    NonCommuting(String),

    #[error("no continuous lifting: {0}")]
    NoLifting(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn budget(what: &'static str, limit: u64, required: u64) -> Self {
        Error::Budget {
            what,
            limit,
            required,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Enumeration limits shared by the expensive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of pre-quotient representatives (b, φ, s) summed over all points.
    pub fibers: u64,
    /// Maximum number of incoming morphisms of an object whose sieves are enumerated.
    pub sieve_arrows: usize,
    /// Maximum number of candidates visited by brute-force enumerations.
    pub enumeration: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            fibers: 1_000_000,
            sieve_arrows: 16,
            enumeration: 10_000_000,
        }
    }
}
