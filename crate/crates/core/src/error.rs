//! Crate-wide error type.

use std::fmt;

/// Errors produced by constructors and domain-gated operations.
///
/// Infeasibility of a candidate `(t, τ, b)` is *not* an error: it is reported
/// as data through [`crate::bound::FeasibilityReport`].
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input parameter is outside its admissible domain.
    Domain(String),
    /// A distribution specification fails the standardized moment constraints.
    InvalidDistribution(String),
    /// An exact convolution would exceed the configured support-size cap.
    SupportCapExceeded { needed: usize, cap: usize },
    /// A grid search found no candidate satisfying all conditions.
    NoFeasibleCandidate { t: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::SupportCapExceeded { needed, cap } => write!(
                f,
                "convolution support would need {needed} points, exceeding the cap of {cap}"
            ),
            Error::NoFeasibleCandidate { t } => {
                write!(f, "no feasible (tau, b) candidate at t = {t}")
            }
        }
    }
}

impl std::error::Error for Error {}
