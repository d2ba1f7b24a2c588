//! Nonuniform Berry-Esseen bound toolkit.
//!
//! For i.i.d. variables with `E X = 0`, `E X² = 1`, `E|X|³ = ρ`, the scaled
//! discrepancy between the CDF of the normalized sum and the standard normal
//! CDF admits the nonuniform bound
//!
//! ```text
//! sup_{x ≥ t} √n·x³/ρ · |F_n(x) − Φ(x)|  ≤  C(t) = max{B_T(t), B_C(t)}
//! ```
//!
//! where `C(t)` is a decreasing function of the coordinate `t ≥ 3.18` that
//! improves on the universal constant 29.1174 for `t ≥ 3.2` and tends to
//! `1 + e` as `t → ∞`. This crate evaluates `B_T` and `B_C` for an explicit
//! candidate `(t, τ, b)`, grid-searches the admissible `(τ, b)` region to
//! minimize `C(t)`, and verifies the resulting bound against exactly
//! computable convolutions of finite-atom distributions.
//!
//! The pieces:
//!
//! - [`truncation`]: closed-form envelopes for exponential moments of the
//!   truncated variable, and the tail/center split point `ψ(n, t)`.
//! - [`bound`]: the tail bound `B_T = b³(1+e)`, the center bound `B_C`, and
//!   the admissibility conditions for one candidate.
//! - [`optimizer`]: admissible parameter ranges, grid search, and table
//!   generation.
//! - [`verifier`]: high-accuracy normal tail, exact n-fold convolution of
//!   finite-atom laws, bound verification, and the confidence-interval
//!   application for the sample mean.

pub mod bound;
pub mod error;
pub mod optimizer;
pub mod truncation;
pub mod verifier;

pub use bound::{
    check_feasibility, center_quantities, compute_bounds, gamma, tail_bound, BoundParams,
    BoundResult, CenterQuantities, ConditionCheck, FeasibilityReport, NAGAEV_CONSTANT, T_MIN,
    UNIFORM_CONSTANT,
};
pub use error::Error;
pub use optimizer::{
    make_table, optimize, param_ranges, OptimizationResult, OptimizeOutcome, ParamRanges,
    TableRow,
};
pub use truncation::{moment_envelope, psi_split, MomentEnvelope, TruncationInput};
pub use verifier::{
    ci_bound, exact_convolution_cdf, normal_cdf, normal_cdf_complement, verify_bound,
    verify_bound_with, BoundProvider,
    CiBound, Convolution, DiscreteDistribution, OptimizedBound, VerificationReport,
};
