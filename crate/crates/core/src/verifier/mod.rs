//! Independent checks that a produced `C(t)` actually dominates
//! `√n·t³·|F_n(t) − Φ(t)|/ρ` on exactly computable instances, plus the
//! confidence-interval application for the sample mean.
//!
//! The oracle is an exact convolution, not Monte Carlo: at `t ≥ 3.18` the
//! tail probabilities sit around 1e-3..1e-7 and sampling noise would swamp
//! the comparison.

mod distribution;
mod normal;

pub use distribution::{
    exact_convolution_cdf, Convolution, DiscreteDistribution, DEFAULT_SUPPORT_CAP,
};
pub use normal::{normal_cdf, normal_cdf_complement};

use crate::bound::T_MIN;
use crate::error::Error;
use crate::optimizer::{optimize, OptimizeOutcome, DEFAULT_STEP};
use serde::Serialize;

/// Source of `C(t)` values for the verifier and the confidence-interval
/// application.
pub trait BoundProvider {
    fn c_at(&self, t: f64) -> Result<f64, Error>;
}

impl<F> BoundProvider for F
where
    F: Fn(f64) -> Result<f64, Error>,
{
    fn c_at(&self, t: f64) -> Result<f64, Error> {
        self(t)
    }
}

/// Provider that grid-optimizes `C(t)` on demand.
#[derive(Debug, Clone, Copy)]
pub struct OptimizedBound {
    pub tau_step: f64,
    pub b_step: f64,
}

impl Default for OptimizedBound {
    fn default() -> Self {
        OptimizedBound { tau_step: DEFAULT_STEP, b_step: DEFAULT_STEP }
    }
}

impl BoundProvider for OptimizedBound {
    fn c_at(&self, t: f64) -> Result<f64, Error> {
        match optimize(t, self.tau_step, self.b_step)? {
            OptimizeOutcome::Feasible(r) => Ok(r.c_value),
            OptimizeOutcome::Infeasible { t, .. } => Err(Error::NoFeasibleCandidate { t }),
        }
    }
}

/// Outcome of checking one distribution/sample-size pair against the bound
/// over a grid of coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub distribution: String,
    pub n: u64,
    pub t_grid: Vec<f64>,
    /// Max over the grid of `√n·x³·|F_n(x) − Φ(x)| / (ρ·C(t))`, the sup
    /// taken over jump points of `F_n` in `[t, x_max]` from both sides.
    pub max_ratio: f64,
    /// Grid coordinates where the ratio exceeds 1.
    pub violations: Vec<f64>,
}

/// How far beyond each grid `t` the sup candidates extend by default, as a
/// multiple of `t`. Past that window the discrepancy is dominated by the
/// monotone tail terms (both `1 − F_n` and `1 − Φ` keep shrinking while the
/// bound is fixed at the already-checked jump closest to the window edge).
pub const DEFAULT_X_MAX_FACTOR: f64 = 2.0;

/// Verify `sup_{x ≥ t} √n·x³/ρ·|F_n(x) − Φ(x)| ≤ C(t)` for every `t` in the
/// grid, using exact convolutions of `dist`.
///
/// The sup over a window is evaluated at both one-sided limits of each jump
/// of the step function `F_n` inside `[t, 2t]`, plus the grid point itself;
/// differences are formed tail-against-tail so no precision is lost to
/// `1 − (value near 1)`.
pub fn verify_bound(
    dist: &DiscreteDistribution,
    n: u64,
    t_grid: &[f64],
    bound: &impl BoundProvider,
) -> Result<VerificationReport, Error> {
    verify_bound_with(dist, n, t_grid, bound, DEFAULT_X_MAX_FACTOR)
}

/// [`verify_bound`] with an explicit sup-window factor: candidates for each
/// grid `t` are taken from `[t, x_max_factor·t]`.
pub fn verify_bound_with(
    dist: &DiscreteDistribution,
    n: u64,
    t_grid: &[f64],
    bound: &impl BoundProvider,
    x_max_factor: f64,
) -> Result<VerificationReport, Error> {
    for &t in t_grid {
        if !t.is_finite() || t < T_MIN {
            return Err(Error::Domain(format!("grid coordinate t={t} is below {T_MIN}")));
        }
    }
    if !x_max_factor.is_finite() || x_max_factor < 1.0 {
        return Err(Error::Domain(format!(
            "x_max_factor must be >= 1, got {x_max_factor}"
        )));
    }
    let conv = Convolution::build(dist, n)?;
    let rho = dist.rho();
    let sqrt_n = (n as f64).sqrt();
    let mut max_ratio: f64 = 0.0;
    let mut violations = Vec::new();
    for &t in t_grid {
        let c_of_t = bound.c_at(t)?;
        let mut sup = discrepancy_at(t, conv.upper_tail_gt(t));
        for i in conv.atom_indices_in(t, x_max_factor * t) {
            let (x, _) = conv.atom(i);
            sup = sup.max(discrepancy_at(x, conv.tail_right_of(i)));
            sup = sup.max(discrepancy_at(x, conv.tail_at_or_above(i)));
        }
        let ratio = sqrt_n * sup / (rho * c_of_t);
        max_ratio = max_ratio.max(ratio);
        if ratio > 1.0 {
            violations.push(t);
        }
    }
    Ok(VerificationReport {
        distribution: dist.label().to_string(),
        n,
        t_grid: t_grid.to_vec(),
        max_ratio,
        violations,
    })
}

/// `x³·|F_n(x) − Φ(x)|` with the CDF difference expressed through the two
/// upper tails.
fn discrepancy_at(x: f64, upper_tail_n: f64) -> f64 {
    x.powi(3) * (normal_cdf_complement(x) - upper_tail_n).abs()
}

/// Two-sided bound on `P(|mean − θ| > ε)` for the sample mean of `n`
/// standardized observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiBound {
    /// Evaluation coordinate `√n·ε`.
    pub t: f64,
    /// `C(√n·ε)` supplied by the bound provider.
    pub c_value: f64,
    /// `1 − Φ(√n·ε)`.
    pub normal_term: f64,
    /// `ρ·C(√n·ε)/(n²ε³)`.
    pub bound_term: f64,
    /// `2·(normal_term + bound_term)`.
    pub total: f64,
}

/// Upper bound on `P(|X̄ − θ| > ε)`:
///
/// ```text
/// 2·(1 − Φ(√n·ε) + ρ·C(√n·ε)/(n²·ε³))
/// ```
pub fn ci_bound(
    n: u64,
    eps: f64,
    rho: f64,
    bound: &impl BoundProvider,
) -> Result<CiBound, Error> {
    if n < 1 {
        return Err(Error::Domain("sample size n must be >= 1".into()));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::Domain(format!("half-width eps must be > 0, got {eps}")));
    }
    if !rho.is_finite() || rho < 1.0 {
        return Err(Error::Domain(format!("rho must be >= 1, got {rho}")));
    }
    let t = (n as f64).sqrt() * eps;
    if t < T_MIN {
        return Err(Error::Domain(format!(
            "sqrt(n)*eps = {t} is below {T_MIN}: the two-sided formula needs sqrt(n)*eps >= 1 \
             and this evaluator restricts the bound argument to t >= {T_MIN}"
        )));
    }
    let c_value = bound.c_at(t)?;
    let normal_term = normal_cdf_complement(t);
    let bound_term = rho * c_value / ((n * n) as f64 * eps.powi(3));
    Ok(CiBound { t, c_value, normal_term, bound_term, total: 2.0 * (normal_term + bound_term) })
}
