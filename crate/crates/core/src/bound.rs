//! Tail and center bounds for one candidate `(t, τ, b)`.
//!
//! The tail bound `B_T = b³(1+e)` needs nothing beyond `b`. The center bound
//! `B_C` is assembled from the budget function `γ(t)`, upper bounds on the
//! conjugate mean and variance parameters, and the decay factors `α₀..α₃`;
//! it is a valid bound only when the full admissibility set holds, so
//! [`compute_bounds`] refuses to produce a value for an infeasible candidate
//! and hands back the per-condition report instead.
//!
//! Everything here is expressed through the n-free products
//! `sh = τ(1−τ)t²` and `r = (1−τ)t`; the underlying scales `h = τ√n·t` and
//! `s = (1−τ)t/√n` are never materialized.

use crate::error::Error;
use crate::optimizer::param_ranges;
use serde::Serialize;

/// Smallest supported coordinate.
pub const T_MIN: f64 = 3.18;

/// Universal constant of the nonuniform bound `C/(1+|t|³)`.
pub const NAGAEV_CONSTANT: f64 = 29.1174;

/// Universal constant of the uniform bound.
pub const UNIFORM_CONSTANT: f64 = 0.7655;

/// Coefficient of the Berry-Esseen block inside `B_C`; kept as the literal
/// `2 · 0.7655`.
const TWICE_UNIFORM: f64 = 1.531;

/// The tail exponent parameter is pinned to 1; formulas keep it symbolic.
const C_PARAM: f64 = 1.0;

/// One admissible-region candidate: coordinate `t` and the truncation shape
/// `(τ, b)` with `c = 1`.
///
/// The truncation level behind the center regime is `h = τ√n·t` and the tilt
/// is `s = (1−τ)t/√n`; both depend on `n`, but every formula below consumes
/// only `sh = τ(1−τ)t²` and `r² = (1−τ)²t²`, which do not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    /// Coordinate, `t ≥ 3.18`.
    pub t: f64,
    /// Truncation fraction, `0 < τ < 1`.
    pub tau: f64,
    /// Tail shape parameter, `b > 1`.
    pub b: f64,
}

impl BoundParams {
    pub fn new(t: f64, tau: f64, b: f64) -> Result<Self, Error> {
        if !t.is_finite() || t < T_MIN {
            return Err(Error::Domain(format!("t must be >= {T_MIN}, got {t}")));
        }
        if !tau.is_finite() || tau <= 0.0 || tau >= 1.0 {
            return Err(Error::Domain(format!("tau must lie in (0, 1), got {tau}")));
        }
        if !b.is_finite() || b <= C_PARAM {
            return Err(Error::Domain(format!("b must exceed {C_PARAM}, got {b}")));
        }
        Ok(BoundParams { t, tau, b })
    }
}

/// Center-regime budget `γ(t) = c·(t/b)³·exp{2(c−b)(t/b)²}`, the quantity
/// that dominates `ρ/√n` throughout the center regime.
pub fn gamma(params: &BoundParams) -> f64 {
    let tb = params.t / params.b;
    C_PARAM * tb.powi(3) * (2.0 * (C_PARAM - params.b) * tb * tb).exp()
}

/// Tail bound `B_T = b³(1+e)` as a function of `b` alone.
pub fn tail_bound(b: f64) -> f64 {
    b.powi(3) * (1.0 + std::f64::consts::E)
}

/// Intermediate scalars of the center bound, all computed from `(t, τ, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenterQuantities {
    /// `γ(t)`.
    pub gamma: f64,
    /// Upper bound `β̄` on the tilted normalizer `β`.
    pub beta_hi: f64,
    /// Upper bound `μ̄` on `|μ|`, the conjugate mean.
    pub mu_hi: f64,
    /// Lower bound `m̲₂` on the tilted second moment.
    pub m2_lo: f64,
    /// Upper bound `m̄₂` on the tilted second moment.
    pub m2_hi: f64,
    /// Lower bound on the conjugate variance `δ²`; may come out negative,
    /// the feasibility guard rejects such candidates.
    pub delta2_lo: f64,
    /// Decay factors `α_k = t^{3−k}·τ^{−k}·exp{−(1−τ)²t²/2}`, `k = 0..3`.
    pub alpha: [f64; 4],
    /// `Δ = exp{(c/(τ³b³))·exp{t²(τ(1−τ) + 2(c−b)/b²)}}`.
    pub big_delta: f64,
    /// `η = μ̄·√m̄₂·(3√m̄₂ + μ̄·√β̄)`.
    pub eta: f64,
}

/// Evaluate every intermediate scalar of the center bound.
pub fn center_quantities(params: &BoundParams) -> CenterQuantities {
    let BoundParams { t, tau, b } = *params;
    let c = C_PARAM;
    let g = gamma(params);
    let t2 = t * t;
    let b3 = b * b * b;
    let tau3b3 = tau * tau * tau * b3;
    // exp{t²(τ(1−τ) + 2(c−b)/b²)}, shared by β̄, μ̄, and Δ.
    let shift = (t2 * (tau * (1.0 - tau) + 2.0 * (c - b) / (b * b))).exp();
    let beta_hi = 1.0 + g * g * ((1.0 - tau) * (1.0 - tau) * t2 / 2.0 + c * shift / tau3b3);
    let mu_hi = t * g * (1.0 - tau + c * shift / (tau * tau * b3));
    let m2_lo = 1.0 - (g / t) * (1.0 / tau + (1.0 - tau) * t2);
    // γ·exp{τ(1−τ)t²} through its combined exponent: the factors can
    // individually under/overflow at large t while the product stays
    // moderate (the admissibility set caps the combined exponent).
    let tb = t / b;
    let ln_gamma = (c * tb * tb * tb).ln() + 2.0 * (c - b) * tb * tb;
    let m2_hi = 1.0 + (ln_gamma + tau * (1.0 - tau) * t2).exp() / (t * tau);
    let delta2_lo = 1.0 + m2_lo - beta_hi - mu_hi * mu_hi;
    let decay = (-0.5 * (1.0 - tau) * (1.0 - tau) * t2).exp();
    let alpha = [
        t.powi(3) * decay,
        t2 / tau * decay,
        t / (tau * tau) * decay,
        decay / (tau * tau * tau),
    ];
    let big_delta = (c / tau3b3 * shift).exp();
    let m2_hi_sqrt = m2_hi.sqrt();
    let eta = mu_hi * m2_hi_sqrt * (3.0 * m2_hi_sqrt + mu_hi * beta_hi.sqrt());
    CenterQuantities {
        gamma: g,
        beta_hi,
        mu_hi,
        m2_lo,
        m2_hi,
        delta2_lo,
        alpha,
        big_delta,
        eta,
    }
}

impl CenterQuantities {
    /// True when every quantity evaluated to a finite number. Far outside
    /// the useful region the tilt and decay exponentials can pair an
    /// underflowed 0 with an overflowed ∞, leaving NaNs that no inequality
    /// below would notice.
    pub fn all_finite(&self) -> bool {
        self.gamma.is_finite()
            && self.beta_hi.is_finite()
            && self.mu_hi.is_finite()
            && self.m2_lo.is_finite()
            && self.m2_hi.is_finite()
            && self.delta2_lo.is_finite()
            && self.alpha.iter().all(|a| a.is_finite())
            && self.big_delta.is_finite()
            && self.eta.is_finite()
    }
}

/// Outcome of a single admissibility condition: satisfied flag plus the
/// signed margin (RHS − LHS; nonnegative means satisfied, except for the
/// strict positivity entry where zero is a failure).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub satisfied: bool,
    pub margin: f64,
}

impl ConditionCheck {
    fn weak(margin: f64) -> Self {
        ConditionCheck { satisfied: margin >= 0.0, margin }
    }
}

/// Per-condition admissibility report for one candidate. A candidate is
/// usable for the center bound iff every entry is satisfied; conditions are
/// evaluated exactly as printed, with zero tolerance slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// `τ` lies inside the admissible interval `[τ̲(b), τ̄(t)]`.
    pub range_tau: ConditionCheck,
    /// `b` lies inside the admissible interval `[b̲(t), b̄(t)]`.
    pub range_b: ConditionCheck,
    /// The β-vs-tilt condition ending in `≤ b³τ/3`.
    pub cond_term7: ConditionCheck,
    /// `5c·exp{t²(τ(1−τ)+2(c−b)/b²)} ≤ τ³(1−τ)²b³t²`.
    pub cond_21: ConditionCheck,
    /// `(1−τ)²τ³t⁵·exp{−τ(1−τ)t²} ≤ 2`.
    pub cond_22: ConditionCheck,
    /// The `δ² ≥ 0.25` precursor ending in `≤ 0.75`, with `β̄` and `μ̄`
    /// substituted for `β` and `|μ|`.
    pub cond_form4: ConditionCheck,
    /// The `δ² ≥ 1 − ζ/2` precursor bounded by
    /// `0.5·exp{t²τ(1−τ)} − 1 − t²τ(1−τ)`.
    pub cond_form4abc: ConditionCheck,
    /// `m̲₂ − β̄μ̄² > 0` and `δ²-lower ≥ 0.25`; also requires every center
    /// quantity to be finite, so the center bound is actually evaluable.
    pub positivity_guard: ConditionCheck,
}

impl FeasibilityReport {
    /// True iff every condition is satisfied.
    pub fn feasible(&self) -> bool {
        self.entries().iter().all(|(_, c)| c.satisfied)
    }

    /// Name/check pairs in a fixed order, for reporting.
    pub fn entries(&self) -> [(&'static str, ConditionCheck); 8] {
        [
            ("range_tau", self.range_tau),
            ("range_b", self.range_b),
            ("cond_term7", self.cond_term7),
            ("cond_21", self.cond_21),
            ("cond_22", self.cond_22),
            ("cond_form4", self.cond_form4),
            ("cond_form4abc", self.cond_form4abc),
            ("positivity_guard", self.positivity_guard),
        ]
    }

    /// Name of the first violated condition, if any.
    pub fn first_violation(&self) -> Option<&'static str> {
        self.entries().iter().find(|(_, c)| !c.satisfied).map(|(n, _)| *n)
    }
}

/// Check every admissibility condition for `(params, q)`.
///
/// Infeasibility is data, not an error; the caller decides what to do with
/// a report that is not fully satisfied.
pub fn check_feasibility(params: &BoundParams, q: &CenterQuantities) -> FeasibilityReport {
    let BoundParams { t, tau, b } = *params;
    let c = C_PARAM;
    let t2 = t * t;
    let b3 = b * b * b;
    let shift = (t2 * (tau * (1.0 - tau) + 2.0 * (c - b) / (b * b))).exp();

    // Parameter ranges (t >= T_MIN is already guaranteed by construction).
    let ranges = param_ranges(t, Some(b)).expect("params.t was validated at construction");
    let range_tau = ConditionCheck::weak((tau - ranges.tau_lo).min(ranges.tau_hi - tau));
    let range_b = ConditionCheck::weak((b - ranges.b_lo).min(ranges.b_hi - b));

    let lhs_term7 = c
        * (2.0 * (c - b) * t2 / (b * b)).exp()
        * (t2 + 2.0 * c * shift / (b3 * tau.powi(3) * (1.0 - tau) * (1.0 - tau)));
    let cond_term7 = ConditionCheck::weak(b3 * tau / 3.0 - lhs_term7);

    let cond_21 =
        ConditionCheck::weak(tau.powi(3) * (1.0 - tau) * (1.0 - tau) * b3 * t2 - 5.0 * c * shift);

    let lhs_22 = (1.0 - tau) * (1.0 - tau) * tau.powi(3) * t.powi(5)
        * (-tau * (1.0 - tau) * t2).exp();
    let cond_22 = ConditionCheck::weak(2.0 - lhs_22);

    let lhs_form4 = q.beta_hi - 1.0
        + q.mu_hi * q.mu_hi
        + c * t2 / b3 * (2.0 * (c - b) * (t / b) * (t / b)).exp() * (1.0 / tau + t2 * (1.0 - tau));
    let cond_form4 = ConditionCheck::weak(0.75 - lhs_form4);

    let inner = 0.5 * t2 * (1.0 - tau) * (1.0 - tau)
        + c * shift / (b3 * tau.powi(3))
        + t2 * {
            let v = 1.0 - tau + c * shift / (b3 * tau * tau);
            v * v
        };
    let lhs_form4abc = tau * t * q.gamma * inner;
    let rhs_form4abc = 0.5 * (t2 * tau * (1.0 - tau)).exp() - 1.0 - t2 * tau * (1.0 - tau);
    let cond_form4abc = ConditionCheck::weak(rhs_form4abc - lhs_form4abc);

    let pos = q.m2_lo - q.beta_hi * q.mu_hi * q.mu_hi;
    let d2_margin = q.delta2_lo - 0.25;
    let positivity_guard = ConditionCheck {
        satisfied: pos > 0.0 && d2_margin >= 0.0 && q.all_finite(),
        margin: pos.min(d2_margin),
    };

    FeasibilityReport {
        range_tau,
        range_b,
        cond_term7,
        cond_21,
        cond_22,
        cond_form4,
        cond_form4abc,
        positivity_guard,
    }
}

/// The two bounds, their maximum, and the comparison columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    /// `B_T = b³(1+e)`.
    pub b_tail: f64,
    /// `B_C`.
    pub b_center: f64,
    /// `C = max{B_T, B_C}`.
    pub c_value: f64,
    /// `C/t³`, the nonuniform bound on `H_n(t)` at this coordinate.
    pub nonuniform_at_t: f64,
    /// `29.1174/(1+t³)`, the universal-constant reference.
    pub nagaev_at_t: f64,
    /// The uniform-bound constant 0.7655, for side-by-side comparison.
    pub uniform_ref: f64,
}

/// Assemble `B_C` from the center quantities; valid only for feasible
/// candidates (`delta2_lo ≥ 0.25 > 0` and `m̲₂ − β̄μ̄² > 0`).
fn center_bound(params: &BoundParams, q: &CenterQuantities) -> f64 {
    let BoundParams { t, tau, .. } = *params;
    let delta = q.delta2_lo.sqrt();
    let [a0, a1, a2, a3] = q.alpha;
    let head = 1.0 / (tau * tau * tau) + a3 * q.big_delta;
    let dt = delta * t;
    let mid = (2.0 / std::f64::consts::PI).sqrt()
        * (a2 + 0.25 * a1 * t * ((-t * t / 2.0).exp() + (-dt * dt / 2.0).exp()));
    let denom = q.m2_lo - q.beta_hi * q.mu_hi * q.mu_hi;
    let tail_of_center = TWICE_UNIFORM
        * (q.beta_hi / (denom * denom * denom)).sqrt()
        * (a0 + q.eta * t.powi(3) * (-t * t * (1.0 - tau * tau) / 2.0).exp());
    head + mid + tail_of_center
}

pub(crate) fn bound_result_unchecked(params: &BoundParams, q: &CenterQuantities) -> BoundResult {
    let b_tail = tail_bound(params.b);
    let b_center = center_bound(params, q);
    // Feasibility (incl. the finiteness guard) precedes this, so the max
    // cannot silently drop a NaN center bound.
    debug_assert!(b_center.is_finite());
    let c_value = b_tail.max(b_center);
    let t3 = params.t.powi(3);
    BoundResult {
        b_tail,
        b_center,
        c_value,
        nonuniform_at_t: c_value / t3,
        nagaev_at_t: NAGAEV_CONSTANT / (1.0 + t3),
        uniform_ref: UNIFORM_CONSTANT,
    }
}

/// Evaluate `C = max{B_T, B_C}` for a candidate that passes every
/// admissibility condition; hands back the report otherwise.
#[allow(clippy::result_large_err)]
pub fn compute_bounds(
    params: &BoundParams,
    q: &CenterQuantities,
) -> Result<BoundResult, FeasibilityReport> {
    let report = check_feasibility(params, q);
    if !report.feasible() {
        return Err(report);
    }
    Ok(bound_result_unchecked(params, q))
}
