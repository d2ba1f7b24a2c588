//! Admissible parameter ranges and grid search over `(τ, b)`.
//!
//! The ranges come from the closed-form caps of the admissibility set: the
//! interval for `b` is `[2t/(t+√(t²−6)), ∛(30/(1+e))]` and the interval for
//! `τ` is `[max{τ₁(b), (1−√(1−10/t²))/2}, min{(1+√(1−10/t²))/2, 1−√3/t}]`,
//! where `τ₁(b)` is the lower root of `τ² − τ + p = 0` with
//! `p = 2(b−1)/b² − 1/t²` (no constraint when `4p > 1`). The grid search
//! walks `b` in the outer loop and recomputes the τ interval per `b`.

use crate::bound::{
    bound_result_unchecked, center_quantities, check_feasibility, BoundParams, NAGAEV_CONSTANT,
    T_MIN,
};
use crate::error::Error;
use rayon::prelude::*;
use serde::Serialize;

/// Default grid step for both parameters.
pub const DEFAULT_STEP: f64 = 0.001;

/// Admissible intervals for the two truncation parameters at a given `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamRanges {
    pub b_lo: f64,
    pub b_hi: f64,
    /// Lower end of the τ interval; depends on the candidate `b` when one
    /// was supplied, otherwise only the t-cap applies.
    pub tau_lo: f64,
    pub tau_hi: f64,
}

/// Compute the admissible ranges at `t`, sharpening `tau_lo` for a concrete
/// candidate `b` when given.
pub fn param_ranges(t: f64, b: Option<f64>) -> Result<ParamRanges, Error> {
    if !t.is_finite() || t < T_MIN {
        return Err(Error::Domain(format!("t must be >= {T_MIN}, got {t}")));
    }
    let t2 = t * t;
    let disc = (1.0 - 10.0 / t2).sqrt();
    let tau_hi = (0.5 * (1.0 + disc)).min(1.0 - 3.0f64.sqrt() / t);
    let mut tau_lo = 0.5 * (1.0 - disc);
    if let Some(b) = b {
        let p = 2.0 * (b - 1.0) / (b * b) - 1.0 / t2;
        if 4.0 * p <= 1.0 {
            // Lower root of tau^2 - tau + p = 0.
            let tau1 = 0.5 * (1.0 - (1.0 - 4.0 * p).sqrt());
            tau_lo = tau_lo.max(tau1);
        }
    }
    Ok(ParamRanges {
        b_lo: 2.0 * t / (t + (t2 - 6.0).sqrt()),
        b_hi: (30.0 / (1.0 + std::f64::consts::E)).cbrt(),
        tau_lo,
        tau_hi,
    })
}

/// Best feasible candidate found by [`optimize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub t: f64,
    pub best_tau: f64,
    pub best_b: f64,
    /// `C(t)` at the optimum; equals `compute_bounds` at `(best_tau, best_b)`.
    pub c_value: f64,
    /// Grid points evaluated.
    pub evaluations: u64,
    /// Grid points passing every condition.
    pub feasible_count: u64,
}

/// Result of a grid search: either a feasible optimum or the fact that no
/// grid point passed the conditions (reported, not raised, so table builders
/// can keep going).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OptimizeOutcome {
    Feasible(OptimizationResult),
    Infeasible { t: f64, evaluations: u64 },
}

impl OptimizeOutcome {
    pub fn feasible(&self) -> Option<&OptimizationResult> {
        match self {
            OptimizeOutcome::Feasible(r) => Some(r),
            OptimizeOutcome::Infeasible { .. } => None,
        }
    }
}

/// Closed-interval grid `lo + k·step`, capped at `hi` so the final candidate
/// is exactly the endpoint.
fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut points = Vec::with_capacity(((hi - lo) / step) as usize + 2);
    let mut k = 0u64;
    loop {
        let x = lo + step * k as f64;
        if x >= hi {
            points.push(hi);
            break;
        }
        points.push(x);
        k += 1;
    }
    points
}

#[derive(Clone, Copy)]
struct Candidate {
    c: f64,
    b: f64,
    tau: f64,
}

impl Candidate {
    /// Lexicographic (c, b, tau) order: ties in `C` break toward smaller `b`,
    /// then smaller `τ`, making the parallel reduction order-independent.
    fn better_than(&self, other: &Candidate) -> bool {
        (self.c, self.b, self.tau) < (other.c, other.b, other.tau)
    }
}

struct ScanOutcome {
    best: Option<Candidate>,
    evaluations: u64,
    feasible: u64,
}

fn scan_tau_line(t: f64, b: f64, tau_step: f64) -> ScanOutcome {
    let mut out = ScanOutcome { best: None, evaluations: 0, feasible: 0 };
    let ranges = param_ranges(t, Some(b)).expect("t validated by optimize");
    if ranges.tau_lo > ranges.tau_hi {
        return out;
    }
    for tau in grid(ranges.tau_lo, ranges.tau_hi, tau_step) {
        out.evaluations += 1;
        let params = match BoundParams::new(t, tau, b) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let q = center_quantities(&params);
        if !check_feasibility(&params, &q).feasible() {
            continue;
        }
        out.feasible += 1;
        let c = bound_result_unchecked(&params, &q).c_value;
        let cand = Candidate { c, b, tau };
        if out.best.is_none_or(|best| cand.better_than(&best)) {
            out.best = Some(cand);
        }
    }
    out
}

/// Grid-search the admissible `(τ, b)` region for the candidate minimizing
/// `C(t)`. The reduction is an exact lexicographic `(C, b, τ)` minimum, so
/// the result is identical to a sequential scan regardless of parallelism.
pub fn optimize(t: f64, tau_step: f64, b_step: f64) -> Result<OptimizeOutcome, Error> {
    let step_ok = |s: f64| s.is_finite() && s > 0.0;
    if !step_ok(tau_step) || !step_ok(b_step) {
        return Err(Error::Domain(format!(
            "grid steps must be positive, got tau_step={tau_step}, b_step={b_step}"
        )));
    }
    let ranges = param_ranges(t, None)?;
    let outcome = grid(ranges.b_lo, ranges.b_hi, b_step)
        .into_par_iter()
        .map(|b| scan_tau_line(t, b, tau_step))
        .reduce(
            || ScanOutcome { best: None, evaluations: 0, feasible: 0 },
            |a, b| ScanOutcome {
                best: match (a.best, b.best) {
                    (Some(x), Some(y)) => Some(if x.better_than(&y) { x } else { y }),
                    (x, y) => x.or(y),
                },
                evaluations: a.evaluations + b.evaluations,
                feasible: a.feasible + b.feasible,
            },
        );
    Ok(match outcome.best {
        Some(best) => OptimizeOutcome::Feasible(OptimizationResult {
            t,
            best_tau: best.tau,
            best_b: best.b,
            c_value: best.c,
            evaluations: outcome.evaluations,
            feasible_count: outcome.feasible,
        }),
        None => OptimizeOutcome::Infeasible { t, evaluations: outcome.evaluations },
    })
}

/// One table row: the optimum at `t` plus the two comparison columns, or an
/// infeasible marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub t: f64,
    /// `None` when no grid candidate was feasible at this `t`.
    pub values: Option<RowValues>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowValues {
    pub tau: f64,
    pub b: f64,
    pub c: f64,
    pub c_over_t3: f64,
    pub nagaev: f64,
}

/// Optimize each requested `t` and assemble rows in input order. Rows are
/// computed in parallel; infeasible coordinates yield marker rows instead of
/// aborting the table.
pub fn make_table(t_values: &[f64], tau_step: f64, b_step: f64) -> Result<Vec<TableRow>, Error> {
    t_values
        .par_iter()
        .map(|&t| {
            let row = match optimize(t, tau_step, b_step)? {
                OptimizeOutcome::Feasible(r) => TableRow {
                    t,
                    values: Some(RowValues {
                        tau: r.best_tau,
                        b: r.best_b,
                        c: r.c_value,
                        c_over_t3: r.c_value / t.powi(3),
                        nagaev: NAGAEV_CONSTANT / (1.0 + t.powi(3)),
                    }),
                },
                OptimizeOutcome::Infeasible { .. } => TableRow { t, values: None },
            };
            Ok(row)
        })
        .collect()
}
