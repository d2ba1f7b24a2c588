//! Moment envelopes for the truncated variable.
//!
//! The truncation `Y := X·1{|X| ≤ h}` together with the exponential tilt
//! `e^{sY}` is the device behind the center bound. Everything a caller needs
//! about `Y` is captured by closed-form bounds in terms of `(s, h, ρ)` alone;
//! no access to the underlying law of `X` is required.

use crate::error::Error;
use serde::Serialize;

/// Tilt strength, truncation level, and third absolute moment for one
/// envelope query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationInput {
    /// Exponential tilt parameter, `s ≥ 0`.
    pub s: f64,
    /// Truncation level, `h > 0`.
    pub h: f64,
    /// Third absolute moment `ρ = E|X|³`. Hölder applied to `E X² = 1`
    /// forces `ρ ≥ 1`; smaller values are rejected rather than clamped.
    pub rho: f64,
}

impl TruncationInput {
    pub fn new(s: f64, h: f64, rho: f64) -> Result<Self, Error> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::Domain(format!("tilt s must be finite and >= 0, got {s}")));
        }
        if !h.is_finite() || h <= 0.0 {
            return Err(Error::Domain(format!(
                "truncation level h must be finite and > 0, got {h}"
            )));
        }
        if !rho.is_finite() || rho < 1.0 {
            return Err(Error::Domain(format!("rho must be finite and >= 1, got {rho}")));
        }
        Ok(TruncationInput { s, h, rho })
    }
}

/// Closed-form bounds on the exponential moments of `Y`.
///
/// Upper bounds hold for the tilted moments
/// `β = E e^{sY}`, `m₁ = E Y e^{sY}`, `m₂ = E Y² e^{sY}`,
/// `m₃ = E|Y|³ e^{sY}`, and `E|Y| e^{sY}`; `m1_lo` is a lower bound on the
/// tilted `m₁`, while `ey_lo`, `ey2_lo`, `ey3_lo` bound the untilted
/// `E Y`, `E Y²`, `E Y³` from below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEnvelope {
    pub beta_hi: f64,
    pub m1_hi: f64,
    pub m2_hi: f64,
    pub m3_hi: f64,
    /// `√(β̄·m̄₂)`, the Hölder bound on `E|Y| e^{sY}`.
    pub abs_m1_hi: f64,
    /// Lower bound on the tilted `m₁`; may be negative and is reported
    /// as-is, the downstream δ² feasibility guard handles the sign.
    pub m1_lo: f64,
    pub ey_lo: f64,
    pub ey2_lo: f64,
    pub ey3_lo: f64,
}

/// Evaluate the moment envelope at `(s, h, ρ)`.
pub fn moment_envelope(input: TruncationInput) -> MomentEnvelope {
    let TruncationInput { s, h, rho } = input;
    let sh = s * h;
    let esh = sh.exp();
    let beta_hi = 1.0 + s * s / 2.0 + rho / (h * h * h) * (esh - 1.0);
    let m1_hi = s + rho / (h * h) * esh;
    let m2_hi = 1.0 + rho / h * esh;
    let m3_hi = rho * esh;
    MomentEnvelope {
        beta_hi,
        m1_hi,
        m2_hi,
        m3_hi,
        abs_m1_hi: (beta_hi * m2_hi).sqrt(),
        m1_lo: s - rho / (h * h) * (1.0 + sh + 0.5 * sh * sh),
        ey_lo: -rho / (h * h),
        ey2_lo: 1.0 - rho / h,
        ey3_lo: -rho,
    }
}

/// Split point `ψ(n, t)` between the tail regime `[ψ, ∞)` and the center
/// regime `[t, ψ]`:
///
/// ```text
/// ψ(n, t) = b²/(2(b−c)) · log(√n·t³/(ρa))
/// ```
///
/// Diagnostic only: the published `C(t)` takes the max over both regimes, so
/// the bound pipeline never needs `n` or `ψ`.
pub fn psi_split(n: u64, t: f64, a: f64, b: f64, c: f64, rho: f64) -> Result<f64, Error> {
    if n < 1 {
        return Err(Error::Domain("sample size n must be >= 1".into()));
    }
    if !t.is_finite() || t <= 1.0 {
        return Err(Error::Domain(format!("coordinate t must be > 1, got {t}")));
    }
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::Domain(format!("scale a must be > 0, got {a}")));
    }
    if !c.is_finite() || c < 1.0 {
        return Err(Error::Domain(format!("parameter c must be >= 1, got {c}")));
    }
    if !b.is_finite() || b <= c {
        return Err(Error::Domain(format!("parameter b must exceed c, got b={b}, c={c}")));
    }
    if !rho.is_finite() || rho < 1.0 {
        return Err(Error::Domain(format!("rho must be >= 1, got {rho}")));
    }
    let arg = (n as f64).sqrt() * t.powi(3) / (rho * a);
    if arg <= 1.0 {
        return Err(Error::Domain(format!(
            "sqrt(n)*t^3/(rho*a) must exceed 1 for the split to exist, got {arg}"
        )));
    }
    Ok(b * b / (2.0 * (b - c)) * arg.ln())
}
