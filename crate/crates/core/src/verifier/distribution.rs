//! Finite-atom laws under the standardized moment constraints, and exact
//! n-fold convolution of the normalized sum.

use crate::error::Error;
use serde::Serialize;

/// Validation tolerance for the moment constraints.
const MOMENT_TOL: f64 = 1e-12;

/// Adjacent support values closer than this (relatively) are merged during
/// convolution; they arise from the same mathematical sum reached along
/// different floating-point paths.
const MERGE_REL: f64 = 1e-9;

/// Default cap on the working support size of a convolution.
pub const DEFAULT_SUPPORT_CAP: usize = 1 << 20;

/// A finite-atom law with `E X = 0`, `E X² = 1`, and derived `ρ = E|X|³`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    label: String,
    /// `(value, probability)`, ascending by value.
    atoms: Vec<(f64, f64)>,
    rho: f64,
}

impl DiscreteDistribution {
    /// Build a distribution from raw atoms, validating the constraints:
    /// probabilities positive and summing to 1, `E X = 0`, `E X² = 1`, all
    /// within 1e-12.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self, Error> {
        Self::with_label(atoms, None)
    }

    fn with_label(mut atoms: Vec<(f64, f64)>, label: Option<String>) -> Result<Self, Error> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms given".into()));
        }
        for &(x, p) in &atoms {
            if !x.is_finite() || !p.is_finite() || p <= 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "atom ({x}, {p}) must have a finite value and positive probability"
                )));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution("duplicate atom values".into()));
        }
        let mass: f64 = atoms.iter().map(|&(_, p)| p).sum();
        let mean: f64 = atoms.iter().map(|&(x, p)| p * x).sum();
        let second: f64 = atoms.iter().map(|&(x, p)| p * x * x).sum();
        if (mass - 1.0).abs() > MOMENT_TOL {
            return Err(Error::InvalidDistribution(format!("total mass is {mass}, not 1")));
        }
        if mean.abs() > MOMENT_TOL {
            return Err(Error::InvalidDistribution(format!("mean is {mean}, not 0")));
        }
        if (second - 1.0).abs() > MOMENT_TOL {
            return Err(Error::InvalidDistribution(format!("second moment is {second}, not 1")));
        }
        let rho: f64 = atoms.iter().map(|&(x, p)| p * x.abs().powi(3)).sum();
        let label = label.unwrap_or_else(|| {
            let parts: Vec<String> =
                atoms.iter().map(|&(x, p)| format!("({x:.6},{p:.6})")).collect();
            format!("atoms[{}]", parts.join(","))
        });
        Ok(DiscreteDistribution { label, atoms, rho })
    }

    /// `±1` with probability `1/2` each; the simplest standardized law,
    /// with `ρ = 1`.
    pub fn rademacher() -> Self {
        Self::with_label(vec![(-1.0, 0.5), (1.0, 0.5)], Some("rademacher".into()))
            .expect("rademacher satisfies the constraints")
    }

    /// The unique two-atom law carrying probability `p` on its negative atom:
    /// `−√(q/p)` w.p. `p` and `√(p/q)` w.p. `q = 1−p`.
    pub fn two_atom(p: f64) -> Result<Self, Error> {
        if !(1e-6..=1.0 - 1e-6).contains(&p) {
            return Err(Error::InvalidDistribution(format!(
                "two-atom weight p={p} is outside [1e-6, 1-1e-6]"
            )));
        }
        let q = 1.0 - p;
        let atoms = vec![(-(q / p).sqrt(), p), ((p / q).sqrt(), q)];
        Self::with_label(atoms, Some(format!("two-atom(p={p})")))
    }

    /// Two-atom law with a prescribed third absolute moment
    /// `ρ = (p² + q²)/√(pq)`, solved in closed form (the negative atom gets
    /// the larger weight).
    pub fn two_atom_with_rho(rho: f64) -> Result<Self, Error> {
        if !rho.is_finite() || rho < 1.0 {
            return Err(Error::InvalidDistribution(format!("rho must be >= 1, got {rho}")));
        }
        // pq solves 4u² − (4+ρ²)u + 1 = 0; the admissible root keeps u ≤ 1/4.
        let s = 4.0 + rho * rho;
        let u = (s - (s * s - 16.0).sqrt()) / 8.0;
        let p = 0.5 * (1.0 + (1.0 - 4.0 * u).sqrt());
        let mut dist = Self::two_atom(p)?;
        dist.label = format!("two-atom(rho={rho})");
        Ok(dist)
    }

    /// Symmetric three-atom law `±1/√(2p)` w.p. `p` each and `0` otherwise,
    /// with `ρ = 1/√(2p)`.
    pub fn three_atom_symmetric(p: f64) -> Result<Self, Error> {
        if !(1e-6..0.5).contains(&p) {
            return Err(Error::InvalidDistribution(format!(
                "three-atom weight p={p} must lie in [1e-6, 0.5)"
            )));
        }
        let a = 1.0 / (2.0 * p).sqrt();
        Self::with_label(
            vec![(-a, p), (0.0, 1.0 - 2.0 * p), (a, p)],
            Some(format!("three-atom(p={p})")),
        )
    }

    /// The law of `−X`.
    pub fn mirror(&self) -> Self {
        let atoms = self.atoms.iter().rev().map(|&(x, p)| (-x, p)).collect();
        DiscreteDistribution {
            label: format!("mirror({})", self.label),
            atoms,
            rho: self.rho,
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Derived `ρ = E|X|³`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Exact law of the normalized sum `S_n/√n`, built by `n−1` sparse
/// convolutions with merging of equal support points.
#[derive(Debug, Clone)]
pub struct Convolution {
    n: u64,
    rho: f64,
    /// Support of `S_n/√n`, ascending.
    points: Vec<f64>,
    mass: Vec<f64>,
    /// `suffix[i] = Σ_{j ≥ i} mass[j]`; `suffix[len] = 0`. Accumulated from
    /// the top so small tail probabilities stay accurate.
    suffix: Vec<f64>,
}

impl Convolution {
    pub fn build(dist: &DiscreteDistribution, n: u64) -> Result<Self, Error> {
        Self::build_with_cap(dist, n, DEFAULT_SUPPORT_CAP)
    }

    pub fn build_with_cap(
        dist: &DiscreteDistribution,
        n: u64,
        cap: usize,
    ) -> Result<Self, Error> {
        if n < 1 {
            return Err(Error::Domain("sample size n must be >= 1".into()));
        }
        let base = dist.atoms();
        let mut acc: Vec<(f64, f64)> = base.to_vec();
        for _ in 1..n {
            let needed = acc.len() * base.len();
            if needed > cap {
                return Err(Error::SupportCapExceeded { needed, cap });
            }
            let mut next = Vec::with_capacity(needed);
            for &(v, m) in &acc {
                for &(w, q) in base {
                    next.push((v + w, m * q));
                }
            }
            next.sort_by(|a, b| a.0.total_cmp(&b.0));
            acc = merge_equal(next);
        }
        let sqrt_n = (n as f64).sqrt();
        let points: Vec<f64> = acc.iter().map(|&(v, _)| v / sqrt_n).collect();
        let mass: Vec<f64> = acc.iter().map(|&(_, m)| m).collect();
        let mut suffix = vec![0.0; mass.len() + 1];
        for i in (0..mass.len()).rev() {
            suffix[i] = suffix[i + 1] + mass[i];
        }
        Ok(Convolution { n, rho: dist.rho(), points, mass, suffix })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total probability mass over the support.
    pub fn total_mass(&self) -> f64 {
        self.suffix[0]
    }

    /// `P(S_n/√n ≤ x)`, right-continuous in `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.total_mass() - self.upper_tail_gt(x)
    }

    /// `P(S_n/√n > x)`.
    pub fn upper_tail_gt(&self, x: f64) -> f64 {
        let i = self.points.partition_point(|&v| v <= x);
        self.suffix[i]
    }

    /// Support point `i` of the normalized sum and its mass.
    pub fn atom(&self, i: usize) -> (f64, f64) {
        (self.points[i], self.mass[i])
    }

    /// `P(S_n/√n > points[i])`, the upper tail just right of atom `i`.
    pub fn tail_right_of(&self, i: usize) -> f64 {
        self.suffix[i + 1]
    }

    /// `P(S_n/√n ≥ points[i])`, the upper tail just left of atom `i`.
    pub fn tail_at_or_above(&self, i: usize) -> f64 {
        self.suffix[i]
    }

    /// Indices of support points inside `[lo, hi]`.
    pub fn atom_indices_in(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.points.partition_point(|&v| v < lo);
        let end = self.points.partition_point(|&v| v <= hi);
        start..end
    }
}

/// Merge sorted `(value, mass)` pairs whose values coincide up to a relative
/// resolution of 1e-9.
fn merge_equal(sorted: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for (v, m) in sorted {
        match out.last_mut() {
            Some(&mut (last, ref mut acc)) if (v - last) <= MERGE_REL * last.abs().max(1.0) => {
                *acc += m;
            }
            _ => out.push((v, m)),
        }
    }
    out
}

/// Exact probability that the normalized n-fold sum is `≤ x`.
///
/// One-shot convenience wrapper; callers issuing many queries against the
/// same `(dist, n)` should build a [`Convolution`] once and reuse it.
pub fn exact_convolution_cdf(dist: &DiscreteDistribution, n: u64, x: f64) -> Result<f64, Error> {
    Ok(Convolution::build(dist, n)?.cdf(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rademacher_basics() {
        let d = DiscreteDistribution::rademacher();
        assert_eq!(d.rho(), 1.0);
        assert_eq!(exact_convolution_cdf(&d, 1, 0.0).unwrap(), 0.5);
        assert_eq!(exact_convolution_cdf(&d, 1, 1.0).unwrap(), 1.0);
        assert_eq!(exact_convolution_cdf(&d, 1, -1.0).unwrap(), 0.5);
    }

    #[test]
    fn rademacher_four_fold_jump() {
        // S4/2 = 2 holds the top atom of mass 1/16.
        let d = DiscreteDistribution::rademacher();
        let conv = Convolution::build(&d, 4).unwrap();
        assert_eq!(conv.cdf(2.0), 1.0);
        assert!(close(conv.cdf(2.0 - 1e-9), 15.0 / 16.0, 1e-15));
        assert!(close(conv.upper_tail_gt(1.99), 1.0 / 16.0, 1e-15));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn rademacher_matches_binomial_enumeration() {
        // S_n = 2K − n with K ~ Bin(n, 1/2); partial binomial sums are exact
        // dyadic rationals for n = 16.
        let n: usize = 16;
        let d = DiscreteDistribution::rademacher();
        let conv = Convolution::build(&d, n as u64).unwrap();
        assert_eq!(conv.len(), n + 1);
        let mut choose = vec![0f64; n + 1];
        choose[0] = 1.0;
        for _ in 0..n {
            for j in (1..=n).rev() {
                choose[j] += choose[j - 1];
            }
        }
        let scale = 0.5f64.powi(n as i32);
        let mut cum = 0.0;
        for k in 0..=n {
            cum += choose[k] * scale;
            let x = (2.0 * k as f64 - n as f64) / (n as f64).sqrt();
            assert_eq!(conv.cdf(x), cum, "k={k}");
        }
    }

    #[test]
    fn two_atom_constructor_solves_the_moment_equations() {
        let d = DiscreteDistribution::two_atom(0.2).unwrap();
        let atoms = d.atoms();
        assert_eq!(atoms.len(), 2);
        // (-2, 0.2), (0.5, 0.8)
        assert!(close(atoms[0].0, -2.0, 1e-12));
        assert!(close(atoms[1].0, 0.5, 1e-12));
        assert!(close(d.rho(), (0.04 + 0.64) / (0.2f64 * 0.8).sqrt(), 1e-12));
    }

    #[test]
    fn two_atom_with_rho_hits_the_target() {
        for &target in &[1.0, 1.5, 2.5, 4.0] {
            let d = DiscreteDistribution::two_atom_with_rho(target).unwrap();
            assert!(close(d.rho(), target, 1e-9), "rho {} vs {}", d.rho(), target);
        }
        assert!(DiscreteDistribution::two_atom_with_rho(0.5).is_err());
    }

    #[test]
    fn three_atom_symmetric_is_standardized() {
        let d = DiscreteDistribution::three_atom_symmetric(0.3).unwrap();
        assert_eq!(d.atoms().len(), 3);
        assert!(close(d.rho(), 1.0 / 0.6f64.sqrt(), 1e-12));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        // Second moment 1.16, not 1.
        let bad = DiscreteDistribution::new(vec![(-2.0, 0.2), (0.6, 0.8)]);
        assert!(matches!(bad, Err(Error::InvalidDistribution(_))));
        // Nonzero mean.
        assert!(DiscreteDistribution::new(vec![(-0.5, 0.5), (1.0, 0.5)]).is_err());
        // Mass short of 1.
        assert!(DiscreteDistribution::new(vec![(-1.0, 0.4), (1.0, 0.5)]).is_err());
        assert!(DiscreteDistribution::new(vec![]).is_err());
    }

    #[test]
    fn mass_is_conserved_across_deep_convolutions() {
        for dist in [
            DiscreteDistribution::rademacher(),
            DiscreteDistribution::two_atom_with_rho(2.5).unwrap(),
            DiscreteDistribution::three_atom_symmetric(0.25).unwrap(),
        ] {
            let conv = Convolution::build(&dist, 64).unwrap();
            assert!(
                (conv.total_mass() - 1.0).abs() <= 1e-12,
                "{}: mass {}",
                dist.label(),
                conv.total_mass()
            );
        }
    }

    #[test]
    fn colliding_sums_merge_to_a_linear_support() {
        // The symmetric three-atom law has sums k·a + m·(−a) that collapse
        // onto (k−m)·a; merging must keep the support at 2n+1 points instead
        // of 3^n.
        let d = DiscreteDistribution::three_atom_symmetric(0.25).unwrap();
        let conv = Convolution::build(&d, 20).unwrap();
        assert_eq!(conv.len(), 41);
        assert!((conv.total_mass() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn support_cap_is_enforced() {
        let d = DiscreteDistribution::three_atom_symmetric(0.3).unwrap();
        let err = Convolution::build_with_cap(&d, 64, 16).unwrap_err();
        assert!(matches!(err, Error::SupportCapExceeded { .. }));
    }

    #[test]
    fn mirror_flips_the_support() {
        let d = DiscreteDistribution::two_atom(0.2).unwrap();
        let m = d.mirror();
        assert!(close(m.atoms()[0].0, -0.5, 1e-12));
        assert!(close(m.atoms()[1].0, 2.0, 1e-12));
        assert_eq!(m.rho(), d.rho());
    }
}
