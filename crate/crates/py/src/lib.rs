//! Python bindings for the nonuniform Berry-Esseen bound toolkit.

use cltbound::{
    center_quantities, compute_bounds, BoundParams, DiscreteDistribution, Error, OptimizeOutcome,
    OptimizedBound,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::NoFeasibleCandidate { .. } => PyRuntimeError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Evaluation of one explicit candidate (t, tau, b).
#[pyclass(frozen)]
struct BoundEvaluation {
    #[pyo3(get)]
    feasible: bool,
    /// Names of violated conditions; empty when feasible.
    #[pyo3(get)]
    violations: Vec<String>,
    #[pyo3(get)]
    b_tail: f64,
    #[pyo3(get)]
    b_center: Option<f64>,
    #[pyo3(get)]
    c_value: Option<f64>,
    #[pyo3(get)]
    nonuniform_at_t: Option<f64>,
    #[pyo3(get)]
    nagaev_at_t: f64,
}

#[pymethods]
impl BoundEvaluation {
    fn __repr__(&self) -> String {
        match self.c_value {
            Some(c) => format!("BoundEvaluation(feasible=True, c_value={c:.4})"),
            None => format!("BoundEvaluation(feasible=False, violations={:?})", self.violations),
        }
    }
}

/// Result of the grid search at one coordinate.
#[pyclass(frozen)]
struct Optimum {
    #[pyo3(get)]
    t: f64,
    #[pyo3(get)]
    tau: f64,
    #[pyo3(get)]
    b: f64,
    #[pyo3(get)]
    c_value: f64,
    #[pyo3(get)]
    evaluations: u64,
    #[pyo3(get)]
    feasible_count: u64,
}

#[pymethods]
impl Optimum {
    fn __repr__(&self) -> String {
        format!(
            "Optimum(t={}, tau={:.4}, b={:.4}, c_value={:.4}, evaluations={})",
            self.t, self.tau, self.b, self.c_value, self.evaluations
        )
    }
}

/// One optimized table row; `c` and friends are None when no candidate was
/// feasible at this coordinate.
#[pyclass(frozen)]
struct TableEntry {
    #[pyo3(get)]
    t: f64,
    #[pyo3(get)]
    tau: Option<f64>,
    #[pyo3(get)]
    b: Option<f64>,
    #[pyo3(get)]
    c: Option<f64>,
    #[pyo3(get)]
    c_over_t3: Option<f64>,
    #[pyo3(get)]
    nagaev: Option<f64>,
}

#[pymethods]
impl TableEntry {
    fn __repr__(&self) -> String {
        match self.c {
            Some(c) => format!("TableEntry(t={}, c={c:.4})", self.t),
            None => format!("TableEntry(t={}, infeasible)", self.t),
        }
    }
}

/// Verification outcome for one (distribution, n) pair over a t-grid.
#[pyclass(frozen)]
struct Report {
    #[pyo3(get)]
    distribution: String,
    #[pyo3(get)]
    n: u64,
    #[pyo3(get)]
    max_ratio: f64,
    #[pyo3(get)]
    violations: Vec<f64>,
}

#[pymethods]
impl Report {
    fn __repr__(&self) -> String {
        format!(
            "Report(distribution='{}', n={}, max_ratio={:.6}, violations={})",
            self.distribution,
            self.n,
            self.max_ratio,
            self.violations.len()
        )
    }
}

/// Two-sided confidence bound for the sample mean.
#[pyclass(frozen)]
struct CiResult {
    #[pyo3(get)]
    t: f64,
    #[pyo3(get)]
    c_value: f64,
    #[pyo3(get)]
    normal_term: f64,
    #[pyo3(get)]
    bound_term: f64,
    #[pyo3(get)]
    total: f64,
}

#[pymethods]
impl CiResult {
    fn __repr__(&self) -> String {
        format!("CiResult(t={}, total={:.6})", self.t, self.total)
    }
}

/// Upper-tail probability 1 - Phi(t) of the standard normal law.
#[pyfunction]
fn normal_cdf_complement(t: f64) -> f64 {
    cltbound::normal_cdf_complement(t)
}

/// Evaluate C(t) = max{B_T, B_C} at explicit parameters.
#[pyfunction]
fn evaluate(t: f64, tau: f64, b: f64) -> PyResult<BoundEvaluation> {
    let params = BoundParams::new(t, tau, b).map_err(to_py_err)?;
    let q = center_quantities(&params);
    let nagaev = cltbound::NAGAEV_CONSTANT / (1.0 + t.powi(3));
    Ok(match compute_bounds(&params, &q) {
        Ok(r) => BoundEvaluation {
            feasible: true,
            violations: Vec::new(),
            b_tail: r.b_tail,
            b_center: Some(r.b_center),
            c_value: Some(r.c_value),
            nonuniform_at_t: Some(r.nonuniform_at_t),
            nagaev_at_t: nagaev,
        },
        Err(report) => BoundEvaluation {
            feasible: false,
            violations: report
                .entries()
                .iter()
                .filter(|(_, c)| !c.satisfied)
                .map(|(name, _)| name.to_string())
                .collect(),
            b_tail: cltbound::tail_bound(b),
            b_center: None,
            c_value: None,
            nonuniform_at_t: None,
            nagaev_at_t: nagaev,
        },
    })
}

/// Grid-search (tau, b) to minimize C(t).
#[pyfunction]
#[pyo3(signature = (t, tau_step=0.001, b_step=0.001))]
fn optimize(t: f64, tau_step: f64, b_step: f64) -> PyResult<Optimum> {
    match cltbound::optimize(t, tau_step, b_step).map_err(to_py_err)? {
        OptimizeOutcome::Feasible(r) => Ok(Optimum {
            t: r.t,
            tau: r.best_tau,
            b: r.best_b,
            c_value: r.c_value,
            evaluations: r.evaluations,
            feasible_count: r.feasible_count,
        }),
        OptimizeOutcome::Infeasible { t, .. } => {
            Err(PyRuntimeError::new_err(format!("no feasible candidate at t = {t}")))
        }
    }
}

/// Optimize each coordinate and return table rows.
#[pyfunction]
#[pyo3(signature = (t_values, tau_step=0.001, b_step=0.001))]
fn table(t_values: Vec<f64>, tau_step: f64, b_step: f64) -> PyResult<Vec<TableEntry>> {
    let rows = cltbound::make_table(&t_values, tau_step, b_step).map_err(to_py_err)?;
    Ok(rows
        .into_iter()
        .map(|row| match row.values {
            Some(v) => TableEntry {
                t: row.t,
                tau: Some(v.tau),
                b: Some(v.b),
                c: Some(v.c),
                c_over_t3: Some(v.c_over_t3),
                nagaev: Some(v.nagaev),
            },
            None => TableEntry { t: row.t, tau: None, b: None, c: None, c_over_t3: None, nagaev: None },
        })
        .collect())
}

fn build_distribution(
    dist: &str,
    rho: Option<f64>,
    p: Option<f64>,
    atoms: Option<Vec<(f64, f64)>>,
) -> PyResult<DiscreteDistribution> {
    if let Some(atoms) = atoms {
        return DiscreteDistribution::new(atoms).map_err(to_py_err);
    }
    match dist {
        "rademacher" => Ok(DiscreteDistribution::rademacher()),
        "two-atom" => {
            let rho = rho.ok_or_else(|| PyValueError::new_err("two-atom needs rho"))?;
            DiscreteDistribution::two_atom_with_rho(rho).map_err(to_py_err)
        }
        "three-atom" => {
            let p = p.ok_or_else(|| PyValueError::new_err("three-atom needs p"))?;
            DiscreteDistribution::three_atom_symmetric(p).map_err(to_py_err)
        }
        other => Err(PyValueError::new_err(format!("unknown distribution '{other}'"))),
    }
}

/// Check the bound against exact convolutions of a finite-atom law.
#[pyfunction]
#[pyo3(signature = (n, t_min, t_max, t_step, dist="rademacher", rho=None, p=None, atoms=None,
                    tau_step=0.001, b_step=0.001))]
#[allow(clippy::too_many_arguments)]
fn verify(
    n: u64,
    t_min: f64,
    t_max: f64,
    t_step: f64,
    dist: &str,
    rho: Option<f64>,
    p: Option<f64>,
    atoms: Option<Vec<(f64, f64)>>,
    tau_step: f64,
    b_step: f64,
) -> PyResult<Report> {
    let dist = build_distribution(dist, rho, p, atoms)?;
    if !t_step.is_finite() || t_step <= 0.0 {
        return Err(PyValueError::new_err("t_step must be positive"));
    }
    let mut grid = Vec::new();
    let mut t = t_min;
    while t <= t_max + 1e-12 {
        grid.push(t);
        t += t_step;
    }
    let provider = OptimizedBound { tau_step, b_step };
    let report = cltbound::verify_bound(&dist, n, &grid, &provider).map_err(to_py_err)?;
    Ok(Report {
        distribution: report.distribution,
        n: report.n,
        max_ratio: report.max_ratio,
        violations: report.violations,
    })
}

/// Two-sided bound on P(|mean − θ| > eps) for n standardized observations.
#[pyfunction]
#[pyo3(signature = (n, eps, rho=1.0, tau_step=0.001, b_step=0.001))]
fn ci_bound(n: u64, eps: f64, rho: f64, tau_step: f64, b_step: f64) -> PyResult<CiResult> {
    let provider = OptimizedBound { tau_step, b_step };
    let ci = cltbound::ci_bound(n, eps, rho, &provider).map_err(to_py_err)?;
    Ok(CiResult {
        t: ci.t,
        c_value: ci.c_value,
        normal_term: ci.normal_term,
        bound_term: ci.bound_term,
        total: ci.total,
    })
}

#[pymodule]
fn cltbound_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NAGAEV_CONSTANT", cltbound::NAGAEV_CONSTANT)?;
    m.add("UNIFORM_CONSTANT", cltbound::UNIFORM_CONSTANT)?;
    m.add("T_MIN", cltbound::T_MIN)?;
    m.add_class::<BoundEvaluation>()?;
    m.add_class::<Optimum>()?;
    m.add_class::<TableEntry>()?;
    m.add_class::<Report>()?;
    m.add_class::<CiResult>()?;
    m.add_function(wrap_pyfunction!(normal_cdf_complement, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(ci_bound, m)?)?;
    Ok(())
}
