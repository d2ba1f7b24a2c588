//! `cltbound` — evaluate, optimize, tabulate, and verify the nonuniform
//! Berry-Esseen bound C(t).
//!
//! Exit codes are a stable scripting contract: 0 on success, 1 when a
//! candidate is infeasible or a verification finds violations, 2 on usage
//! errors (bad flags or out-of-domain inputs).

use clap::{Parser, Subcommand, ValueEnum};
use cltbound::{
    center_quantities, check_feasibility, ci_bound, compute_bounds, make_table, verify_bound,
    BoundParams, DiscreteDistribution, Error, OptimizedBound, TableRow,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

mod atoms;

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "cltbound", version, about = "Nonuniform Berry-Esseen bound C(t)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate C(t) = max{B_T, B_C} at explicit parameters (t, tau, b)
    Eval {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        b: f64,
        /// Also dump the center quantities and per-condition margins
        #[arg(long)]
        explain: bool,
    },
    /// Optimize (tau, b) per coordinate and emit a table
    Table {
        /// Explicit coordinate; repeatable
        #[arg(long = "t", value_name = "T", conflicts_with_all = ["t_min", "t_max", "t_step"])]
        t_values: Vec<f64>,
        #[arg(long, requires_all = ["t_max", "t_step"])]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        t_step: Option<f64>,
        #[arg(long, default_value_t = 0.001)]
        tau_step: f64,
        #[arg(long, default_value_t = 0.001)]
        b_step: f64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fail (exit 1) if any requested coordinate is infeasible
        #[arg(long)]
        strict: bool,
    },
    /// Check the bound against exact convolutions of a discrete law
    Verify {
        /// Built-in law: rademacher, two-atom (with --rho), three-atom (with --p)
        #[arg(long, conflicts_with = "atoms")]
        dist: Option<DistKind>,
        /// Third absolute moment for --dist two-atom
        #[arg(long)]
        rho: Option<f64>,
        /// Outer-atom weight for --dist three-atom
        #[arg(long)]
        p: Option<f64>,
        /// Explicit atoms, e.g. "(-2,0.2),(0.5,0.8)"
        #[arg(long)]
        atoms: Option<String>,
        #[arg(long, default_value_t = 16)]
        n: u64,
        #[arg(long, default_value_t = 3.3)]
        t_min: f64,
        #[arg(long, default_value_t = 6.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.1)]
        t_step: f64,
        #[arg(long, default_value_t = 0.001)]
        tau_step: f64,
        #[arg(long, default_value_t = 0.001)]
        b_step: f64,
    },
    /// Two-sided confidence bound for the sample mean
    Ci {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 0.001)]
        tau_step: f64,
        #[arg(long, default_value_t = 0.001)]
        b_step: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistKind {
    Rademacher,
    TwoAtom,
    ThreeAtom,
}

#[derive(Serialize)]
struct OutputRecord<I: Serialize, R: Serialize> {
    command: &'static str,
    inputs: I,
    #[serde(skip_serializing_if = "Option::is_none")]
    results: Option<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    feasibility: Option<serde_json::Value>,
}

fn emit<T: Serialize>(record: &T) {
    println!("{}", serde_json::to_string_pretty(record).expect("record serializes"));
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Eval { t, tau, b, explain } => cmd_eval(t, tau, b, explain),
        Command::Table { t_values, t_min, t_max, t_step, tau_step, b_step, format, out, strict } => {
            cmd_table(t_values, t_min, t_max, t_step, tau_step, b_step, format, out, strict)
        }
        Command::Verify { dist, rho, p, atoms, n, t_min, t_max, t_step, tau_step, b_step } => {
            cmd_verify(dist, rho, p, atoms, n, t_min, t_max, t_step, tau_step, b_step)
        }
        Command::Ci { n, eps, rho, tau_step, b_step } => cmd_ci(n, eps, rho, tau_step, b_step),
    }
}

#[derive(Serialize)]
struct EvalInputs {
    t: f64,
    tau: f64,
    b: f64,
}

fn cmd_eval(t: f64, tau: f64, b: f64, explain: bool) -> ExitCode {
    let params = match BoundParams::new(t, tau, b) {
        Ok(p) => p,
        Err(e) => return usage_error(&e.to_string()),
    };
    let quantities = center_quantities(&params);
    let inputs = EvalInputs { t, tau, b };
    match compute_bounds(&params, &quantities) {
        Ok(result) => {
            let feasibility = if explain {
                Some(serde_json::json!(check_feasibility(&params, &quantities)))
            } else {
                None
            };
            let results = if explain {
                serde_json::json!({ "bound": result, "quantities": quantities })
            } else {
                serde_json::json!(result)
            };
            emit(&OutputRecord { command: "eval", inputs, results: Some(results), feasibility });
            ExitCode::SUCCESS
        }
        Err(report) => {
            emit(&OutputRecord::<_, serde_json::Value> {
                command: "eval",
                inputs,
                results: None,
                feasibility: Some(serde_json::json!(report)),
            });
            eprintln!(
                "infeasible candidate: {} violated",
                report.first_violation().unwrap_or("(unknown)")
            );
            ExitCode::from(EXIT_INFEASIBLE)
        }
    }
}

fn collect_ts(
    t_values: Vec<f64>,
    t_min: Option<f64>,
    t_max: Option<f64>,
    t_step: Option<f64>,
) -> Result<Vec<f64>, String> {
    let mut ts = t_values;
    if let (Some(lo), Some(hi), Some(step)) = (t_min, t_max, t_step) {
        if !step.is_finite() || step <= 0.0 {
            return Err(format!("t-step must be positive, got {step}"));
        }
        if hi < lo {
            return Err(format!("t-max {hi} is below t-min {lo}"));
        }
        let mut k = 0u64;
        loop {
            let t = lo + step * k as f64;
            if t > hi + 1e-12 {
                break;
            }
            ts.push(t);
            k += 1;
        }
    }
    if ts.is_empty() {
        return Err("no coordinates given: pass --t or --t-min/--t-max/--t-step".into());
    }
    ts.sort_by(|a, b| a.total_cmp(b));
    Ok(ts)
}

fn format_row(row: &TableRow, sep: char) -> String {
    match &row.values {
        Some(v) => format!(
            "{:.4}{sep}{:.4}{sep}{:.4}{sep}{:.4}{sep}{:.8}{sep}{:.8}",
            row.t, v.tau, v.b, v.c, v.c_over_t3, v.nagaev
        ),
        None => format!("{:.4}{sep}infeasible{sep}{sep}{sep}{sep}", row.t),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    t_values: Vec<f64>,
    t_min: Option<f64>,
    t_max: Option<f64>,
    t_step: Option<f64>,
    tau_step: f64,
    b_step: f64,
    format: TableFormat,
    out: Option<PathBuf>,
    strict: bool,
) -> ExitCode {
    let ts = match collect_ts(t_values, t_min, t_max, t_step) {
        Ok(ts) => ts,
        Err(msg) => return usage_error(&msg),
    };
    let rows = match make_table(&ts, tau_step, b_step) {
        Ok(rows) => rows,
        Err(e) => return usage_error(&e.to_string()),
    };
    let body = match format {
        TableFormat::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        TableFormat::Csv | TableFormat::Tsv => {
            let sep = if matches!(format, TableFormat::Csv) { ',' } else { '\t' };
            let mut text = format!(
                "t{sep}tau{sep}b{sep}C{sep}C_over_t3{sep}nagaev\n"
            );
            for row in &rows {
                text.push_str(&format_row(row, sep));
                text.push('\n');
            }
            text
        }
    };
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, &body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    } else {
        print!("{body}");
    }
    if strict && rows.iter().any(|r| r.values.is_none()) {
        eprintln!("error: some coordinates were infeasible");
        return ExitCode::from(EXIT_INFEASIBLE);
    }
    ExitCode::SUCCESS
}

fn build_distribution(
    dist: Option<DistKind>,
    rho: Option<f64>,
    p: Option<f64>,
    atoms: Option<String>,
) -> Result<DiscreteDistribution, (String, u8)> {
    let usage = |m: String| (m, EXIT_USAGE);
    match (dist, atoms) {
        (None, Some(text)) => {
            let parsed = atoms::parse_atoms(&text).map_err(usage)?;
            DiscreteDistribution::new(parsed).map_err(|e| usage(e.to_string()))
        }
        (Some(DistKind::Rademacher), None) | (None, None) => Ok(DiscreteDistribution::rademacher()),
        (Some(DistKind::TwoAtom), None) => {
            let rho = rho.ok_or_else(|| usage("--dist two-atom needs --rho".into()))?;
            DiscreteDistribution::two_atom_with_rho(rho).map_err(|e| usage(e.to_string()))
        }
        (Some(DistKind::ThreeAtom), None) => {
            let p = p.ok_or_else(|| usage("--dist three-atom needs --p".into()))?;
            DiscreteDistribution::three_atom_symmetric(p).map_err(|e| usage(e.to_string()))
        }
        (Some(_), Some(_)) => Err(usage("--dist and --atoms are mutually exclusive".into())),
    }
}

#[derive(Serialize)]
struct VerifyInputs {
    distribution: String,
    n: u64,
    t_min: f64,
    t_max: f64,
    t_step: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    dist: Option<DistKind>,
    rho: Option<f64>,
    p: Option<f64>,
    atoms: Option<String>,
    n: u64,
    t_min: f64,
    t_max: f64,
    t_step: f64,
    tau_step: f64,
    b_step: f64,
) -> ExitCode {
    let dist = match build_distribution(dist, rho, p, atoms) {
        Ok(d) => d,
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    let ts = match collect_ts(Vec::new(), Some(t_min), Some(t_max), Some(t_step)) {
        Ok(ts) => ts,
        Err(msg) => return usage_error(&msg),
    };
    let provider = OptimizedBound { tau_step, b_step };
    match verify_bound(&dist, n, &ts, &provider) {
        Ok(report) => {
            let ok = report.violations.is_empty();
            emit(&OutputRecord {
                command: "verify",
                inputs: VerifyInputs {
                    distribution: dist.label().to_string(),
                    n,
                    t_min,
                    t_max,
                    t_step,
                },
                results: Some(&report),
                feasibility: None,
            });
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("bound violated at {} coordinate(s)", report.violations.len());
                ExitCode::from(EXIT_INFEASIBLE)
            }
        }
        Err(e @ Error::NoFeasibleCandidate { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

#[derive(Serialize)]
struct CiInputs {
    n: u64,
    eps: f64,
    rho: f64,
}

fn cmd_ci(n: u64, eps: f64, rho: f64, tau_step: f64, b_step: f64) -> ExitCode {
    let provider = OptimizedBound { tau_step, b_step };
    match ci_bound(n, eps, rho, &provider) {
        Ok(bound) => {
            emit(&OutputRecord {
                command: "ci",
                inputs: CiInputs { n, eps, rho },
                results: Some(&bound),
                feasibility: None,
            });
            ExitCode::SUCCESS
        }
        Err(e @ Error::NoFeasibleCandidate { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
        Err(e) => usage_error(&e.to_string()),
    }
}
