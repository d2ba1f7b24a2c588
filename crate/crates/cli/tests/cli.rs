//! End-to-end tests of the `cltbound` binary: flags, exit codes, and the
//! machine-readable output formats.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cltbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn eval_reproduces_a_published_row() {
    let out = run(&["eval", "--t", "3.20", "--tau", "0.4587", "--b", "1.9650"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["command"], "eval");
    let c = v["results"]["c_value"].as_f64().unwrap();
    assert!((c - 28.2363).abs() <= 5e-4, "c = {c}");
    assert!(v["feasibility"].is_null());
}

#[test]
fn eval_explain_dumps_quantities_and_margins() {
    let out = run(&["eval", "--t", "3.20", "--tau", "0.4587", "--b", "1.9650", "--explain"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let q = &v["results"]["quantities"];
    assert!((q["beta_hi"].as_f64().unwrap() - 1.00107).abs() <= 1e-4);
    assert!((q["m2_hi"].as_f64().unwrap() - 1.2239).abs() <= 1e-4);
    let feas = &v["feasibility"];
    assert_eq!(feas["cond_22"]["satisfied"], true);
    assert!(feas["cond_22"]["margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn eval_rejects_small_t_with_usage_code() {
    let out = run(&["eval", "--t", "3.0", "--tau", "0.45", "--b", "1.9"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("3.18"));
}

#[test]
fn eval_reports_infeasible_candidates_with_code_one() {
    // tau = 0.46 exceeds the cap 1 - sqrt(3)/3.2 = 0.45873.
    let out = run(&["eval", "--t", "3.20", "--tau", "0.46", "--b", "1.9650"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert!(v["results"].is_null());
    assert_eq!(v["feasibility"]["range_tau"]["satisfied"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("range_tau"));
}

#[test]
fn eval_roundtrips_at_full_precision() {
    let out = run(&["eval", "--t", "3.20", "--tau", "0.4587", "--b", "1.9650"]);
    let v = stdout_json(&out);
    let c = v["results"]["c_value"].as_f64().unwrap();
    let reparsed: f64 = serde_json::to_string(&c).unwrap().parse().unwrap();
    assert_eq!(c.to_bits(), reparsed.to_bits());
}

#[test]
fn table_matches_published_column_at_grid_resolution() {
    let out = run(&["table", "--t", "3.3", "--t", "4.0", "--t", "5.0"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,tau,b,C,C_over_t3,nagaev");
    let published = [27.4681, 22.1853, 16.0240];
    for (line, pub_c) in lines.zip(published) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6);
        let c: f64 = fields[3].parse().unwrap();
        assert!((c - pub_c).abs() <= 0.011, "{line} vs {pub_c}");
        // 4-decimal parameters, 8-decimal bound columns.
        assert_eq!(fields[1].split('.').nth(1).unwrap().len(), 4);
        assert_eq!(fields[4].split('.').nth(1).unwrap().len(), 8);
    }
}

#[test]
fn table_range_flags_cover_the_second_table() {
    let out = run(&["table", "--t-min", "6", "--t-max", "9", "--t-step", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let published = [11.8046, 9.0590, 7.2512, 6.0329];
    for (line, pub_c) in text.lines().skip(1).zip(published) {
        let c: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!((c - pub_c).abs() <= 0.011, "{line} vs {pub_c}");
    }
}

#[test]
fn table_first_row_of_the_published_domain() {
    let out = run(&["table", "--t", "3.18"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let c: f64 = text.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!((c - 28.4057).abs() <= 0.011);
}

#[test]
fn table_csv_reparses_to_consistent_values() {
    let out = run(&["table", "--t", "4.0", "--t", "6.5"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.ends_with('\n'));
    for line in text.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let (t, _tau, _b, c, c_over_t3, nagaev) =
            (fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]);
        // Printed columns agree with each other at print precision.
        assert!((c_over_t3 - c / t.powi(3)).abs() <= 1e-4);
        assert!((nagaev - 29.1174 / (1.0 + t.powi(3))).abs() <= 1e-8);
    }
}

#[test]
fn table_tsv_and_json_formats() {
    let out = run(&["table", "--t", "4.0", "--format", "tsv"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("t\ttau\tb\tC"));

    let out = run(&["table", "--t", "4.0", "--format", "json"]);
    let v = stdout_json(&out);
    let row = &v[0];
    assert_eq!(row["t"], 4.0);
    assert!((row["values"]["c"].as_f64().unwrap() - 22.1853).abs() <= 0.011);
}

#[test]
fn table_writes_the_out_file() {
    let dir = std::env::temp_dir().join(format!("cltbound-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    let out = run(&["table", "--t", "5.0", "--out", path.to_str().unwrap(), "--strict"]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,tau,b,C"));
    assert_eq!(text.lines().count(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn table_with_no_coordinates_is_a_usage_error() {
    let out = run(&["table"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_rademacher_full_grid_has_no_violations() {
    let out = run(&[
        "verify", "--dist", "rademacher", "--n", "16", "--t-min", "3.3", "--t-max", "6",
        "--t-step", "0.1",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["results"]["violations"].as_array().unwrap().len(), 0);
    let ratio = v["results"]["max_ratio"].as_f64().unwrap();
    assert!(ratio > 0.0 && ratio <= 1.0);
}

#[test]
fn verify_single_point_single_sample() {
    let out = run(&[
        "verify", "--dist", "rademacher", "--n", "1", "--t-min", "3.3", "--t-max", "3.3",
        "--t-step", "0.1",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let ratio = v["results"]["max_ratio"].as_f64().unwrap();
    assert!(ratio > 0.0 && ratio < 0.01);
}

#[test]
fn verify_rejects_bad_moment_specs() {
    // Centered, but the second moment is 0.2*4.84 + 0.8*0.3025 = 1.21.
    let out = run(&["verify", "--atoms", "(-2.2,0.2),(0.55,0.8)", "--n", "4"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("second moment"));
    // Uncentered specs fail on the mean.
    let out = run(&["verify", "--atoms", "(-2,0.2),(0.6,0.8)", "--n", "4"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mean"));
}

#[test]
fn verify_accepts_atoms_meeting_the_constraints() {
    let out = run(&[
        "verify", "--atoms", "(-2,0.2),(0.5,0.8)", "--n", "8", "--t-min", "3.3", "--t-max",
        "3.5", "--t-step", "0.1",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_two_atom_by_rho() {
    let out = run(&[
        "verify", "--dist", "two-atom", "--rho", "2.5", "--n", "4", "--t-min", "3.4", "--t-max",
        "3.4", "--t-step", "0.1",
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["verify", "--dist", "two-atom", "--n", "4"]);
    assert_eq!(code(&out), 2, "missing --rho must be a usage error");
}

#[test]
fn ci_composes_published_level_constants() {
    let out = run(&["ci", "--n", "100", "--eps", "0.5", "--rho", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let total = v["results"]["total"].as_f64().unwrap();
    assert!((total - 0.025639).abs() <= 3e-5, "total = {total}");
}

#[test]
fn ci_at_the_uniform_crossing() {
    let out = run(&["ci", "--n", "121", "--eps", "0.3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["results"]["t"].as_f64().unwrap() - 3.3).abs() <= 1e-12);
    assert!((v["results"]["c_value"].as_f64().unwrap() - 27.4681).abs() <= 0.011);
}

#[test]
fn ci_below_domain_is_a_usage_error() {
    let out = run(&["ci", "--n", "4", "--eps", "0.1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("3.18"));
}

#[test]
fn unknown_flags_exit_with_usage_code() {
    let out = run(&["eval", "--t", "3.2", "--tau", "0.45", "--b", "1.9", "--bogus"]);
    assert_eq!(code(&out), 2);
}
