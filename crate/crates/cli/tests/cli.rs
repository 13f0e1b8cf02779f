//! Exit-code and schema contract of the command-line interface.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specgap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn bound_reports_flat_value() {
    let out = run(&["bound", "--K", "0", "--N", "4", "--d", "3.14159265358979"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lambda_hat = 1.0000000000000020e0"), "{text}");
    assert!(text.contains("method = closed-form"));
}

#[test]
fn bound_beyond_dmax_exits_2_and_names_dmax() {
    let out = run(&["bound", "--K", "2", "--N", "3", "--d", "3.2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("d_max"), "{err}");
    assert!(err.contains("3.14159"), "{err}");
}

#[test]
fn bound_rejects_tolerance_outside_contract() {
    let out = run(&["bound", "--K", "0", "--N", "2", "--d", "1", "--tol", "1e-2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bound", "--K", "0", "--N", "2", "--d", "1", "--tol", "1e-14"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_csv_uses_sweep_schema() {
    let out = run(&[
        "bound", "--K", "1", "--N", "3", "--d", "1.5", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    assert_eq!(lines.next(), Some("K,N,d,lambda_hat,method,achieved_tol"));
    assert_eq!(lines.clone().count(), 1);
    assert!(lines.next().unwrap().contains(",shooting,"));
}

#[test]
fn sweep_json_mirrors_csv_fields() {
    let out = run(&[
        "sweep", "--K", "0", "--N", "2,3", "--d", "1:2:3", "--format", "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("{\"schema\":1,\"rows\":["), "{text}");
    assert!(text.contains("\"lambda_hat\":"));
    assert!(text.contains("\"monotonicity_violations\":0"));
    assert_eq!(text.matches("{\"K\":").count(), 6);
}

#[test]
fn model_trajectory_csv_schema() {
    let out = run(&[
        "model", "--R", "0", "--l", "3", "--lambda", "1", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    assert_eq!(lines.next(), Some("s,v,dv,rho"));
    let first = lines.next().unwrap();
    // Starts at the series offset with v near -1 and rho near 0.
    assert!(first.contains(",-9.99999"), "{first}");
}

#[test]
fn model_summary_reports_profile() {
    let out = run(&["model", "--R", "2", "--l", "3", "--lambda", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("b = 1.570796326"), "{text}");
    assert!(text.contains("m = 1.00000000"), "{text}");
}

#[test]
fn model_below_threshold_exits_1() {
    let out = run(&["model", "--R", "2", "--l", "3", "--lambda", "2.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no critical point"));
}

#[test]
fn verify_filter_matching_nothing_passes_with_zero_rows() {
    let out = run(&["verify", "--filter", "zzz", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2); // schema comment + header only
}

#[test]
fn verify_filter_selects_by_substring() {
    let out = run(&["verify", "--filter", "sphere", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5, "{text}");
    assert_eq!(
        text.lines().nth(1),
        Some("space,K,N,diameter,lambda1,lambda_hat,margin,pass")
    );
    for row in text.lines().skip(2) {
        assert!(row.starts_with("sphere-"));
        assert!(row.ends_with(",true"));
    }
}

#[test]
fn sweep_is_continuous_across_the_branch_switch_at_k_zero() {
    let out = run(&[
        "sweep", "--K", "-0.05,0,0.05", "--N", "3", "--d", "1.5", "--format", "csv",
    ]);
    assert!(out.status.success());
    let mut lams = Vec::new();
    for line in stdout(&out).lines().skip(2) {
        if line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        lams.push(cells[3].parse::<f64>().unwrap());
    }
    assert_eq!(lams.len(), 3);
    let flat = std::f64::consts::PI.powi(2) / 2.25;
    // Nondecreasing in K and close to the flat value on both sides.
    assert!(lams[0] <= lams[1] && lams[1] <= lams[2]);
    for lam in lams {
        assert!((lam - flat).abs() < 0.05 * flat, "{lam} vs {flat}");
    }
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all checks passed"));
}
