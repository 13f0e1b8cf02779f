//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use specgap::gapbound::{hat_lambda, remark_bound, SolveMethod};
use specgap::modelfun::model_profile;
use specgap::models::CurvatureDimension;
use specgap::ode::IntegratorConfig;
use specgap::spaces::{catalog, comparison_reports, verify_bound, SpaceKind};
use specgap::tridiag::assemble_neumann;
use specgap::weighted_flux_residual;

const PI: f64 = std::f64::consts::PI;

fn cd(k: f64, n: f64) -> CurvatureDimension<f64> {
    CurvatureDimension::new(k, n).unwrap()
}

fn cfg() -> IntegratorConfig<f64> {
    IntegratorConfig::default()
}

fn report(id: usize, name: &str, ok: bool, detail: String, started: Instant) -> bool {
    let secs = started.elapsed().as_secs_f64();
    println!(
        "[{id:2}] {} {name} ({secs:.2} s){}",
        if ok { "PASS" } else { "FAIL" },
        if detail.is_empty() {
            String::new()
        } else {
            format!(" — {detail}")
        }
    );
    ok
}

#[test]
fn criterion_01_zhong_yang_exactness() {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for &n in &[1.0, 2.0, 3.5, 10.0] {
        for &d in &[0.5, 1.0, PI] {
            let exact = PI * PI / (d * d);
            let lam = hat_lambda(&cd(0.0, n), d, 1e-10, SolveMethod::Auto)
                .unwrap()
                .lambda;
            worst = worst.max((lam - exact).abs());
            // The shooting path agrees with the closed form as well.
            let shot = hat_lambda(&cd(0.0, n), d, 1e-12, SolveMethod::Shooting)
                .unwrap()
                .lambda;
            assert!(
                (shot - exact).abs() <= 1e-9 * exact.max(1.0),
                "shooting off closed form at N={n}, d={d}: {shot} vs {exact}"
            );
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let ok = worst <= 1e-10 && elapsed < 1.0;
    let pass = report(
        1,
        "Zhong-Yang exactness: hat(0,N,d) = pi^2/d^2 within 1e-10",
        ok,
        format!("worst |err| = {worst:.2e}"),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_02_lichnerowicz_obata_endpoint() {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for &n in &[2.0, 3.0, 5.0] {
        let r = hat_lambda(&cd(n - 1.0, n), PI, 1e-6, SolveMethod::Both).unwrap();
        worst = worst.max((r.lambda - n).abs());
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let ok = worst <= 1e-5 && elapsed < 5.0;
    let pass = report(
        2,
        "Lichnerowicz/Obata endpoint: hat(N-1,N,pi) = N within 1e-5 (both methods)",
        ok,
        format!("worst |err| = {worst:.2e}"),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_03_remark_inequality() {
    let t0 = Instant::now();
    let mut worst = f64::INFINITY;
    for &n in &[2.0, 3.0, 5.0] {
        for j in 1..=12 {
            let d = 0.2 + (PI - 0.2) * j as f64 / 12.0;
            let lam = hat_lambda(&cd(n - 1.0, n), d, 1e-9, SolveMethod::Shooting)
                .unwrap()
                .lambda;
            let bound = remark_bound(n, d).unwrap();
            worst = worst.min(lam - bound);
        }
    }
    let ok = worst >= -1e-8;
    let pass = report(
        3,
        "Remark inequality: hat(N-1,N,d) >= N/(1-cos^N(d/2)) - 1e-8",
        ok,
        format!("worst margin = {worst:.2e}"),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_04_monotonicity_in_d() {
    let t0 = Instant::now();
    let tol = 1e-9;
    let combos = [
        (-3.0, 2.0),
        (-1.0, 3.5),
        (-0.5, 10.0),
        (0.0, 1.2),
        (0.0, 2.0),
        (0.0, 5.0),
        (1.0, 2.2),
        (2.0, 3.0),
        (4.0, 5.0),
    ];
    let mut violations = 0usize;
    let mut min_drop = f64::INFINITY;
    for &(k, n) in &combos {
        let c = cd(k, n);
        let d_hi = match c.d_max() {
            Some(dm) => dm * 0.98,
            None => 3.0,
        };
        let mut prev = f64::INFINITY;
        for j in 0..8 {
            let d = 0.4 + (d_hi - 0.4) * j as f64 / 7.0;
            let lam = hat_lambda(&c, d, tol, SolveMethod::Shooting).unwrap().lambda;
            if j > 0 {
                min_drop = min_drop.min(prev - lam);
                if prev - lam <= 10.0 * tol {
                    violations += 1;
                }
            }
            prev = lam;
        }
    }
    let ok = violations == 0;
    let pass = report(
        4,
        "Monotonicity in d: strictly decreasing on 8-point grids, 9 (K,N) combos",
        ok,
        format!("violations = {violations}, smallest drop = {min_drop:.2e}"),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_05_dual_method_agreement() {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for &k in &[-2.0, 0.0, 1.5] {
        for &n in &[2.0, 3.5, 6.0] {
            for &d in &[0.8, 1.6, 2.4] {
                let c = cd(k, n);
                let shot = hat_lambda(&c, d, 1e-9, SolveMethod::Shooting)
                    .unwrap()
                    .lambda;
                let disc = hat_lambda(&c, d, 1e-9, SolveMethod::Discretization)
                    .unwrap()
                    .lambda;
                worst = worst.max((shot - disc).abs());
            }
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let ok = worst <= 1e-7 && elapsed < 30.0;
    let pass = report(
        5,
        "Dual-method agreement <= 1e-7 on the 27-point (K,N,d) grid",
        ok,
        format!("worst gap = {worst:.2e}"),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_06_model_function_closed_forms() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for &l in &[2.0, 3.0, 4.0] {
        let p = model_profile(l - 1.0, l, l, &cfg()).unwrap();
        let eb = (p.b - PI / 2.0).abs();
        let em = (p.m - 1.0).abs();
        if eb > 1e-8 || em > 1e-8 {
            ok = false;
            detail = format!("l = {l}: |b - pi/2| = {eb:.2e}, |m - 1| = {em:.2e}");
        }
    }
    let mut ms = Vec::new();
    for &lam in &[0.5, 1.0, 4.0] {
        let p = model_profile(0.0, 3.0, lam, &cfg()).unwrap();
        let scaled = p.b * lam.sqrt();
        if (scaled - 4.4934095).abs() > 1e-6 || (p.m - 0.21723).abs() > 1e-5 {
            ok = false;
            detail = format!("power at lambda = {lam}: b sqrt = {scaled}, m = {}", p.m);
        }
        ms.push(p.m);
    }
    let spread = ms.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - ms.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread > 1e-8 {
        ok = false;
        detail = format!("m spread over lambda = {spread:.2e}");
    }
    let pass = report(
        6,
        "Model closed forms: (b,m) = (pi/2,1) and the power-family profile",
        ok,
        detail,
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_07_weighted_flux_identity() {
    let t0 = Instant::now();
    let profiles = [
        (1.0, 2.0, 2.0),
        (2.0, 3.0, 3.0),
        (3.0, 4.0, 4.0),
        (2.0, 3.0, 4.5),
        (0.0, 3.0, 0.5),
        (0.0, 3.0, 1.0),
        (0.0, 3.0, 4.0),
        (0.0, 2.2, 2.0),
        (-1.0, 3.0, 1.5),
        (-2.0, 2.5, 2.0),
    ];
    let mut worst = 0.0f64;
    for &(r, l, lam) in &profiles {
        let p = model_profile(r, l, lam, &cfg()).unwrap();
        worst = worst.max(weighted_flux_residual(&p));
    }
    let ok = worst <= 1e-6;
    let pass = report(
        7,
        "Weighted-flux identity along every model profile",
        ok,
        format!("worst residual = {worst:.2e}"),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_08_theorem_1_2_harness() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    let mut worst_eq = 0.0f64;
    for space in catalog::<f64>() {
        let rep = verify_bound(&space, 1e-5).unwrap();
        if !rep.pass {
            ok = false;
            detail = format!("{} failed: margin = {:.2e}", rep.name, rep.margin);
        }
        if space.is_equality_case() {
            worst_eq = worst_eq.max(rep.margin.abs());
            if rep.margin.abs() > 1e-5 {
                ok = false;
                detail = format!("{} equality margin = {:.2e}", rep.name, rep.margin);
            }
        }
    }
    let pass = report(
        8,
        "Bound harness: margin >= -1e-5 on the catalog, equality |margin| <= 1e-5",
        ok,
        if detail.is_empty() {
            format!("worst equality |margin| = {worst_eq:.2e}")
        } else {
            detail
        },
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_09_gradient_comparison() {
    let t0 = Instant::now();
    let names = ["cos2-full", "cos2-asym", "cos4-full", "cos1-sym"];
    let mut ok = true;
    let mut detail = String::new();
    for space in catalog::<f64>() {
        if !names.contains(&space.name.as_str()) {
            continue;
        }
        let SpaceKind::Weighted(w) = space.kind else {
            continue;
        };
        let (coarse, _) = comparison_reports(&w, 512, 1e-4, 1e-4).unwrap();
        let (fine, _) = comparison_reports(&w, 1024, 1e-4, 1e-4).unwrap();
        let tiny = 1e-9 * (1.0 + coarse.max_gamma);
        let refined_ok = if coarse.max_violation > tiny {
            fine.max_violation <= coarse.max_violation / 3.0
        } else {
            fine.max_violation <= tiny
        };
        if !(coarse.pass && fine.pass && refined_ok) {
            ok = false;
            detail = format!(
                "{}: violations {:.2e} -> {:.2e}",
                space.name, coarse.max_violation, fine.max_violation
            );
        }
    }
    let pass = report(
        9,
        "Gradient comparison on 4 configurations, violation shrinking 3x under refinement",
        ok,
        detail,
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_10_maximum_comparison() {
    let t0 = Instant::now();
    let mut checked = 0;
    let mut asymmetric = 0;
    let mut ok = true;
    let mut detail = String::new();
    for space in catalog::<f64>() {
        let SpaceKind::Weighted(w) = space.kind else {
            continue;
        };
        let (_, max_rep) = comparison_reports(&w, 512, 1e-4, 1e-4).unwrap();
        checked += 1;
        if !w.is_symmetric() {
            asymmetric += 1;
        }
        if !max_rep.pass {
            ok = false;
            detail = format!(
                "{}: max_f = {} < m - tol = {}",
                space.name, max_rep.max_f, max_rep.m_model
            );
        }
    }
    ok &= checked == 6 && asymmetric >= 2;
    let pass = report(
        10,
        "Maximum comparison: max f >= m_{K,N} - 1e-4 on 6 configurations (2 asymmetric)",
        ok,
        if detail.is_empty() {
            format!("{checked} configurations, {asymmetric} asymmetric")
        } else {
            detail
        },
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_11_discrete_eigensolver_exactness() {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for &n in &[4usize, 16, 64] {
        let pencil = assemble_neumann(|_: f64| 1.0, (0.0, PI), n).unwrap();
        let h = PI / n as f64;
        for k in 0..3usize {
            let exact = 4.0 / (h * h) * (k as f64 * PI / (2.0 * n as f64)).sin().powi(2);
            let lam = pencil.eigenvalue_k(k, 1e-13).unwrap();
            worst = worst.max((lam - exact).abs());
        }
    }
    let ok = worst <= 1e-12;
    let pass = report(
        11,
        "Discrete eigensolver matches the cosine spectrum to 1e-12",
        ok,
        format!("worst |err| = {worst:.2e}"),
        t0,
    );
    assert!(pass);
}

#[test]
fn criterion_12_cli_determinism() {
    let t0 = Instant::now();
    let bin = env!("CARGO_BIN_EXE_specgap");
    let dir = std::env::temp_dir();
    let run = |jobs: &str, tag: &str| {
        let path = dir.join(format!("specgap-acceptance-{tag}.csv"));
        let status = std::process::Command::new(bin)
            .args([
                "sweep", "--K", "-1:1:4", "--N", "2:4:5", "--d", "0.5:2.5:5", "--tol", "1e-8",
                "--jobs", jobs, "--out",
            ])
            .arg(&path)
            .status()
            .expect("sweep runs");
        assert!(status.success(), "sweep exited with {status}");
        let bytes = std::fs::read(&path).expect("sweep output readable");
        let _ = std::fs::remove_file(&path);
        bytes
    };
    let a = run("1", "a");
    let b = run("1", "b");
    let c = run("8", "c");
    let rows = a.iter().filter(|&&ch| ch == b'\n').count();
    let ok = a == b && a == c && rows == 103; // header + schema + 100 rows + trailer
    let pass = report(
        12,
        "CLI determinism: byte-identical 100-point sweep at parallelism 1 and 8",
        ok,
        format!("{} bytes, {} lines", a.len(), rows),
        t0,
    );
    assert!(pass);
}
