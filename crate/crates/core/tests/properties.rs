//! Cross-module property suite: symmetry and consistency invariants that
//! tie the model definitions, the shooting path, and the discretization
//! path together.

use proptest::prelude::*;
use specgap::gapbound::{hat_lambda, lichnerowicz, SolveMethod};
use specgap::modelfun::{m_value, model_profile};
use specgap::models::{frobenius_start, CurvatureDimension, Side, SingularPoint};
use specgap::ode::IntegratorConfig;
use specgap::spaces::{catalog, verify_bound};

fn cd(k: f64, n: f64) -> CurvatureDimension<f64> {
    CurvatureDimension::new(k, n).unwrap()
}

fn cfg() -> IntegratorConfig<f64> {
    IntegratorConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn drift_is_odd_weight_is_even(
        k in -4.0f64..4.0,
        n in 1.1f64..8.0,
        x in 0.01f64..0.6,
    ) {
        let c = cd(k, n);
        if k > 0.0 {
            let sl = (k / (n - 1.0)).sqrt();
            prop_assume!(sl * x < 0.9 * std::f64::consts::FRAC_PI_2);
        }
        let t_plus = c.drift_t(x).unwrap();
        let t_minus = c.drift_t(-x).unwrap();
        prop_assert!((t_plus + t_minus).abs() <= 1e-13 * (1.0 + t_plus.abs()));
        let r_plus = c.weight_rho(x).unwrap();
        let r_minus = c.weight_rho(-x).unwrap();
        prop_assert!((r_plus - r_minus).abs() <= 1e-13 * r_plus.abs());
    }

    #[test]
    fn frobenius_lambda_zero_is_exact(
        p in 0.2f64..6.0,
        curv in -3.0f64..3.0,
        h0 in 1e-8f64..0.5,
        v0 in -2.0f64..2.0,
    ) {
        let sp = SingularPoint { x0: 0.0, side: Side::Left, exponent: p, curvature: curv };
        let s = frobenius_start(&sp, 0.0, v0, h0, 1e-12).unwrap();
        prop_assert_eq!(s.v, v0);
        prop_assert_eq!(s.dv, 0.0);
        prop_assert_eq!(s.h, h0);
    }

    #[test]
    fn one_sided_density_vanishes_only_at_a(
        r in -3.0f64..3.0,
        l in 1.1f64..6.0,
        frac in 0.01f64..0.9,
    ) {
        let model = specgap::models::OneSidedModel::new(r, l).unwrap();
        let a = model.a();
        prop_assert!(model.density(a).unwrap().abs() < 1e-12);
        let span = match model.domain_end() {
            Some(end) => end - a,
            None => 3.0,
        };
        let s = a + frac * span;
        prop_assert!(model.density(s).unwrap() > 0.0);
    }
}

#[test]
fn hat_lambda_flat_closed_form_many_n() {
    for &n in &[1.0, 2.0, 3.5, 10.0] {
        for &d in &[0.5, 1.0, std::f64::consts::PI] {
            let r = hat_lambda(&cd(0.0, n), d, 1e-10, SolveMethod::Auto).unwrap();
            let exact = std::f64::consts::PI.powi(2) / (d * d);
            assert!(
                (r.lambda - exact).abs() <= 1e-10 * exact,
                "flat mismatch at N = {n}, d = {d}"
            );
        }
    }
}

#[test]
fn hat_lambda_nondecreasing_and_continuous_in_k() {
    let n = 3.0;
    let d = 1.5;
    let ks = [-2.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.0];
    let mut prev = f64::NEG_INFINITY;
    for &k in &ks {
        let lam = hat_lambda(&cd(k, n), d, 1e-10, SolveMethod::Shooting)
            .unwrap()
            .lambda;
        assert!(
            lam >= prev - 1e-8,
            "hat_lambda decreased moving K to {k}: {lam} < {prev}"
        );
        prev = lam;
    }
    // Continuity at K = 1: differences shrink roughly linearly in eps.
    let base = hat_lambda(&cd(1.0, n), d, 1e-11, SolveMethod::Shooting)
        .unwrap()
        .lambda;
    let mut diffs = Vec::new();
    for &eps in &[1e-2, 1e-3, 1e-4] {
        let lam = hat_lambda(&cd(1.0 + eps, n), d, 1e-11, SolveMethod::Shooting)
            .unwrap()
            .lambda;
        diffs.push((lam - base).abs());
    }
    assert!(diffs[0] > diffs[1] && diffs[1] > diffs[2]);
    assert!(diffs[2] < 1e-3 * (1.0 + base));
}

#[test]
fn lichnerowicz_equality_at_maximal_diameter() {
    // hat_lambda(K, N, d_max) = N K/(N-1), the doubly singular endpoint.
    for &(k, n) in &[(2.0, 3.0), (1.0, 2.0), (4.0, 5.0), (3.0, 2.5)] {
        let c = cd(k, n);
        let dmax = c.d_max().unwrap();
        let lam = hat_lambda(&c, dmax, 1e-9, SolveMethod::Shooting)
            .unwrap()
            .lambda;
        let lich = lichnerowicz(&c).unwrap();
        assert!(
            (lam - lich).abs() <= 1e-5,
            "K={k}, N={n}: {lam} vs {lich}"
        );
    }
}

#[test]
fn continuous_approach_to_maximal_diameter() {
    // hat_lambda tends to the Lichnerowicz value as d tends to d_max, with
    // no jump where the endpoint classification switches to singular.
    for &(k, n) in &[(2.0, 3.0), (3.0, 2.5)] {
        let c = cd(k, n);
        let dmax = c.d_max().unwrap();
        let lich = lichnerowicz(&c).unwrap();
        let mut prev = f64::INFINITY;
        for &eps in &[1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 0.0] {
            let d = dmax * (1.0 - eps);
            let lam = hat_lambda(&c, d, 1e-10, SolveMethod::Shooting)
                .unwrap()
                .lambda;
            assert!(
                lam >= lich - 1e-7 && lam <= prev + 1e-8,
                "K={k}, N={n}, eps={eps}: lambda={lam}, lich={lich}, prev={prev}"
            );
            assert!(
                eps > 1e-5 || (lam - lich).abs() <= 1e-7,
                "K={k}, N={n}, eps={eps}: lambda={lam} vs lich={lich}"
            );
            prev = lam;
        }
    }
}

#[test]
fn power_family_scaling_invariance() {
    // m independent of lambda; b scales as lambda^{-1/2}.
    let l = 3.0;
    let lambdas = [0.5, 1.0, 2.0, 4.0];
    let mut ms = Vec::new();
    let mut b_scaled = Vec::new();
    for &lam in &lambdas {
        let p = model_profile(0.0, l, lam, &cfg()).unwrap();
        ms.push(p.m);
        b_scaled.push(p.b * lam.sqrt());
    }
    let m0 = ms[0];
    let b0 = b_scaled[0];
    for (m, b) in ms.iter().zip(&b_scaled) {
        assert!((m - m0).abs() / m0.abs() < 1e-8, "m spread {}", (m - m0).abs());
        assert!((b - b0).abs() / b0 < 1e-8, "b sqrt(lambda) spread");
    }
}

#[test]
fn full_catalog_bound_holds() {
    let mut equalities = 0;
    for space in catalog::<f64>() {
        let rep = verify_bound(&space, 1e-5).unwrap();
        assert!(
            rep.pass,
            "{}: lambda1 = {}, hat = {}, margin = {}",
            rep.name, rep.lambda1, rep.lambda_hat, rep.margin
        );
        if space.is_equality_case() {
            equalities += 1;
            assert!(
                rep.margin.abs() <= 1e-5,
                "{}: equality case margin {}",
                rep.name,
                rep.margin
            );
        }
    }
    assert_eq!(equalities, 13);
}

#[test]
fn m_value_matches_lichnerowicz_normalization() {
    // At the threshold eigenvalue the trig profile is the full sine: m = 1.
    for &l in &[2.0, 3.0, 5.0] {
        let m = m_value(l - 1.0, l, l, &cfg()).unwrap();
        assert!((m - 1.0).abs() < 1e-9, "l = {l}: m = {m}");
    }
}

#[test]
fn shooting_matches_fine_discretization_oracle() {
    // (K, N, d) = (-3, 2, 1.7): the oracle is Richardson extrapolation of
    // an independent finite-volume solve on 2048/4096 cells.
    let c = cd(-3.0, 2.0);
    let model = specgap::SymmetricModel::new(c, 1.7).unwrap();
    let eig = |n: usize| {
        specgap::tridiag::assemble_neumann(
            |x: f64| model.weight(x).unwrap(),
            (-0.85, 0.85),
            n,
        )
        .unwrap()
        .eigenvalue_k(1, 1e-13)
        .unwrap()
    };
    let coarse = eig(2048);
    let fine = eig(4096);
    let oracle = fine + (fine - coarse) / 3.0;
    let shot = hat_lambda(&c, 1.7, 1e-10, SolveMethod::Shooting)
        .unwrap()
        .lambda;
    assert!(
        (shot - oracle).abs() <= 1e-8,
        "shooting {shot} vs oracle {oracle}"
    );
}

#[test]
fn robust_across_parameter_corners() {
    // Small intervals, N near 1, K near 0, steep weights near d_max, and
    // strong negative curvature; both methods must agree at every corner.
    let cases = [
        (3.0, 4.0, 0.1),      // hat ~ 1e3
        (0.5, 1.0001, 0.04),  // N barely above 1, d near its tiny d_max
        (-1e-8, 3.0, 1.0),    // K just below the flat branch
        (1e-8, 3.0, 1.0),     // K just above it
        (-50.0, 3.0, 1.0),    // strong negative curvature
        (2.0, 1.5, 1.5),      // fractional N, d close to d_max = pi/2
    ];
    for &(k, n, d) in &cases {
        let c = cd(k, n);
        let r = hat_lambda(&c, d, 1e-8, SolveMethod::Both)
            .unwrap_or_else(|e| panic!("corner (K={k}, N={n}, d={d}) failed: {e}"));
        assert!(
            r.diagnostics.dual_gap.unwrap() <= 1e-7,
            "corner (K={k}, N={n}, d={d}): dual gap {:?}",
            r.diagnostics.dual_gap
        );
        // The flat value separates the curvature signs.
        let flat = std::f64::consts::PI.powi(2) / (d * d);
        if k > 0.0 {
            assert!(r.lambda >= flat * (1.0 - 1e-9));
        } else if k < 0.0 {
            assert!(r.lambda <= flat * (1.0 + 1e-9));
        }
    }
}

#[test]
fn works_in_f32_at_loose_tolerance() {
    let c = CurvatureDimension::<f32>::new(2.0, 3.0).unwrap();
    assert!((c.d_max().unwrap() - std::f32::consts::PI).abs() < 1e-6);
    assert!((c.drift_t(std::f32::consts::FRAC_PI_4).unwrap() - 1.0).abs() < 1e-5);
    let flat = CurvatureDimension::<f32>::new(0.0, 2.0).unwrap();
    let r = hat_lambda(&flat, 2.0f32, 1e-4f32, SolveMethod::Auto).unwrap();
    assert!((r.lambda - std::f32::consts::PI.powi(2) / 4.0).abs() < 1e-5);
    let cfg32 = IntegratorConfig::<f32> {
        rel_tol: 1e-5,
        abs_tol: 1e-6,
        ..IntegratorConfig::default()
    };
    let p = model_profile(0.0f32, 3.0, 1.0, &cfg32).unwrap();
    assert!((p.m - 0.21723).abs() < 1e-3);
}
