//! The round sphere saturates the spectral-gap bound: for S^n the gap is
//! n, the diameter is pi, and the model bound hat_lambda(n-1, n, pi)
//! returns exactly n. Computes the bound both ways for n = 2..=5 and
//! prints the one-sided profile behind the maximum comparison.

use specgap::gapbound::{hat_lambda, SolveMethod};
use specgap::modelfun::model_profile;
use specgap::models::CurvatureDimension;
use specgap::ode::IntegratorConfig;

fn main() -> Result<(), specgap::Error> {
    let pi = std::f64::consts::PI;
    println!("sphere S^n: gap n vs model bound hat_lambda(n-1, n, pi)");
    for n in 2..=5u32 {
        let nf = f64::from(n);
        let cd = CurvatureDimension::new(nf - 1.0, nf)?;
        let bound = hat_lambda(&cd, pi, 1e-6, SolveMethod::Both)?;
        println!(
            "  n = {n}: hat = {:.10}  (dual gap {:.2e}, {} shots)",
            bound.lambda,
            bound.diagnostics.dual_gap.unwrap_or(f64::NAN),
            bound.diagnostics.iterations,
        );
    }

    // The extremal eigenfunction profile for n = 3: v = sin on [-pi/2, pi/2],
    // so the first critical point is pi/2 and the maximum is 1.
    let profile = model_profile(2.0, 3.0, 3.0, &IntegratorConfig::default())?;
    println!(
        "model profile (R=2, l=3, lambda=3): b = {:.10}, m = {:.10}",
        profile.b, profile.m
    );
    Ok(())
}
