//! The sharp spectral-gap lower bound: the first nonzero Neumann eigenvalue
//! of the symmetric model, computed independently by shooting and by
//! finite-volume discretization.
//!
//! Shooting root-finds the Neumann miss function `D(lambda)` — the terminal
//! weighted flux `rho v'` of the trajectory launched with `v = 1, v' = 0` at
//! the left endpoint. Root selection uses the interior-zero count of the
//! trajectory (the first Neumann eigenfunction has exactly one interior
//! zero), which keeps the bracket scan off the constant branch at
//! `lambda = 0` and off higher eigenvalues.

use crate::error::{Error, Result};
use crate::models::{frobenius_start, series_factors, CurvatureDimension, Side, SymmetricModel};
use crate::ode::{integrate_eigen_ode, IntegratorConfig};
use crate::roots::brent;
use crate::scalar::{as_f64, lit, Real};
use crate::tridiag::assemble_neumann;

/// How a reported eigenvalue was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Shooting,
    Discretization,
    ClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Shooting => "shooting",
            Method::Discretization => "discretization",
            Method::ClosedForm => "closed-form",
        }
    }
}

/// Which solution path to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Closed form where the drift vanishes, shooting otherwise.
    Auto,
    Shooting,
    Discretization,
    /// Run shooting and discretization, assert agreement, report shooting.
    Both,
}

/// Solver counters and provenance for a [`SpectralResult`].
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics<T> {
    pub bracket: Option<(T, T)>,
    pub iterations: usize,
    pub ode_steps: usize,
    pub grid_sizes: Vec<usize>,
    pub observed_order: Option<T>,
    pub order_warning: bool,
    /// |shooting - discretization| when both ran.
    pub dual_gap: Option<T>,
}

impl<T> Default for Diagnostics<T> {
    fn default() -> Self {
        Self {
            bracket: None,
            iterations: 0,
            ode_steps: 0,
            grid_sizes: Vec::new(),
            observed_order: None,
            order_warning: false,
            dual_gap: None,
        }
    }
}

/// An eigenvalue with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult<T> {
    pub lambda: T,
    pub method: Method,
    pub achieved_tol: T,
    pub diagnostics: Diagnostics<T>,
}

/// Neumann shooting residual at one trial eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissReport<T> {
    /// Terminal weighted flux `rho v'` (series-consistent at a singular
    /// right endpoint).
    pub flux: T,
    /// Sign changes of `v` along the trajectory.
    pub interior_sign_changes: usize,
    /// Accepted plus rejected integrator steps.
    pub steps: usize,
}

/// Integrates the model from `-d/2` with `v = 1, v' = 0` and reports the
/// terminal flux and interior-zero count.
pub fn miss_function<T: Real>(
    model: &SymmetricModel<T>,
    lambda: T,
    config: &IntegratorConfig<T>,
) -> Result<MissReport<T>> {
    if !(lambda > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "miss function needs lambda > 0, got {lambda}"
        )));
    }
    let half = model.half_width();
    let h0 = model.d() * lit(1e-4);

    let (x_start, v_start, dv_start) = match model.singular_point(Side::Left) {
        Some(sp) => {
            let s = frobenius_start(&sp, lambda, T::one(), h0, config.abs_tol)?;
            (s.x, s.v, s.dv)
        }
        None => (-half, T::one(), T::zero()),
    };
    let right = model.singular_point(Side::Right);
    let x_end = match &right {
        Some(sp) => {
            let probe = frobenius_start(sp, lambda, T::one(), h0, config.abs_tol)?;
            probe.x
        }
        None => half,
    };

    let drift = |x: T| model.drift_g(x);
    // Keep accepted steps fine enough that sign counting cannot alias.
    let span_cap = (x_end - x_start).abs() / lit(16.0);
    let cfg = IntegratorConfig {
        max_step: Some(match config.max_step {
            Some(m) => m.min(span_cap),
            None => span_cap,
        }),
        ..*config
    };
    let traj = integrate_eigen_ode(&drift, lambda, x_start, v_start, dv_start, x_end, &cfg)?;
    let end = traj.last();
    let rho_end = model.weight(end.x)?;

    let flux = match &right {
        Some(sp) => {
            // Subtract the Neumann-regular series branch fitted to v(x_end),
            // so the residual vanishes exactly at an eigenvalue instead of
            // carrying an O(h0^{p+1}) bias.
            let delta = sp.x0 - end.x;
            let (fv, fd) = series_factors(sp.exponent, sp.curvature, lambda, delta);
            let v0_est = end.v / fv;
            let dv_regular = -(v0_est * fd);
            rho_end * (end.dv - dv_regular)
        }
        None => rho_end * end.dv,
    };

    let mut sign_changes = 0usize;
    let mut prev = v_start > T::zero();
    for s in traj.samples() {
        if s.v != T::zero() {
            let cur = s.v > T::zero();
            if cur != prev {
                sign_changes += 1;
                prev = cur;
            }
        }
    }

    Ok(MissReport {
        flux,
        interior_sign_changes: sign_changes,
        steps: traj.accepted + traj.rejected,
    })
}

/// Lichnerowicz bound `N K / (N - 1)` for `K > 0, N > 1`.
pub fn lichnerowicz<T: Real>(cd: &CurvatureDimension<T>) -> Result<T> {
    if !(cd.k() > T::zero()) || !(cd.n() > T::one()) {
        return Err(Error::InvalidParameter(format!(
            "Lichnerowicz bound needs K > 0 and N > 1, got K = {}, N = {}",
            cd.k(),
            cd.n()
        )));
    }
    Ok(cd.n() * cd.k() / (cd.n() - T::one()))
}

/// `N / (1 - cos^N(d/2))` for `N > 1` and `d` in `(0, pi]`.
pub fn remark_bound<T: Real>(n: T, d: T) -> Result<T> {
    let slack = T::PI() * T::epsilon() * lit::<T>(4.0);
    if !(n > T::one()) || !(d > T::zero()) || d > T::PI() + slack {
        return Err(Error::InvalidParameter(format!(
            "remark bound needs N > 1 and d in (0, pi], got N = {n}, d = {d}"
        )));
    }
    let c = (d * lit::<T>(0.5)).cos().max(T::zero());
    Ok(n / (T::one() - c.powf(n)))
}

/// First nonzero Neumann eigenvalue of the symmetric model.
pub fn hat_lambda<T: Real>(
    cd: &CurvatureDimension<T>,
    d: T,
    tol: T,
    method: SolveMethod,
) -> Result<SpectralResult<T>> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "interval length must be positive, got d = {d}"
        )));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(dmax) = cd.d_max() {
        if d > dmax * (T::one() + lit(1e-12)) {
            return Err(Error::InvalidParameter(format!(
                "d = {d} exceeds d_max = {dmax} for K = {}, N = {}",
                cd.k(),
                cd.n()
            )));
        }
    }
    let driftless = cd.k() == T::zero() || cd.n() == T::one();
    match method {
        SolveMethod::Auto => {
            if driftless {
                Ok(closed_form(d))
            } else {
                shoot(cd, d, tol)
            }
        }
        SolveMethod::Shooting => shoot(cd, d, tol),
        SolveMethod::Discretization => discretize(cd, d),
        SolveMethod::Both => {
            let s = shoot(cd, d, tol)?;
            let disc = discretize(cd, d)?;
            let gap = (s.lambda - disc.lambda).abs();
            let limit = tol * lit(10.0);
            if gap > limit {
                return Err(Error::MethodDisagreement {
                    shooting: as_f64(s.lambda),
                    discretization: as_f64(disc.lambda),
                    limit: as_f64(limit),
                });
            }
            let mut out = s;
            out.diagnostics.grid_sizes = disc.diagnostics.grid_sizes;
            out.diagnostics.observed_order = disc.diagnostics.observed_order;
            out.diagnostics.order_warning = disc.diagnostics.order_warning;
            out.diagnostics.dual_gap = Some(gap);
            Ok(out)
        }
    }
}

fn closed_form<T: Real>(d: T) -> SpectralResult<T> {
    let lambda = T::PI() * T::PI() / (d * d);
    SpectralResult {
        lambda,
        method: Method::ClosedForm,
        achieved_tol: lambda * T::epsilon(),
        diagnostics: Diagnostics::default(),
    }
}

fn shooting_config<T: Real>(tol: T) -> IntegratorConfig<T> {
    let rel = tol.min(lit(1e-10)).max(lit(1e-12));
    IntegratorConfig {
        rel_tol: rel,
        abs_tol: rel * lit(1e-2),
        ..IntegratorConfig::default()
    }
}

fn shoot<T: Real>(cd: &CurvatureDimension<T>, d: T, tol: T) -> Result<SpectralResult<T>> {
    let model = SymmetricModel::new(*cd, d)?;
    let config = shooting_config(tol);
    let flat = T::PI() * T::PI() / (d * d);
    let seed = if cd.k() > T::zero() && cd.n() > T::one() {
        lit::<T>(0.5) * flat.min(lichnerowicz(cd)?)
    } else {
        lit::<T>(0.5) * flat
    };
    let cap = flat * lit(1e6);
    let floor = flat * lit(1e-18);

    let mut ode_steps = 0usize;
    let mut evals = 0usize;
    let mut probe = |lam: T| -> Result<(T, usize)> {
        let r = miss_function(&model, lam, &config)?;
        ode_steps += r.steps;
        evals += 1;
        Ok((r.flux, r.interior_sign_changes))
    };

    // A point is "past the first eigenvalue" once the flux is nonnegative
    // with at least one interior zero; the bracket is the last step across
    // that transition, refined until the upper end carries exactly one
    // interior zero.
    let past = |flux: T, count: usize| flux >= T::zero() && count >= 1;

    let (f_seed, c_seed) = probe(seed)?;
    let (mut lo, mut flo, mut hi, mut fhi, mut chi);
    if past(f_seed, c_seed) {
        // Seed overshot (deep dumbbells): descend to find a below point.
        let ratio = lit::<T>(1.4);
        let mut upper = (seed, f_seed, c_seed);
        let mut lam = seed;
        loop {
            lam = lam / ratio;
            if lam < floor {
                return Err(Error::BracketExhausted {
                    lambda_cap: as_f64(lam),
                });
            }
            let (f, c) = probe(lam)?;
            if !past(f, c) {
                lo = lam;
                flo = f;
                hi = upper.0;
                fhi = upper.1;
                chi = upper.2;
                break;
            }
            upper = (lam, f, c);
        }
    } else {
        // Ascend geometrically until the state flips.
        let ratio = lit::<T>(1.4);
        let mut lower = (seed, f_seed);
        let mut lam = seed;
        loop {
            lam = lam * ratio;
            if lam > cap {
                return Err(Error::BracketExhausted {
                    lambda_cap: as_f64(cap),
                });
            }
            let (f, c) = probe(lam)?;
            if past(f, c) {
                lo = lower.0;
                flo = lower.1;
                hi = lam;
                fhi = f;
                chi = c;
                break;
            }
            lower = (lam, f);
        }
    }

    // Shrink the bracket until the upper end has exactly one interior zero,
    // so Brent cannot latch onto a higher eigenvalue.
    let mut depth = 0;
    while chi > 1 {
        depth += 1;
        if depth > 200 {
            return Err(Error::NoConvergence {
                what: "first-eigenvalue bracket refinement",
            });
        }
        let mid = (lo + hi) * lit::<T>(0.5);
        let (f, c) = probe(mid)?;
        if past(f, c) {
            hi = mid;
            fhi = f;
            chi = c;
        } else {
            lo = mid;
            flo = f;
        }
    }
    debug_assert!(flo <= T::zero());

    let bracket = (lo, hi);
    let out = brent(
        |lam| probe(lam).map(|(f, _)| f),
        lo,
        hi,
        flo,
        fhi,
        tol,
        200,
    )?;

    Ok(SpectralResult {
        lambda: out.root,
        method: Method::Shooting,
        achieved_tol: out.width.max(T::epsilon() * out.root),
        diagnostics: Diagnostics {
            bracket: Some(bracket),
            iterations: evals,
            ode_steps,
            ..Diagnostics::default()
        },
    })
}

const GRIDS: [usize; 3] = [512, 1024, 2048];

fn discretize<T: Real>(cd: &CurvatureDimension<T>, d: T) -> Result<SpectralResult<T>> {
    let model = SymmetricModel::new(*cd, d)?;
    let half = model.half_width();
    let weight = |x: T| model.weight(x).unwrap_or(T::nan());
    let inner_tol = lit::<T>(1e-12) * (T::PI() * T::PI() / (d * d)).max(T::one());

    let mut lam = [T::zero(); 3];
    for (i, &n) in GRIDS.iter().enumerate() {
        let pencil = assemble_neumann(weight, (-half, half), n)?;
        lam[i] = pencil.eigenvalue_k(1, inner_tol)?;
    }
    let [l0, l1, l2] = lam;
    let extrapolated = l2 + (l2 - l1) / lit(3.0);
    let d01 = l0 - l1;
    let d12 = l1 - l2;
    let observed_order = if d12.abs() > inner_tol * lit(4.0) && d01 / d12 > T::zero() {
        Some((d01 / d12).log2())
    } else {
        None
    };
    let order_warning = match observed_order {
        Some(o) => !(o >= lit(1.7) && o <= lit(2.3)),
        None => false,
    };
    Ok(SpectralResult {
        lambda: extrapolated,
        method: Method::Discretization,
        achieved_tol: d12.abs() / lit(3.0) + inner_tol,
        diagnostics: Diagnostics {
            grid_sizes: GRIDS.to_vec(),
            observed_order,
            order_warning,
            ..Diagnostics::default()
        },
    })
}
