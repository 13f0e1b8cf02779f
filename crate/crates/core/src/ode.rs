//! Adaptive integration of the second-order eigen-ODE
//! `v'' = g(x) v' - lambda v` as a first-order system, with dense output and
//! detection of the first zero of `v'`.
//!
//! The stepper is the Dormand-Prince 5(4) embedded pair with the classical
//! quartic interpolant and a PI step-size controller. Events are located by
//! sign change of `v'` between accepted steps, refined by bisection on the
//! interpolant.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};

/// Tolerances and budgets for the integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_step: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-10),
            abs_tol: lit(1e-12),
            max_step: None,
            max_steps: 1_000_000,
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) || self.rel_tol >= lit(1e-2) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1e-2), got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// How a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    ReachedEnd,
    EventFired,
    StepLimit,
}

/// One accepted solution sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub x: T,
    pub v: T,
    pub dv: T,
}

/// Dense-output coefficients for one accepted step.
#[derive(Debug, Clone, Copy)]
struct DenseSeg<T> {
    x0: T,
    h: T,
    cont: [[T; 5]; 2],
}

impl<T: Real> DenseSeg<T> {
    fn eval(&self, x: T) -> (T, T) {
        let s = (x - self.x0) / self.h;
        let s1 = T::one() - s;
        let comp = |c: &[T; 5]| c[0] + s * (c[1] + s1 * (c[2] + s * (c[3] + s1 * c[4])));
        (comp(&self.cont[0]), comp(&self.cont[1]))
    }
}

/// Dense numerical solution of the eigen-ODE.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    samples: Vec<Sample<T>>,
    dense: Vec<DenseSeg<T>>,
    pub accepted: usize,
    pub rejected: usize,
    pub status: TerminalStatus,
}

impl<T: Real> Trajectory<T> {
    pub fn samples(&self) -> &[Sample<T>] {
        &self.samples
    }

    pub fn first(&self) -> Sample<T> {
        self.samples[0]
    }

    pub fn last(&self) -> Sample<T> {
        *self.samples.last().expect("trajectory is never empty")
    }

    /// Interpolates `(v, v')` anywhere inside the covered span.
    pub fn eval(&self, x: T) -> (T, T) {
        if self.dense.is_empty() {
            let s = self.first();
            return (s.v, s.dv);
        }
        let fwd = self.dense[0].h > T::zero();
        // Binary search for the segment containing x.
        let mut lo = 0usize;
        let mut hi = self.dense.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            let seg_end = self.dense[mid].x0 + self.dense[mid].h;
            let past = if fwd { x > seg_end } else { x < seg_end };
            if past {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        self.dense[lo].eval(x)
    }

    /// Composite Simpson quadrature of `integrand(x, v, v')` over the
    /// trajectory span, sampling the dense output inside each step. Steps
    /// adjacent to the span ends are subdivided further, which matters when
    /// the weight in the integrand vanishes there.
    pub fn integrate<F: Fn(T, T, T) -> T>(&self, integrand: F) -> T {
        *self
            .cumulative_integrals(integrand)
            .last()
            .unwrap_or(&T::zero())
    }

    /// Cumulative Simpson integrals of `integrand` from the start of the
    /// trajectory to each sample point.
    pub fn cumulative_integrals<F: Fn(T, T, T) -> T>(&self, integrand: F) -> Vec<T> {
        let mut out = Vec::with_capacity(self.samples.len());
        let mut acc = T::zero();
        out.push(acc);
        let n = self.dense.len();
        for (i, seg) in self.dense.iter().enumerate() {
            let xa = seg.x0;
            let xb = self.samples[i + 1].x; // honors event-truncated last step
            let panels = if i < 4 || i + 4 >= n { 8 } else { 2 };
            acc = acc + simpson_on_segment(seg, xa, xb, panels, &integrand);
            out.push(acc);
        }
        out
    }
}

fn simpson_on_segment<T: Real, F: Fn(T, T, T) -> T>(
    seg: &DenseSeg<T>,
    xa: T,
    xb: T,
    panels: usize,
    integrand: &F,
) -> T {
    let width = (xb - xa) / T::from_usize(panels).unwrap();
    let mut sum = T::zero();
    let six = lit::<T>(6.0);
    let half = lit::<T>(0.5);
    for j in 0..panels {
        let x0 = xa + width * T::from_usize(j).unwrap();
        let x1 = x0 + width;
        let xm = x0 + width * half;
        let (v0, d0) = seg.eval(x0);
        let (vm, dm) = seg.eval(xm);
        let (v1, d1) = seg.eval(x1);
        sum = sum
            + width / six
                * (integrand(x0, v0, d0) + lit::<T>(4.0) * integrand(xm, vm, dm) + integrand(x1, v1, d1));
    }
    sum
}

/// First zero of `v'` strictly after the start point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint<T> {
    pub x: T,
    pub v: T,
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Quartic interpolant weights.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Clone, Copy)]
struct State<T> {
    v: T,
    dv: T,
}

impl<T: Real> State<T> {
    fn mul_add(self, k: State<T>, c: T) -> State<T> {
        State {
            v: self.v + c * k.v,
            dv: self.dv + c * k.dv,
        }
    }
}

/// Integrates the eigen-ODE from `(x0, v0, dv0)` to `x1`.
///
/// `drift` must be finite on the closed span; singular endpoints are handled
/// by launching with [`crate::models::frobenius_start`] before calling.
pub fn integrate_eigen_ode<T: Real, F: Fn(T) -> T>(
    drift: &F,
    lambda: T,
    x0: T,
    v0: T,
    dv0: T,
    x1: T,
    config: &IntegratorConfig<T>,
) -> Result<Trajectory<T>> {
    let (traj, _) = run_watch(drift, lambda, x0, v0, dv0, x1, config, false)?;
    match traj.status {
        TerminalStatus::StepLimit => Err(Error::StepLimit {
            steps: config.max_steps,
            x: as_f64(traj.last().x),
        }),
        _ => Ok(traj),
    }
}

/// Locates the first `x > x0` where `v'` crosses zero, integrating no
/// further than `x_limit`. Errors when no crossing is found in the span.
pub fn first_critical_point<T: Real, F: Fn(T) -> T>(
    drift: &F,
    lambda: T,
    x0: T,
    v0: T,
    dv0: T,
    x_limit: T,
    config: &IntegratorConfig<T>,
) -> Result<(CriticalPoint<T>, Trajectory<T>)> {
    let (traj, event) = run_watch(drift, lambda, x0, v0, dv0, x_limit, config, true)?;
    match (event, traj.status) {
        (Some(cp), _) => Ok((cp, traj)),
        (None, TerminalStatus::StepLimit) => Err(Error::StepLimit {
            steps: config.max_steps,
            x: as_f64(traj.last().x),
        }),
        (None, _) => Err(Error::NoCriticalPoint {
            x_end: as_f64(x_limit),
        }),
    }
}

/// Core stepping loop. Returns the trajectory and, when `watch_dv` is set,
/// the refined first zero of `v'` (the trajectory is then truncated there).
#[allow(clippy::too_many_arguments)]
pub(crate) fn run_watch<T: Real, F: Fn(T) -> T>(
    drift: &F,
    lambda: T,
    x0: T,
    v0: T,
    dv0: T,
    x1: T,
    config: &IntegratorConfig<T>,
    watch_dv: bool,
) -> Result<(Trajectory<T>, Option<CriticalPoint<T>>)> {
    config.validate()?;
    if !(v0.is_finite() && dv0.is_finite() && lambda.is_finite()) {
        return Err(Error::NonFinite { x: as_f64(x0) });
    }
    let f = |x: T, y: State<T>| State {
        v: y.dv,
        dv: drift(x) * y.dv - lambda * y.v,
    };

    let mut traj = Trajectory {
        samples: vec![Sample {
            x: x0,
            v: v0,
            dv: dv0,
        }],
        dense: Vec::new(),
        accepted: 0,
        rejected: 0,
        status: TerminalStatus::ReachedEnd,
    };
    if x1 == x0 {
        return Ok((traj, None));
    }

    let span = x1 - x0;
    let dir = span.signum();
    let h_cap = match config.max_step {
        Some(m) => m.abs().min(span.abs()),
        None => span.abs(),
    };

    let mut x = x0;
    let mut y = State { v: v0, dv: dv0 };
    let mut k0 = f(x, y);
    if !(k0.v.is_finite() && k0.dv.is_finite()) {
        return Err(Error::NonFinite { x: as_f64(x) });
    }

    let mut h = initial_step(&f, x, y, k0, dir, h_cap, config);

    // PI controller constants (Hairer's DOPRI5 defaults).
    let beta = lit::<T>(0.04);
    let expo1 = lit::<T>(0.2) - beta * lit::<T>(0.75);
    let safe = lit::<T>(0.9);
    let facc1 = lit::<T>(5.0); // reciprocal of max shrink 0.2
    let facc2 = lit::<T>(0.1); // reciprocal of max growth 10
    let mut facold = lit::<T>(1e-4);

    let a: [[T; 6]; 6] = A.map(|row| row.map(lit));
    let c: [T; 6] = C.map(lit);
    let e: [T; 7] = E.map(lit);
    let d: [T; 7] = D.map(lit);

    let mut ref_sign: Option<bool> = if watch_dv && dv0 != T::zero() {
        Some(dv0 > T::zero())
    } else {
        None
    };

    let mut steps = 0usize;
    loop {
        if steps >= config.max_steps {
            traj.status = TerminalStatus::StepLimit;
            return Ok((traj, None));
        }
        steps += 1;

        // Clamp the final step onto x1.
        let mut last = false;
        if (x + h * lit::<T>(1.01) - x1) * dir >= T::zero() {
            h = x1 - x;
            last = true;
        }
        let h_floor = T::epsilon() * x.abs().max(x1.abs()).max(T::one()) * lit::<T>(4.0);
        if h.abs() <= h_floor {
            if last {
                // Remaining span is below resolution; snap onto the endpoint.
                if let Some(s) = traj.samples.last_mut() {
                    s.x = x1;
                }
                traj.status = TerminalStatus::ReachedEnd;
                return Ok((traj, None));
            }
            return Err(Error::NonFinite { x: as_f64(x) });
        }

        // Stages.
        let mut k = [k0; 7];
        for i in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i + 1) {
                yi = yi.mul_add(*kj, a[i][j] * h);
            }
            k[i + 1] = f(x + c[i] * h, yi);
        }
        // With this tableau row 6 of `a` holds the 5th-order weights, so the
        // last stage value *is* the candidate y at x + h (FSAL).
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new = y_new.mul_add(*kj, a[5][j] * h);
        }
        let k_new = k[6];

        let finite = y_new.v.is_finite() && y_new.dv.is_finite();
        let err = if finite {
            let mut ev = T::zero();
            let mut edv = T::zero();
            for (j, kj) in k.iter().enumerate() {
                ev = ev + e[j] * kj.v;
                edv = edv + e[j] * kj.dv;
            }
            let sc_v = config.abs_tol + config.rel_tol * y.v.abs().max(y_new.v.abs());
            let sc_dv = config.abs_tol + config.rel_tol * y.dv.abs().max(y_new.dv.abs());
            let rv = h * ev / sc_v;
            let rdv = h * edv / sc_dv;
            ((rv * rv + rdv * rdv) / lit::<T>(2.0)).sqrt()
        } else {
            lit::<T>(1e10)
        };

        let fac11 = err.powf(expo1);
        if err <= T::one() {
            // Accept.
            let fac = (fac11 / facold.powf(beta) / safe).max(facc2).min(facc1);
            facold = err.max(lit(1e-4));
            let ydiff = State {
                v: y_new.v - y.v,
                dv: y_new.dv - y.dv,
            };
            let mut dsum = State {
                v: T::zero(),
                dv: T::zero(),
            };
            for (j, kj) in k.iter().enumerate() {
                dsum = dsum.mul_add(*kj, d[j]);
            }
            let cont = [
                [
                    y.v,
                    ydiff.v,
                    h * k0.v - ydiff.v,
                    ydiff.v - h * k_new.v - (h * k0.v - ydiff.v),
                    h * dsum.v,
                ],
                [
                    y.dv,
                    ydiff.dv,
                    h * k0.dv - ydiff.dv,
                    ydiff.dv - h * k_new.dv - (h * k0.dv - ydiff.dv),
                    h * dsum.dv,
                ],
            ];
            let seg = DenseSeg { x0: x, h, cont };

            let x_new = if last { x1 } else { x + h };
            traj.accepted += 1;

            if watch_dv {
                if ref_sign.is_none() && y_new.dv != T::zero() {
                    ref_sign = Some(y_new.dv > T::zero());
                } else if let Some(pos) = ref_sign {
                    let crossed = if pos {
                        y_new.dv <= T::zero()
                    } else {
                        y_new.dv >= T::zero()
                    };
                    if crossed {
                        let cp = refine_dv_zero(&seg, x, x_new, pos, config.abs_tol);
                        let (ve, dve) = seg.eval(cp.x);
                        traj.dense.push(seg);
                        traj.samples.push(Sample {
                            x: cp.x,
                            v: ve,
                            dv: dve,
                        });
                        traj.status = TerminalStatus::EventFired;
                        return Ok((traj, Some(CriticalPoint { x: cp.x, v: ve })));
                    }
                }
            }

            traj.dense.push(seg);
            traj.samples.push(Sample {
                x: x_new,
                v: y_new.v,
                dv: y_new.dv,
            });

            if last {
                traj.status = TerminalStatus::ReachedEnd;
                return Ok((traj, None));
            }
            x = x_new;
            y = y_new;
            k0 = k_new;

            h = h / fac;
            if h.abs() > h_cap {
                h = h_cap * dir;
            }
        } else {
            // Reject and shrink.
            traj.rejected += 1;
            let fac = (fac11 / safe).min(facc1);
            h = h / fac;
        }
    }
}

fn initial_step<T: Real, F: Fn(T, State<T>) -> State<T>>(
    f: &F,
    x: T,
    y: State<T>,
    k0: State<T>,
    dir: T,
    h_cap: T,
    config: &IntegratorConfig<T>,
) -> T {
    let sc_v = config.abs_tol + config.rel_tol * y.v.abs();
    let sc_dv = config.abs_tol + config.rel_tol * y.dv.abs();
    let norm = |s: State<T>| {
        let a = s.v / sc_v;
        let b = s.dv / sc_dv;
        ((a * a + b * b) / lit::<T>(2.0)).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(k0);
    let small = lit::<T>(1e-5);
    let mut h0 = if d0 < small || d1 < small {
        lit::<T>(1e-6)
    } else {
        lit::<T>(0.01) * d0 / d1
    };
    h0 = h0.min(h_cap);
    let y1 = y.mul_add(k0, h0 * dir);
    let k1 = f(x + h0 * dir, y1);
    let d2 = norm(State {
        v: k1.v - k0.v,
        dv: k1.dv - k0.dv,
    }) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= lit(1e-15) {
        (h0 * lit(1e-3)).max(lit(1e-6))
    } else {
        (lit::<T>(0.01) / dm).powf(lit(0.2))
    };
    (h0 * lit(100.0)).min(h1).min(h_cap) * dir
}

fn refine_dv_zero<T: Real>(
    seg: &DenseSeg<T>,
    x_lo: T,
    x_hi: T,
    lo_positive: bool,
    x_tol: T,
) -> CriticalPoint<T> {
    let mut lo = x_lo;
    let mut hi = x_hi;
    let tol = x_tol.max(T::epsilon() * x_lo.abs().max(x_hi.abs()) * lit::<T>(8.0));
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = (lo + hi) * lit::<T>(0.5);
        if mid == lo || mid == hi {
            break;
        }
        let (_, dv) = seg.eval(mid);
        let mid_matches_lo = if lo_positive {
            dv > T::zero()
        } else {
            dv < T::zero()
        };
        if mid_matches_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = (lo + hi) * lit::<T>(0.5);
    let (v, _) = seg.eval(x);
    CriticalPoint { x, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{frobenius_start, Side, SingularPoint};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn cfg() -> IntegratorConfig<f64> {
        IntegratorConfig::default()
    }

    #[test]
    fn flat_cosine() {
        let traj =
            integrate_eigen_ode(&|_| 0.0, 1.0, 0.0, 1.0, 0.0, PI, &cfg()).unwrap();
        let end = traj.last();
        assert_abs_diff_eq!(end.v, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(end.dv, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn flat_linear_is_exact() {
        let traj =
            integrate_eigen_ode(&|_| 0.0, 0.0, 0.0, 3.0, 2.0, 1.0, &cfg()).unwrap();
        let end = traj.last();
        assert_abs_diff_eq!(end.v, 5.0, epsilon = 1e-13);
        assert_abs_diff_eq!(end.dv, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn trig_drift_matches_sine() {
        // v'' - 2 tan(x) v' = -3 v with v = sin(x), from the series start at
        // -pi/2 up to 0: expect (v, v') = (0, 1).
        let sp = SingularPoint {
            x0: -FRAC_PI_2,
            side: Side::Left,
            exponent: 2.0,
            curvature: 1.0,
        };
        let start = frobenius_start(&sp, 3.0, -1.0, 1e-4 * PI, 1e-12).unwrap();
        let traj = integrate_eigen_ode(
            &|x: f64| 2.0 * x.tan(),
            3.0,
            start.x,
            start.v,
            start.dv,
            0.0,
            &cfg(),
        )
        .unwrap();
        let end = traj.last();
        assert_abs_diff_eq!(end.v, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(end.dv, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn dense_output_tracks_cosine() {
        let traj =
            integrate_eigen_ode(&|_| 0.0, 4.0, 0.0, -1.0, 0.0, 2.0, &cfg()).unwrap();
        for i in 0..=40 {
            let x = 2.0 * i as f64 / 40.0;
            let (v, dv) = traj.eval(x);
            assert_abs_diff_eq!(v, -(2.0 * x).cos(), epsilon = 1e-9);
            assert_abs_diff_eq!(dv, 2.0 * (2.0 * x).sin(), epsilon = 1e-8);
        }
    }

    #[test]
    fn wronskian_conserved_for_flat_drift() {
        let lambda = 2.7;
        let traj =
            integrate_eigen_ode(&|_| 0.0, lambda, 0.0, 1.0, 0.3, 10.0, &cfg()).unwrap();
        let w0 = 1.0 + 0.3 * 0.3 / lambda;
        for s in traj.samples() {
            let w = s.v * s.v + s.dv * s.dv / lambda;
            assert!((w / w0 - 1.0).abs() < 10.0 * 1e-10, "drift {}", w / w0 - 1.0);
        }
    }

    #[test]
    fn reversal_consistency() {
        let drift = |x: f64| -1.5 * x.tanh();
        let f = integrate_eigen_ode(&drift, 2.0, -1.0, 0.4, -0.2, 1.5, &cfg()).unwrap();
        let end = f.last();
        let back =
            integrate_eigen_ode(&drift, 2.0, 1.5, end.v, end.dv, -1.0, &cfg()).unwrap();
        let b = back.last();
        assert!((b.v - 0.4).abs() < 100.0 * 1e-10 * 0.4_f64.abs().max(1.0));
        assert!((b.dv + 0.2).abs() < 100.0 * 1e-10);
    }

    #[test]
    fn halving_tolerance_does_not_hurt() {
        let exact = -(1.0f64); // cos(pi)
        let mut prev = f64::INFINITY;
        for &rt in &[1e-6, 5e-7, 2.5e-7] {
            let c = IntegratorConfig {
                rel_tol: rt,
                abs_tol: rt * 1e-2,
                ..cfg()
            };
            let traj = integrate_eigen_ode(&|_| 0.0, 1.0, 0.0, 1.0, 0.0, PI, &c).unwrap();
            let err = (traj.last().v - exact).abs();
            assert!(err <= prev * 1.5 + 1e-14);
            prev = err;
        }
    }

    #[test]
    fn first_zero_of_dv_flat() {
        // v = -cos(2x): v' = 2 sin(2x), first zero of v' after 0 at pi/2.
        let (cp, _) =
            first_critical_point(&|_| 0.0, 4.0, 0.0, -1.0, 0.0, 10.0, &cfg()).unwrap();
        assert_abs_diff_eq!(cp.x, FRAC_PI_2, epsilon = 1e-10);
        assert_abs_diff_eq!(cp.v, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn no_critical_point_reports_error() {
        // lambda = 0 with positive slope: v' stays constant.
        let r = first_critical_point(&|_| 0.0, 0.0, 0.0, 0.0, 1.0, 5.0, &cfg());
        assert!(matches!(r, Err(Error::NoCriticalPoint { .. })));
    }

    #[test]
    fn simpson_on_trajectory() {
        let traj =
            integrate_eigen_ode(&|_| 0.0, 1.0, 0.0, 1.0, 0.0, PI, &cfg()).unwrap();
        // integral of cos over [0, pi] = 0; integral of cos^2 = pi/2.
        let i1 = traj.integrate(|_, v, _| v);
        let i2 = traj.integrate(|_, v, _| v * v);
        assert_abs_diff_eq!(i1, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(i2, PI / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn step_limit_is_enforced() {
        let c = IntegratorConfig {
            max_steps: 10,
            ..cfg()
        };
        let r = integrate_eigen_ode(&|_| 0.0, 1e6, 0.0, 1.0, 0.0, 100.0, &c);
        assert!(matches!(r, Err(Error::StepLimit { .. })));
    }
}
