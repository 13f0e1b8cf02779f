//! One-dimensional comparison model families.
//!
//! Two kinds of model appear:
//!
//! * the symmetric Neumann model on `(-d/2, d/2)`,
//!   `v'' - (N-1) T(x) v' = -lambda v`, whose first nonzero Neumann
//!   eigenvalue is the spectral-gap lower bound;
//! * the one-sided models `(R, l)` started at a point `a` where the weight
//!   density vanishes, which produce the profile functions `v`, the first
//!   critical point `b` and the maximum value `m = v(b)`.
//!
//! Both are self-adjoint with respect to a weight `rho`:
//! `(rho v')' = -lambda rho v` with `rho'/rho = -(N-1) T`. The drift is
//! trigonometric, flat, or hyperbolic according to the sign of the curvature
//! parameter; where the weight vanishes like `s^p` the drift behaves like
//! `p/s - p L s / 3 + O(s^3)` and initial values are launched with a short
//! power series instead of evaluating the singular coefficient.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};

/// Curvature lower bound `K` and dimension upper bound `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureDimension<T> {
    k: T,
    n: T,
}

impl<T: Real> CurvatureDimension<T> {
    /// Validates `N >= 1` and rejects the degenerate pair `K > 0, N = 1`
    /// (the drift coefficient `(N-1)T` has no finite limit there).
    pub fn new(k: T, n: T) -> Result<Self> {
        if !k.is_finite() || !n.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "K and N must be finite, got K = {k}, N = {n}"
            )));
        }
        if n < T::one() {
            return Err(Error::InvalidParameter(format!("N must be >= 1, got N = {n}")));
        }
        if k > T::zero() && n == T::one() {
            return Err(Error::InvalidParameter(format!(
                "K > 0 with N = 1 is not a valid model (K = {k})"
            )));
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn n(&self) -> T {
        self.n
    }

    /// Model curvature `L = K / (N - 1)`; `None` for `N = 1`.
    pub fn model_curvature(&self) -> Option<T> {
        if self.n == T::one() {
            None
        } else {
            Some(self.k / (self.n - T::one()))
        }
    }

    /// Maximal model diameter `pi * sqrt((N-1)/K)` for `K > 0`, `None`
    /// ("unbounded") otherwise.
    pub fn d_max(&self) -> Option<T> {
        if self.k > T::zero() && self.n > T::one() {
            Some(T::PI() * ((self.n - T::one()) / self.k).sqrt())
        } else {
            None
        }
    }

    /// Drift `T(x)`: `sqrt(L) tan(sqrt(L) x)` for `K > 0`, `0` for `K = 0`,
    /// `-sqrt(-L) tanh(sqrt(-L) x)` for `K < 0`, so that the weight below
    /// always satisfies `rho'/rho = -(N-1) T`.
    pub fn drift_t(&self, x: T) -> Result<T> {
        if self.n == T::one() {
            return Err(Error::InvalidParameter(
                "drift T is undefined for N = 1".into(),
            ));
        }
        let l = self.k / (self.n - T::one());
        if self.k > T::zero() {
            let sl = l.sqrt();
            let u = sl * x;
            if u.abs() >= T::FRAC_PI_2() {
                return Err(Error::OutOfDomain {
                    what: "drift T",
                    x: as_f64(x),
                });
            }
            Ok(sl * u.tan())
        } else if self.k == T::zero() {
            Ok(T::zero())
        } else {
            let sl = (-l).sqrt();
            Ok(-sl * (sl * x).tanh())
        }
    }

    /// Weight `rho(x)`: `cos^{N-1}(sqrt(L) x)`, `1`, or
    /// `cosh^{N-1}(sqrt(-L) x)` by the sign of `K`; identically `1` at `N = 1`.
    pub fn weight_rho(&self, x: T) -> Result<T> {
        if self.n == T::one() {
            return Ok(T::one());
        }
        let p = self.n - T::one();
        let l = self.k / p;
        if self.k > T::zero() {
            // cos(u) = sin(pi/2 - |u|), exact where cos cancels.
            let d = T::FRAC_PI_2() - (l.sqrt() * x).abs();
            if d <= T::zero() {
                return Err(Error::OutOfDomain {
                    what: "weight rho",
                    x: as_f64(x),
                });
            }
            Ok(d.sin().powf(p))
        } else if self.k == T::zero() {
            Ok(T::one())
        } else {
            Ok(((-l).sqrt() * x).cosh().powf(p))
        }
    }
}

/// Classification of a model interval endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointKind<T> {
    Regular,
    /// The weight vanishes like `dist^exponent` at the endpoint.
    Singular { exponent: T },
}

/// Which side of the domain an endpoint bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Data needed to launch (or terminate) a trajectory at a singular endpoint:
/// the drift there behaves like `p/s - p*curvature*s/3` in the inward
/// distance `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint<T> {
    pub x0: T,
    pub side: Side,
    pub exponent: T,
    pub curvature: T,
}

/// The symmetric Neumann model on `(-d/2, d/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricModel<T> {
    cd: CurvatureDimension<T>,
    d: T,
    endpoints: (EndpointKind<T>, EndpointKind<T>),
}

// Relative slack for deciding d == d_max in floating point. Inside this
// band the regular problem is numerically indistinguishable from the
// singular one (the endpoint weight is below any usable tolerance), while
// the drift at a "regular" endpoint would already exceed ~1e9 and starve
// the integrator; the eigenvalue differs from the d_max value only at the
// 1e-11 level across the whole band.
const DMAX_SLACK: f64 = 1e-9;

impl<T: Real> SymmetricModel<T> {
    pub fn new(cd: CurvatureDimension<T>, d: T) -> Result<Self> {
        if !(d > T::zero()) || !d.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interval length must be positive, got d = {d}"
            )));
        }
        let endpoints = match cd.d_max() {
            Some(dmax) => {
                let slack = dmax * lit::<T>(DMAX_SLACK);
                if d > dmax + slack {
                    return Err(Error::InvalidParameter(format!(
                        "d = {d} exceeds d_max = {dmax} for K = {}, N = {}",
                        cd.k(),
                        cd.n()
                    )));
                }
                if d >= dmax - slack {
                    let e = EndpointKind::Singular {
                        exponent: cd.n() - T::one(),
                    };
                    (e, e)
                } else {
                    (EndpointKind::Regular, EndpointKind::Regular)
                }
            }
            None => (EndpointKind::Regular, EndpointKind::Regular),
        };
        Ok(Self { cd, d, endpoints })
    }

    pub fn cd(&self) -> &CurvatureDimension<T> {
        &self.cd
    }

    pub fn d(&self) -> T {
        self.d
    }

    pub fn half_width(&self) -> T {
        self.d / lit::<T>(2.0)
    }

    pub fn endpoints(&self) -> (EndpointKind<T>, EndpointKind<T>) {
        self.endpoints
    }

    pub fn is_singular(&self) -> bool {
        matches!(self.endpoints.0, EndpointKind::Singular { .. })
    }

    /// Full drift coefficient `g(x) = (N-1) T(x)` of the first-order form
    /// `v'' = g v' - lambda v`; identically zero for `N = 1` or `K = 0`.
    pub fn drift_g(&self, x: T) -> T {
        let n = self.cd.n();
        if n == T::one() || self.cd.k() == T::zero() {
            return T::zero();
        }
        let p = n - T::one();
        let l = self.cd.k() / p;
        if self.cd.k() > T::zero() {
            let sl = l.sqrt();
            p * sl * (sl * x).tan()
        } else {
            let sl = (-l).sqrt();
            -p * sl * (sl * x).tanh()
        }
    }

    pub fn weight(&self, x: T) -> Result<T> {
        self.cd.weight_rho(x)
    }

    /// Singular-endpoint data for the requested side, if that endpoint is
    /// singular.
    pub fn singular_point(&self, side: Side) -> Option<SingularPoint<T>> {
        let kind = match side {
            Side::Left => self.endpoints.0,
            Side::Right => self.endpoints.1,
        };
        match kind {
            EndpointKind::Regular => None,
            EndpointKind::Singular { exponent } => {
                let x0 = match side {
                    Side::Left => -self.half_width(),
                    Side::Right => self.half_width(),
                };
                Some(SingularPoint {
                    x0,
                    side,
                    exponent,
                    curvature: self.cd.model_curvature().unwrap_or(T::zero()),
                })
            }
        }
    }
}

/// The three one-sided density families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneSidedFamily {
    /// `R > 0`: density `cos^{l-1}(sqrt(L) s)` on `(-pi/(2 sqrt L), pi/(2 sqrt L))`.
    Trig,
    /// `R = 0`: density `s^{l-1}` on `(0, inf)`.
    Power,
    /// `R < 0`: density `sinh^{l-1}(sqrt(-L) s)` on `(0, inf)`.
    Hyperbolic,
}

/// One-sided model `(R, l)` with singular left endpoint `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedModel<T> {
    r: T,
    l: T,
    family: OneSidedFamily,
}

impl<T: Real> OneSidedModel<T> {
    pub fn new(r: T, l: T) -> Result<Self> {
        if !r.is_finite() || !l.is_finite() || l <= T::one() {
            return Err(Error::InvalidParameter(format!(
                "one-sided model needs finite R and l > 1, got R = {r}, l = {l}"
            )));
        }
        let family = if r > T::zero() {
            OneSidedFamily::Trig
        } else if r == T::zero() {
            OneSidedFamily::Power
        } else {
            OneSidedFamily::Hyperbolic
        };
        Ok(Self { r, l, family })
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn family(&self) -> OneSidedFamily {
        self.family
    }

    /// `L = R / (l - 1)`.
    pub fn curvature(&self) -> T {
        self.r / (self.l - T::one())
    }

    /// Left endpoint `a`: `-pi/(2 sqrt L)` for the trig family, `0` otherwise.
    pub fn a(&self) -> T {
        match self.family {
            OneSidedFamily::Trig => -T::FRAC_PI_2() / self.curvature().sqrt(),
            _ => T::zero(),
        }
    }

    /// Right end of the family domain; only the trig family is bounded.
    pub fn domain_end(&self) -> Option<T> {
        match self.family {
            OneSidedFamily::Trig => Some(-self.a()),
            _ => None,
        }
    }

    /// Density `rho(s)` of the family table; vanishes at `a`.
    pub fn density(&self, s: T) -> Result<T> {
        let p = self.l - T::one();
        if s < self.a() {
            return Err(Error::OutOfDomain {
                what: "one-sided density",
                x: as_f64(s),
            });
        }
        match self.family {
            OneSidedFamily::Trig => {
                let sl = self.curvature().sqrt();
                let end = -self.a();
                if s > end * (T::one() + lit(1e-12)) {
                    return Err(Error::OutOfDomain {
                        what: "one-sided density",
                        x: as_f64(s),
                    });
                }
                // cos(sl s) = sin(sl (s - a)) = sin(sl (end - s)); the
                // difference form nearer its zero is exact where cos would
                // cancel, making rho vanish exactly at both endpoints.
                let th_l = sl * (s - self.a());
                let th_r = sl * (end - s);
                let c = th_l.min(th_r).max(T::zero()).sin();
                Ok(if c <= T::zero() { T::zero() } else { c.powf(p) })
            }
            OneSidedFamily::Power => Ok(s.powf(p)),
            OneSidedFamily::Hyperbolic => {
                let sl = (-self.curvature()).sqrt();
                Ok((sl * s).sinh().powf(p))
            }
        }
    }

    /// Drift coefficient of the first-order form `v'' = g v' - lambda v`,
    /// i.e. `g = -rho'/rho`. Unbounded at the singular endpoint `a`; callers
    /// step off `a` with [`frobenius_start`] before evaluating.
    pub fn drift_g(&self, s: T) -> T {
        let p = self.l - T::one();
        match self.family {
            OneSidedFamily::Trig => {
                let sl = self.curvature().sqrt();
                p * sl * (sl * s).tan()
            }
            OneSidedFamily::Power => -p / s,
            OneSidedFamily::Hyperbolic => {
                let sl = (-self.curvature()).sqrt();
                let u = sl * s;
                // coth saturates to 1 well before cosh/sinh overflow.
                if u > lit(20.0) {
                    -p * sl
                } else {
                    -p * sl * u.cosh() / u.sinh()
                }
            }
        }
    }

    /// Singular-endpoint data at `a`.
    pub fn singular_start(&self) -> SingularPoint<T> {
        SingularPoint {
            x0: self.a(),
            side: Side::Left,
            exponent: self.l - T::one(),
            curvature: self.curvature(),
        }
    }
}

/// Power-series values launched from a singular endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesStart<T> {
    /// Launch point `x0 +/- h` depending on the endpoint side.
    pub x: T,
    pub v: T,
    pub dv: T,
    /// Offset actually used after automatic reduction.
    pub h: T,
}

/// Even-series coefficients for `v = v0 (1 + a1 s^2 + a2 s^4)` solving
/// `v'' + (p/s - p L s/3) v' = -lambda v` near the singular point.
pub(crate) fn frobenius_coeffs<T: Real>(p: T, curvature: T, lambda: T) -> (T, T) {
    let two = lit::<T>(2.0);
    let a1 = -lambda / (two * (p + T::one()));
    let a2 = (two * p * curvature / lit::<T>(3.0) - lambda) * a1
        / (lit::<T>(4.0) * (p + lit::<T>(3.0)));
    (a1, a2)
}

/// Series factors `(v/v0, (dv/ds)/v0)` at inward distance `s`.
pub(crate) fn series_factors<T: Real>(p: T, curvature: T, lambda: T, s: T) -> (T, T) {
    let (a1, a2) = frobenius_coeffs(p, curvature, lambda);
    let s2 = s * s;
    let fv = T::one() + (a1 + a2 * s2) * s2;
    let fd = (lit::<T>(2.0) * a1 + lit::<T>(4.0) * a2 * s2) * s;
    (fv, fd)
}

/// Launches initial values at offset `h0` into the domain from a singular
/// endpoint where `v'(x0) = 0` is imposed. The quartic series remainder is
/// estimated and `h0` halved until it drops below `abs_tol`; at `lambda = 0`
/// the constant solution is returned exactly for any `h0`.
pub fn frobenius_start<T: Real>(
    sp: &SingularPoint<T>,
    lambda: T,
    v0: T,
    h0: T,
    abs_tol: T,
) -> Result<SeriesStart<T>> {
    if !(h0 > T::zero()) || !(abs_tol > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "frobenius start needs h0 > 0 and abs_tol > 0, got h0 = {h0}, abs_tol = {abs_tol}"
        )));
    }
    if !(sp.exponent > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "singular exponent must be positive, got p = {}",
            sp.exponent
        )));
    }
    let p = sp.exponent;
    let (_, a2) = frobenius_coeffs(p, sp.curvature, lambda);
    // Leading omitted term is O(h^6) in v (O(h^5) in v'), with a coefficient
    // of the same build as a2's recursion step.
    let a3_bound = a2.abs() * (lambda.abs() + p * sp.curvature.abs())
        / (lit::<T>(6.0) * (p + lit::<T>(5.0)));
    let floor = T::epsilon() * sp.x0.abs().max(T::one()) * lit::<T>(64.0);
    let mut h = h0;
    loop {
        let rem_v = v0.abs() * a3_bound * h.powi(6);
        let rem_dv = lit::<T>(6.0) * v0.abs() * a3_bound * h.powi(5);
        if rem_v.max(rem_dv) <= abs_tol {
            break;
        }
        if h <= floor {
            return Err(Error::SeriesStep { h0: as_f64(h) });
        }
        h = h / lit::<T>(2.0);
    }
    let (fv, fd) = series_factors(p, sp.curvature, lambda, h);
    let (x, dv) = match sp.side {
        Side::Left => (sp.x0 + h, v0 * fd),
        Side::Right => (sp.x0 - h, -(v0 * fd)),
    };
    Ok(SeriesStart {
        x,
        v: v0 * fv,
        dv,
        h,
    })
}
