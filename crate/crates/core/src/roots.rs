//! Scalar root finding on fallible functions: Brent's method for the
//! eigenvalue shooting residual, plain bisection for family matching.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

pub(crate) struct BrentOutcome<T> {
    pub root: T,
    pub width: T,
}

/// Brent's method on a bracketing interval with precomputed endpoint values.
/// `fa * fb <= 0` is required.
pub(crate) fn brent<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    mut a: T,
    mut b: T,
    mut fa: T,
    mut fb: T,
    xtol: T,
    max_iter: usize,
) -> Result<BrentOutcome<T>> {
    if fa == T::zero() {
        return Ok(BrentOutcome {
            root: a,
            width: T::zero(),
        });
    }
    if fb == T::zero() {
        return Ok(BrentOutcome {
            root: b,
            width: T::zero(),
        });
    }
    if fa * fb > T::zero() {
        return Err(Error::InvalidParameter(
            "root is not bracketed".into(),
        ));
    }
    let eps = T::epsilon();
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * eps * b.abs() + half * xtol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(BrentOutcome {
                root: b,
                width: (c - b).abs(),
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation, falling back to secant.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                q = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * q * (q - r) - (b - a) * (r - T::one()));
                q = (q - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = lit::<T>(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b = b + d;
        } else {
            b = b + if xm > T::zero() { tol1 } else { -tol1 };
        }
        fb = f(b)?;
    }
    Err(Error::NoConvergence {
        what: "brent root refinement",
    })
}

/// Bisection on a fallible function with precomputed endpoint values of
/// opposite sign; returns the midpoint of the final interval.
pub(crate) fn bisect<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    mut lo: T,
    mut hi: T,
    flo: T,
    xtol: T,
    max_iter: usize,
) -> Result<T> {
    let lo_pos = flo > T::zero();
    for _ in 0..max_iter {
        let mid = (lo + hi) * lit::<T>(0.5);
        if (hi - lo).abs() <= xtol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm > T::zero()) == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * lit::<T>(0.5))
}
