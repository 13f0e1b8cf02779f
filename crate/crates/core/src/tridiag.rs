//! Symmetric-definite generalized tridiagonal eigensolver.
//!
//! The pencil is `S v = lambda M v` with `S` symmetric tridiagonal (the
//! stiffness of a conservative finite-volume Neumann discretization of
//! `-(rho v')' = lambda rho v`) and `M` diagonal (cell-center weights).
//! Eigenvalues are found by bisection on Sturm-sequence inertia counts,
//! eigenvectors by inverse iteration with the shifted factorization.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalPencil<T> {
    n: usize,
    stiff_diag: Vec<T>,
    stiff_off: Vec<T>,
    mass_diag: Vec<T>,
}

impl<T: Real> TridiagonalPencil<T> {
    /// Interior masses must be strictly positive; the two boundary entries
    /// may be zero (vanishing-weight assemblies), though the bisection
    /// solver requires all of them positive.
    pub fn new(stiff_diag: Vec<T>, stiff_off: Vec<T>, mass_diag: Vec<T>) -> Result<Self> {
        let n = stiff_diag.len();
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "pencil needs n >= 2, got {n}"
            )));
        }
        if stiff_off.len() != n - 1 || mass_diag.len() != n {
            return Err(Error::InvalidParameter(
                "pencil arrays have inconsistent lengths".into(),
            ));
        }
        for (i, &m) in mass_diag.iter().enumerate() {
            let interior = i > 0 && i + 1 < n;
            if !(m >= T::zero()) || (interior && !(m > T::zero())) {
                return Err(Error::InvalidParameter(format!(
                    "mass entry {i} must be {} , got {m}",
                    if interior { "positive" } else { "nonnegative" }
                )));
            }
        }
        Ok(Self {
            n,
            stiff_diag,
            stiff_off,
            mass_diag,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stiff_diag(&self) -> &[T] {
        &self.stiff_diag
    }

    pub fn stiff_off(&self) -> &[T] {
        &self.stiff_off
    }

    pub fn mass_diag(&self) -> &[T] {
        &self.mass_diag
    }

    /// `out = S v`.
    pub fn apply_stiffness(&self, v: &[T], out: &mut [T]) {
        let n = self.n;
        for i in 0..n {
            let mut s = self.stiff_diag[i] * v[i];
            if i > 0 {
                s = s + self.stiff_off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s = s + self.stiff_off[i] * v[i + 1];
            }
            out[i] = s;
        }
    }

    /// Number of pencil eigenvalues strictly below `sigma`, by the sign
    /// count of the `L D L^T` pivots of `S - sigma M`. Pivot breakdown is
    /// handled by restarting with an ulp-scale shift of `sigma`.
    pub fn inertia(&self, sigma: T) -> usize {
        self.inertia_counted(sigma).0
    }

    /// Like [`inertia`](Self::inertia), also reporting how many shift
    /// restarts the factorization needed.
    pub fn inertia_counted(&self, sigma: T) -> (usize, usize) {
        let scale = self.magnitude().max(sigma.abs()).max(T::one());
        let mut bump = scale * T::epsilon() * lit::<T>(4.0);
        for attempt in 0..8 {
            let shifted = if attempt == 0 { sigma } else { sigma + bump };
            if let Some(count) = self.count_pivots(shifted) {
                return (count, attempt);
            }
            bump = bump * lit::<T>(16.0);
        }
        // Kahan pivot replacement cannot break down.
        (self.count_pivots_replaced(sigma), 8)
    }

    fn count_pivots(&self, sigma: T) -> Option<usize> {
        let mut count = 0usize;
        let mut d = self.stiff_diag[0] - sigma * self.mass_diag[0];
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        if d < T::zero() {
            count += 1;
        }
        for i in 1..self.n {
            let e = self.stiff_off[i - 1];
            d = self.stiff_diag[i] - sigma * self.mass_diag[i] - e * e / d;
            if d == T::zero() || !d.is_finite() {
                return None;
            }
            if d < T::zero() {
                count += 1;
            }
        }
        Some(count)
    }

    fn count_pivots_replaced(&self, sigma: T) -> usize {
        let maxe2 = self
            .stiff_off
            .iter()
            .fold(T::one(), |m, &e| m.max(e * e));
        let pivmin = T::min_positive_value() / T::epsilon() * maxe2;
        let mut count = 0usize;
        let mut d = self.stiff_diag[0] - sigma * self.mass_diag[0];
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < T::zero() {
            count += 1;
        }
        for i in 1..self.n {
            let e = self.stiff_off[i - 1];
            d = self.stiff_diag[i] - sigma * self.mass_diag[i] - e * e / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < T::zero() {
                count += 1;
            }
        }
        count
    }

    fn magnitude(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.n {
            let mut r = self.stiff_diag[i].abs();
            if i > 0 {
                r = r + self.stiff_off[i - 1].abs();
            }
            if i + 1 < self.n {
                r = r + self.stiff_off[i].abs();
            }
            m = m.max(r);
        }
        m
    }

    /// Gershgorin bracket for the pencil eigenvalues, computed on the
    /// symmetrically mass-scaled matrix `M^{-1/2} S M^{-1/2}`.
    fn gershgorin(&self) -> Result<(T, T)> {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..self.n {
            let m = self.mass_diag[i];
            if !(m > T::zero()) {
                return Err(Error::InvalidParameter(
                    "bisection solver requires strictly positive masses".into(),
                ));
            }
            let mut r = T::zero();
            if i > 0 {
                r = r + self.stiff_off[i - 1].abs() / (m * self.mass_diag[i - 1]).sqrt();
            }
            if i + 1 < self.n {
                r = r + self.stiff_off[i].abs() / (m * self.mass_diag[i + 1]).sqrt();
            }
            let c = self.stiff_diag[i] / m;
            lo = lo.min(c - r);
            hi = hi.max(c + r);
        }
        let pad = (hi - lo).abs().max(T::one()) * T::epsilon() * lit::<T>(64.0);
        Ok((lo - pad, hi + pad))
    }

    /// k-th smallest generalized eigenvalue, bisected to absolute width
    /// `tol`.
    pub fn eigenvalue_k(&self, k: usize, tol: T) -> Result<T> {
        if k >= self.n {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue index {k} out of range for n = {}",
                self.n
            )));
        }
        if !(tol > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "bisection tolerance must be positive, got {tol}"
            )));
        }
        let (mut lo, mut hi) = self.gershgorin()?;
        // The bracket is already certified by Gershgorin; widen defensively
        // in case of rounding at the extremes.
        let mut guard = 0;
        while self.inertia(lo) > k && guard < 64 {
            lo = lo - (hi - lo).abs().max(T::one());
            guard += 1;
        }
        guard = 0;
        while self.inertia(hi) <= k && guard < 64 {
            hi = hi + (hi - lo).abs().max(T::one());
            guard += 1;
        }
        loop {
            let mid = (lo + hi) * lit::<T>(0.5);
            if (hi - lo) <= tol || mid <= lo || mid >= hi {
                return Ok((lo + hi) * lit::<T>(0.5));
            }
            if self.inertia(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Eigenvector for a converged eigenvalue, by inverse iteration with the
    /// shifted factorization. Normalized so that `min v = -1` with the sign
    /// fixed to make the first entry negative.
    pub fn eigenvector_k(&self, k: usize, lambda_k: T) -> Result<Vec<T>> {
        let n = self.n;
        let scale = self.magnitude().max(T::one());
        let mut delta = lambda_k.abs().max(scale * lit(1e-8)) * lit(1e-11);

        let mut fact = None;
        for _ in 0..8 {
            if let Some(f) = self.factor(lambda_k + delta) {
                fact = Some(f);
                break;
            }
            delta = delta * lit::<T>(32.0);
        }
        let (l, d) = fact.ok_or(Error::NoConvergence {
            what: "shifted factorization",
        })?;

        // Deterministic start with good overlap for low modes.
        let mut x: Vec<T> = (0..n)
            .map(|i| {
                let t = T::from_usize(k).unwrap() * T::PI()
                    * (T::from_usize(i).unwrap() + lit(0.5))
                    / T::from_usize(n).unwrap();
                t.cos()
            })
            .collect();
        normalize_max(&mut x);

        let res_limit = lit::<T>(1e-8) * self.magnitude();
        let mut sv = vec![T::zero(); n];
        for _ in 0..20 {
            solve_ldlt(&l, &d, &mut x);
            normalize_max(&mut x);
            self.apply_stiffness(&x, &mut sv);
            let mut res = T::zero();
            let mut norm = T::zero();
            for i in 0..n {
                let r = sv[i] - lambda_k * self.mass_diag[i] * x[i];
                res = res + r * r;
                norm = norm + x[i] * x[i];
            }
            if res.sqrt() <= res_limit * norm.sqrt() {
                let first = x.iter().copied().find(|v| *v != T::zero()).unwrap_or(T::one());
                if first > T::zero() {
                    for v in x.iter_mut() {
                        *v = -*v;
                    }
                }
                let mn = x.iter().copied().fold(T::infinity(), T::min);
                if !(mn < T::zero()) {
                    return Err(Error::NoConvergence {
                        what: "eigenvector normalization",
                    });
                }
                for v in x.iter_mut() {
                    *v = *v / -mn;
                }
                return Ok(x);
            }
        }
        Err(Error::NoConvergence {
            what: "inverse iteration",
        })
    }

    fn factor(&self, sigma: T) -> Option<(Vec<T>, Vec<T>)> {
        let n = self.n;
        let mut d = vec![T::zero(); n];
        let mut l = vec![T::zero(); n - 1];
        d[0] = self.stiff_diag[0] - sigma * self.mass_diag[0];
        if d[0] == T::zero() || !d[0].is_finite() {
            return None;
        }
        for i in 1..n {
            let e = self.stiff_off[i - 1];
            l[i - 1] = e / d[i - 1];
            d[i] = self.stiff_diag[i] - sigma * self.mass_diag[i] - l[i - 1] * e;
            if d[i] == T::zero() || !d[i].is_finite() {
                return None;
            }
        }
        Some((l, d))
    }
}

fn solve_ldlt<T: Real>(l: &[T], d: &[T], b: &mut [T]) {
    let n = d.len();
    for i in 1..n {
        b[i] = b[i] - l[i - 1] * b[i - 1];
    }
    for i in 0..n {
        b[i] = b[i] / d[i];
    }
    for i in (0..n - 1).rev() {
        b[i] = b[i] - l[i] * b[i + 1];
    }
}

fn normalize_max<T: Real>(x: &mut [T]) {
    let mx = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if mx > T::zero() {
        for v in x.iter_mut() {
            *v = *v / mx;
        }
    }
}

/// Conservative finite-volume Neumann assembly on a uniform grid of `n`
/// cells: interior fluxes use midpoint weights, boundary rows drop the
/// outward flux, and the mass matrix carries cell-center weights. Only
/// strictly interior points are ever evaluated, so weights vanishing at the
/// interval endpoints need no special casing.
pub fn assemble_neumann<T: Real, W: Fn(T) -> T>(
    weight: W,
    interval: (T, T),
    n: usize,
) -> Result<TridiagonalPencil<T>> {
    let (x0, x1) = interval;
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "assembly needs n >= 2 cells, got {n}"
        )));
    }
    if !(x1 > x0) {
        return Err(Error::InvalidParameter(format!(
            "assembly interval is empty: [{x0}, {x1}]"
        )));
    }
    let h = (x1 - x0) / T::from_usize(n).unwrap();
    let h2 = h * h;
    let eval = |x: T| -> Result<T> {
        let w = weight(x);
        if !(w >= T::zero()) || !w.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weight must be finite and nonnegative, got {w} at x = {x}"
            )));
        }
        Ok(w)
    };

    let mut faces = Vec::with_capacity(n - 1);
    for i in 1..n {
        faces.push(eval(x0 + h * T::from_usize(i).unwrap())? / h2);
    }
    let mut mass = Vec::with_capacity(n);
    for i in 0..n {
        let c = x0 + h * (T::from_usize(i).unwrap() + lit(0.5));
        mass.push(eval(c)?);
    }

    let mut diag = vec![T::zero(); n];
    let mut off = vec![T::zero(); n - 1];
    for (i, &f) in faces.iter().enumerate() {
        off[i] = -f;
        diag[i] = diag[i] + f;
        diag[i + 1] = diag[i + 1] + f;
    }
    TridiagonalPencil::new(diag, off, mass)
}
