//! Scalar abstraction for the numerical core.
//!
//! Everything downstream is generic over [`Real`], so the same solver code
//! runs in `f32` or `f64`. The crate-root type aliases fix `f64`, which is
//! what the default tolerances (1e-9 .. 1e-12) are calibrated for.

use core::fmt;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Default
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Lossy view of a scalar as `f64`, for diagnostics and error payloads.
#[inline]
pub(crate) fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
