//! Sharp spectral-gap lower bounds from one-dimensional Neumann models.
//!
//! The bound `lambda_1 >= hat_lambda(K, N, d)` compares the spectral gap of
//! a space with curvature lower bound `K`, dimension upper bound `N` and
//! diameter at most `d` against the first nonzero Neumann eigenvalue of the
//! one-dimensional model
//!
//! ```text
//! v'' - (N-1) T(x) v' = -lambda v   on (-d/2, d/2),   v'(+-d/2) = 0,
//! ```
//!
//! with trigonometric, flat, or hyperbolic drift `T` according to the sign
//! of `K`. This crate computes `hat_lambda` two independent ways (adaptive
//! shooting on the ODE and bisection on a finite-volume pencil), implements
//! the one-sided profile functions `(v, b, m)` behind the gradient and
//! maximum comparison theorems, and ships a catalog of explicit spaces on
//! which every bound can be checked end to end.
//!
//! Everything is generic over the scalar type through [`scalar::Real`];
//! the `*64` aliases at the crate root fix `f64`, which the default
//! tolerances are calibrated for.

// Validations use `!(x > 0)` rather than `x <= 0` so that NaN inputs fail
// them as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gapbound;
pub mod modelfun;
pub mod models;
pub mod ode;
mod roots;
pub mod scalar;
pub mod spaces;
pub mod tridiag;

pub use error::{Error, Result};
pub use gapbound::{hat_lambda, lichnerowicz, miss_function, remark_bound, Method, SolveMethod};
pub use modelfun::{
    check_gradient_comparison, check_max_comparison, m_value, match_interval, model_profile,
    weighted_flux_residual,
};
pub use models::{CurvatureDimension, OneSidedModel, SymmetricModel};
pub use scalar::Real;
pub use spaces::{bg_ratio_lower_bound, catalog, s_kappa, verify_bound};

/// `f64` instantiations of the core types.
pub type CurvatureDimension64 = models::CurvatureDimension<f64>;
pub type SymmetricModel64 = models::SymmetricModel<f64>;
pub type OneSidedModel64 = models::OneSidedModel<f64>;
pub type IntegratorConfig64 = ode::IntegratorConfig<f64>;
pub type Trajectory64 = ode::Trajectory<f64>;
pub type SpectralResult64 = gapbound::SpectralResult<f64>;
pub type ModelProfile64 = modelfun::ModelProfile<f64>;
pub type ModelSpace64 = spaces::ModelSpace<f64>;
pub type BoundReport64 = spaces::BoundReport<f64>;
