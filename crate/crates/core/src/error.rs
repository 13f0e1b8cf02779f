use core::fmt;

/// Errors surfaced by the solvers. Payloads are `f64` snapshots of the
/// offending quantities regardless of the working scalar type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation precondition was violated.
    InvalidParameter(String),
    /// An evaluation point lies outside the coefficient's domain.
    OutOfDomain { what: &'static str, x: f64 },
    /// The integrator exceeded its step budget.
    StepLimit { steps: usize, x: f64 },
    /// The integrator state stopped being finite.
    NonFinite { x: f64 },
    /// No zero of v' was found before the search limit.
    NoCriticalPoint { x_end: f64 },
    /// The eigenvalue bracket scan ran past its cap.
    BracketExhausted { lambda_cap: f64 },
    /// Shooting and discretization disagree beyond the allowed gap.
    MethodDisagreement {
        shooting: f64,
        discretization: f64,
        limit: f64,
    },
    /// An iterative routine failed to converge.
    NoConvergence { what: &'static str },
    /// A value escaped a range it is contractually confined to.
    RangeViolation { value: f64, lo: f64, hi: f64 },
    /// No interval in the comparison family attains the requested maximum.
    NoMatch { max_f: f64 },
    /// The series start offset cannot meet the requested tolerance.
    SeriesStep { h0: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::OutOfDomain { what, x } => write!(f, "{what} undefined at x = {x}"),
            Error::StepLimit { steps, x } => {
                write!(f, "step limit {steps} exceeded at x = {x}")
            }
            Error::NonFinite { x } => write!(f, "non-finite state near x = {x}"),
            Error::NoCriticalPoint { x_end } => {
                write!(f, "no critical point of v before x = {x_end}")
            }
            Error::BracketExhausted { lambda_cap } => {
                write!(f, "eigenvalue bracket scan exhausted below lambda = {lambda_cap}")
            }
            Error::MethodDisagreement {
                shooting,
                discretization,
                limit,
            } => write!(
                f,
                "methods disagree: shooting {shooting} vs discretization {discretization} \
                 (allowed {limit})"
            ),
            Error::NoConvergence { what } => write!(f, "{what} did not converge"),
            Error::RangeViolation { value, lo, hi } => {
                write!(f, "value {value} outside required range [{lo}, {hi}]")
            }
            Error::NoMatch { max_f } => {
                write!(f, "no model interval attains maximum {max_f}")
            }
            Error::SeriesStep { h0 } => {
                write!(f, "series start offset {h0} cannot meet tolerance")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
