use core::fmt;

/// Why an adaptive integration gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// The step size fell below the floating-point resolution of `t`.
    StepUnderflow,
    /// The configured step budget was exhausted.
    StepBudget,
    /// The right-hand side produced a non-finite value at an accepted state.
    NonFinite,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureKind::StepUnderflow => f.write_str("step-size underflow"),
            FailureKind::StepBudget => f.write_str("step budget exhausted"),
            FailureKind::NonFinite => f.write_str("non-finite derivative"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A model parameter violates the invariant of the type that owns it.
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// A function was evaluated outside its domain.
    Domain { what: &'static str, value: f64 },
    /// The requested root or inverse does not exist in the admissible range.
    NoSolution { what: &'static str, value: f64 },
    /// `delta + n_infinity <= 0`: no stable Solow equilibrium exists.
    Unstable { delta: f64, n_infinity: f64 },
    /// Adaptive integration stopped before the requested end time.
    Integration { t: f64, kind: FailureKind },
    /// Saddle-path shooting could not bracket an initial consumption.
    NoSaddlePath { reason: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                expected,
            } => write!(f, "invalid parameter {name} = {value}: expected {expected}"),
            Error::Domain { what, value } => write!(f, "{what} is outside its domain at {value}"),
            Error::NoSolution { what, value } => write!(f, "no solution for {what} at {value}"),
            Error::Unstable { delta, n_infinity } => write!(
                f,
                "unstable regime: delta + n_infinity = {} <= 0 (delta = {delta}, n_infinity = {n_infinity})",
                delta + n_infinity
            ),
            Error::Integration { t, kind } => write!(f, "integration failed at t = {t}: {kind}"),
            Error::NoSaddlePath { reason } => write!(f, "no saddle path: {reason}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
