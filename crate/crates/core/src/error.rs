use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures reported by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a model or formula.
    Domain { what: &'static str, value: f64 },
    /// No inviscid solution exists at this radius (below the existence radius).
    NoSolution { r: f64 },
    /// Branch continuation lost its root; `r` is the last radius where it was tracked.
    BranchLost { r: f64, v: f64 },
    /// Newton iteration did not reach the requested residual.
    NonConvergence { residual: f64, iterations: usize, last: Vec<f64> },
    /// A closed form divides by a vanishing quantity.
    Singular { what: &'static str },
    /// `f` is not monotone; every solution of `f(v) = f0` is listed.
    NotInvertible { roots: Vec<f64> },
    /// The requested value is outside the range of the function.
    Range { what: &'static str, value: f64 },
    /// No step was found in a viscous profile.
    NoStep { max_slope: f64, background_slope: f64 },
    /// Operation not defined for this gas model.
    ModelKind { what: &'static str },
    /// Configuration lacks data needed for the operation.
    Regime { what: &'static str },
    /// Combination of options that is not supported.
    Unsupported { what: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::NoSolution { r } => write!(f, "no solution branch at r = {r}"),
            Error::BranchLost { r, v } => {
                write!(f, "branch lost after r = {r} (v = {v}); fold reached")
            }
            Error::NonConvergence { residual, iterations, .. } => write!(
                f,
                "newton did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::Singular { what } => write!(f, "singular: {what}"),
            Error::NotInvertible { roots } => {
                write!(f, "f is not invertible; {} candidate roots", roots.len())
            }
            Error::Range { what, value } => write!(f, "out of range: {what} (got {value})"),
            Error::NoStep { max_slope, background_slope } => write!(
                f,
                "no step: max slope {max_slope:e} below 3x background slope {background_slope:e}"
            ),
            Error::ModelKind { what } => write!(f, "{what}"),
            Error::Regime { what } => write!(f, "regime error: {what}"),
            Error::Unsupported { what } => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for Error {}
