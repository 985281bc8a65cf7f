use crate::Complex;
use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at s = {0}")]
    Pole(Complex),

    #[error("overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("accuracy target missed: error estimate {estimate:e} exceeds {target:e}")]
    Accuracy { estimate: f64, target: f64 },

    #[error("series not converged after {0} terms")]
    Divergence(usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("imaginary residue {residue:e} exceeds the bound {bound:e}")]
    Symmetry { residue: f64, bound: f64 },

    #[error("z = {0} is not in the region D")]
    Region(Complex),

    #[error("membership tests disagree at z = {0}")]
    Consistency(Complex),

    #[error("quadrature budget exhausted: error estimate {estimate:e} above tolerance {tolerance:e}")]
    Tolerance { estimate: f64, tolerance: f64 },

    #[error("derivative order {0} unsupported (maximum 4)")]
    UnsupportedOrder(usize),

    #[error("invalid shift configuration: {0}")]
    Config(String),

    #[error("degenerate moment parameters (w = {0:e})")]
    Degenerate(f64),

    #[error("bisection did not converge within {0} iterations")]
    MaxIter(usize),

    #[error("evaluation failed at t = {t}: {source}")]
    Evaluation { t: f64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Config(_) | Error::Region(_) | Error::Parameter(_) | Error::Domain(_) => true,
            Error::Evaluation { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
