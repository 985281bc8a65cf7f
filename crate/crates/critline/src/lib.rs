//! Numerics for shifted combinations of the Riemann Ξ-function with confluent
//! hypergeometric factors: special functions, generalized theta
//! transformations, the integral representation they satisfy, the region of
//! admissible `z`, moment identities and a critical-line zero scanner.

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod error;
pub mod integral;
pub mod jet;
pub mod quadrature;
pub mod region;
pub mod scalar;
pub mod settings;
pub mod shifts;
pub mod specfun;
pub mod theta;
pub mod zeroscan;

pub use error::{Error, Result};
pub use settings::{EvalSettings, ValueWithError};

/// The library's complex scalar.
pub type Complex = num_complex::Complex64;
/// Alias used in public signatures for complex inputs and outputs.
pub type ComplexValue = Complex;
