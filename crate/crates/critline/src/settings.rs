use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

/// Precision and truncation policy shared by every series and quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalSettings {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Minimum direct-sum length for Euler-Maclaurin.
    pub em_terms: usize,
    pub quad_abs_tol: f64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 10_000, em_terms: 20, quad_abs_tol: 1e-10 }
    }
}

impl EvalSettings {
    pub fn validated(self) -> Result<Self> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Parameter(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if self.max_terms < 16 {
            return Err(Error::Parameter(format!("max_terms must be at least 16, got {}", self.max_terms)));
        }
        if !(self.quad_abs_tol > 0.0 && self.quad_abs_tol.is_finite()) {
            return Err(Error::Parameter(format!("quad_abs_tol must be positive, got {}", self.quad_abs_tol)));
        }
        Ok(self)
    }

    pub fn with_quad_abs_tol(mut self, tol: f64) -> Self {
        self.quad_abs_tol = tol;
        self
    }
}

/// A value together with an estimate of the absolute error actually incurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueWithError {
    pub value: Complex,
    pub abs_err_est: f64,
}

impl ValueWithError {
    pub fn new(value: Complex, abs_err_est: f64) -> Self {
        Self { value, abs_err_est }
    }

    pub fn exact(value: Complex) -> Self {
        Self { value, abs_err_est: 0.0 }
    }

    pub fn rel_err(&self) -> f64 {
        let m = self.value.norm();
        if m > 0.0 {
            self.abs_err_est / m
        } else {
            f64::INFINITY
        }
    }
}

pub(crate) fn ensure_finite(value: Complex, what: &'static str) -> Result<Complex> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(what))
    }
}
