use std::f64::consts::PI;

use super::gamma::ln_gamma;
use super::zeta::zeta_c;
use crate::error::{Error, Result};
use crate::settings::{ensure_finite, EvalSettings, ValueWithError};
use crate::Complex;

/// Radius of the disc around s = 0, 1 where ξ returns its limit value.
const XI_PATCH_RADIUS: f64 = 1e-8;

/// η(s) split as exp(log_prefactor)·ζ(s), with log_prefactor = ln(π^{−s/2}Γ(s/2)).
///
/// Keeping the Gamma factor in logarithms lets callers fold exponential
/// weights into it before anything under- or overflows.
#[derive(Debug, Clone, Copy)]
pub struct EtaParts {
    pub log_prefactor: Complex,
    pub log_err: f64,
    pub zeta: ValueWithError,
}

impl EtaParts {
    /// e^{log_weight}·η(s).
    pub fn scaled(&self, log_weight: Complex) -> Result<ValueWithError> {
        let l = self.log_prefactor + log_weight;
        if l.re > f64::MAX.ln() {
            return Err(Error::Overflow("completed zeta"));
        }
        let factor = l.exp();
        let value = ensure_finite(factor * self.zeta.value, "completed zeta")?;
        let err = factor.norm() * self.zeta.abs_err_est + value.norm() * self.log_err;
        Ok(ValueWithError::new(value, err))
    }
}

pub fn eta_parts(s: Complex, settings: &EvalSettings) -> Result<EtaParts> {
    if s == Complex::new(0.0, 0.0) || s == Complex::new(1.0, 0.0) {
        return Err(Error::Pole(s));
    }
    let (lg, lg_err) = ln_gamma(s * 0.5)?;
    let log_prefactor = lg - s * (0.5 * PI.ln());
    let log_err = lg_err + 4.0 * f64::EPSILON * (log_prefactor.norm() + 1.0);
    let zeta = zeta_c(s, settings)?;
    Ok(EtaParts { log_prefactor, log_err, zeta })
}

/// Completed zeta η(s) = π^{−s/2}Γ(s/2)ζ(s).
pub fn eta_completed(s: Complex, settings: &EvalSettings) -> Result<ValueWithError> {
    eta_parts(s, settings)?.scaled(Complex::new(0.0, 0.0))
}

/// Riemann's ξ(s) = ½s(s−1)η(s), entire.
pub fn xi_c(s: Complex, settings: &EvalSettings) -> Result<ValueWithError> {
    let one = Complex::new(1.0, 0.0);
    if s.norm() < XI_PATCH_RADIUS || (s - one).norm() < XI_PATCH_RADIUS {
        // |ξ'(0)| ≈ 0.011, so the patch costs at most ~1e−10.
        return Ok(ValueWithError::new(Complex::new(0.5, 0.0), 0.011 * XI_PATCH_RADIUS));
    }
    let eta = eta_completed(s, settings)?;
    let k = s * (s - 1.0) * 0.5;
    Ok(ValueWithError::new(k * eta.value, k.norm() * eta.abs_err_est))
}

fn real_part_checked(v: Complex) -> Result<f64> {
    let bound = 1e-9 * (1.0 + v.re.abs());
    if v.im.abs() > bound {
        return Err(Error::Symmetry { residue: v.im.abs(), bound });
    }
    Ok(v.re)
}

/// Ξ(t) = ξ(½ + it), real for real t.
pub fn big_xi(t: f64, settings: &EvalSettings) -> Result<f64> {
    real_part_checked(xi_c(Complex::new(0.5, t), settings)?.value)
}

/// ρ(t) = η(½ + it), real for real t.
pub fn rho_real(t: f64, settings: &EvalSettings) -> Result<f64> {
    real_part_checked(eta_completed(Complex::new(0.5, t), settings)?.value)
}

/// e^{log_weight}·ρ(t) as a real value with error estimate; usable where ρ(t) alone underflows.
pub fn rho_scaled(t: f64, log_weight: f64, settings: &EvalSettings) -> Result<ValueWithError> {
    let v = eta_parts(Complex::new(0.5, t), settings)?.scaled(Complex::new(log_weight, 0.0))?;
    let re = real_part_checked(v.value)?;
    Ok(ValueWithError::new(Complex::new(re, 0.0), v.abs_err_est))
}
