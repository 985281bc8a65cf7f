//! The integral representation of the generalized theta transformation,
//! its kernel μ/∇, and the moment integrals of shifted ρ against ₁F₁.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::region::require_inside;
use crate::settings::EvalSettings;
use crate::specfun::{eta_parts, onef1};
use crate::theta::{general_theta_sides, psi1_alpha_derivative};
use crate::Complex;

/// Distance kept from α = ±π/4, where the integrands stop decaying.
pub const ALPHA_MARGIN: f64 = 0.005;
/// Smallest truncation point ever used.
pub const TRUNCATION_FLOOR: f64 = 40.0;
/// Panel length used to seed the adaptive quadrature over long ranges.
const SEED_PANEL: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<V = Complex> {
    pub value: V,
    /// Quadrature plus truncation error.
    pub abs_err_est: f64,
    /// Upper integration limit actually used (largest |t| for two-sided integrals).
    pub truncation_t: f64,
    pub evaluations: usize,
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// μ(x, z, s) = x^{1/2−s} e^{−z²/8} ₁F₁((1−s)/2; ½; z²/4).
pub fn mu(x: Complex, z: Complex, s: Complex, settings: &EvalSettings) -> Result<Complex> {
    if x == c(0.0, 0.0) {
        return Err(Error::Domain("mu needs x ≠ 0".into()));
    }
    let f = onef1((c(1.0, 0.0) - s) * 0.5, c(0.5, 0.0), z * z / 4.0, settings)?.value;
    Ok(((c(0.5, 0.0) - s) * x.ln()).exp() * (-z * z / 8.0).exp() * f)
}

/// ∇(x, z, s) = μ(x, z, s) + μ(x, z, 1 − s).
pub fn nabla(x: Complex, z: Complex, s: Complex, settings: &EvalSettings) -> Result<Complex> {
    Ok(mu(x, z, s, settings)? + mu(x, z, c(1.0, 0.0) - s, settings)?)
}

/// Smallest T ≥ `floor` at which the tail bound e^{ℓ(T)}/(−ℓ'(T)) of a
/// log-concave majorant e^{ℓ} drops to e^{ln_target}. Returns (T, tail bound).
fn truncation_point<F>(ln_majorant: F, floor: f64, ln_target: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> (f64, f64),
{
    const LIMIT: f64 = 1e7;
    let log_tail = |t: f64| -> Option<f64> {
        let (l, dl) = ln_majorant(t);
        (dl < 0.0).then(|| l - (-dl).ln())
    };
    let mut lo = floor;
    while log_tail(lo).is_none() {
        lo *= 2.0;
        if lo > LIMIT {
            return Err(Error::Domain("integrand majorant does not decay".into()));
        }
    }
    if log_tail(lo).unwrap() <= ln_target {
        return Ok((lo, log_tail(lo).unwrap().exp()));
    }
    let mut hi = lo * 2.0;
    while log_tail(hi).unwrap() > ln_target {
        lo = hi;
        hi *= 2.0;
        if hi > LIMIT {
            return Err(Error::Domain("truncation point beyond reach; alpha too close to the boundary".into()));
        }
    }
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if log_tail(mid).unwrap() > ln_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((hi, log_tail(hi).unwrap().exp()))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.abs() <= FRAC_PI_4 - ALPHA_MARGIN) {
        return Err(Error::Domain(format!(
            "|alpha| = {} exceeds π/4 − {ALPHA_MARGIN}; integrand decay is lost",
            alpha.abs()
        )));
    }
    Ok(())
}

fn seeded(len: f64) -> usize {
    (len / SEED_PANEL).ceil().max(1.0) as usize
}

/// (1/π)∫_0^∞ Ξ(t/2)/(1+t²) ∇(a, z, (1+it)/2) dt.
///
/// Uses Ξ(t/2)/(1+t²) = −ρ(t/2)/8 and keeps a^{∓it/2} inside the logarithm
/// of the Gamma factor, so large t neither overflows nor underflows.
pub fn xi_integral(a: Complex, z: Complex, settings: &EvalSettings) -> Result<QuadratureResult> {
    let settings = settings.validated()?;
    let alpha = a.arg();
    check_alpha(alpha)?;
    if !(0.5..=2.0).contains(&a.norm()) {
        return Err(Error::Domain(format!("|a| = {} outside [0.5, 2]", a.norm())));
    }
    require_inside(z)?;
    if z.norm() > 1.5 {
        return Err(Error::Domain(format!("|z| = {} exceeds 1.5", z.norm())));
    }
    let rate = alpha.abs() / 2.0 - FRAC_PI_8;
    let zn = z.norm();
    let tol = settings.quad_abs_tol;
    let (t_max, tail) = truncation_point(
        |t| (6.0 * t.ln() + rate * t + zn * t.sqrt(), 6.0 / t + rate + zn / (2.0 * t.sqrt())),
        TRUNCATION_FLOOR,
        (0.1 * tol).ln(),
    )?;

    let log_a = a.ln();
    let w = z * z / 4.0;
    let pre = -(-z * z / 8.0).exp() / (8.0 * PI);
    let integrand = |t: f64| -> Result<Complex> {
        let parts = eta_parts(c(0.5, t / 2.0), &settings)?;
        let half_it = c(0.0, t / 2.0);
        let f1 = onef1(c(0.25, -t / 4.0), c(0.5, 0.0), w, &settings)?.value;
        let f2 = onef1(c(0.25, t / 4.0), c(0.5, 0.0), w, &settings)?.value;
        let k1 = parts.scaled(-half_it * log_a)?.value;
        let k2 = parts.scaled(half_it * log_a)?.value;
        Ok(pre * (k1 * f1 + k2 * f2))
    };
    let opts = QuadOptions { integrand_rel_err: 1e-14, ..QuadOptions::absolute(0.5 * tol) }.with_panels(seeded(t_max));
    let r = integrate(integrand, 0.0, t_max, &opts)?;
    Ok(QuadratureResult {
        value: r.value,
        abs_err_est: r.abs_err_est + tail,
        truncation_t: t_max,
        evaluations: r.evaluations,
    })
}

/// max(|I − side(a)|, |I − side(1/a)|) for the theta-transformation integral I.
pub fn integral_identity_residual(a: Complex, z: Complex, settings: &EvalSettings) -> Result<f64> {
    let i = xi_integral(a, z, settings)?.value;
    let (sa, sb) = general_theta_sides(a, z, settings)?;
    Ok((i - sa).norm().max((i - sb).norm()))
}

/// Re[t^{2m} e^{αt} ρ(t+λ) ₁F₁((1−2i(t+λ))/4; ½; z²/4)].
pub fn moment_integrand(t: f64, m: u32, alpha: f64, lambda: f64, z: Complex, settings: &EvalSettings) -> Result<f64> {
    let u = t + lambda;
    let rho = eta_parts(c(0.5, u), settings)?.scaled(c(alpha * t, 0.0))?.value.re;
    if rho == 0.0 {
        return Ok(0.0);
    }
    let f = onef1(c(0.25, -u / 2.0), c(0.5, 0.0), z * z / 4.0, settings)?.value;
    Ok(t.powi(2 * m as i32) * rho * f.re)
}

fn check_moment_inputs(m: u32, alpha: f64, z: Complex) -> Result<()> {
    if m > 2 {
        return Err(Error::Parameter(format!("moment order m = {m} above 2")));
    }
    check_alpha(alpha)?;
    require_inside(z)?;
    if z.norm() > 1.0 {
        return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
    }
    Ok(())
}

/// Truncation points (T₋, T₊) and the combined tail bound for the moment integral.
///
/// Majorant: |ρ(u)| ≤ 12 e^{−π|u|/4} (Stirling for Γ((½+iu)/2) with
/// |ζ(½+iu)| ≤ 3|u|^{1/4}) and |₁F₁(·)| ≤ 2e^{|z|√(|u|/2)}.
fn moment_truncation(m: u32, alpha: f64, lambda: f64, z: Complex, tol: f64) -> Result<(f64, f64, f64)> {
    let zn = z.norm();
    let two_m = 2.0 * m as f64;
    let ln_k = 24f64.ln();
    let floor = TRUNCATION_FLOOR + lambda.abs();
    let side = |sign: f64| {
        // t = sign·τ, u = t + λ, τ ≥ floor so that |u| = τ + sign·λ > 0.
        move |tau: f64| {
            let u = tau + sign * lambda;
            let l = ln_k + two_m * tau.ln() + sign * alpha * tau - FRAC_PI_4 * u + zn * (u / 2.0).sqrt();
            let dl = two_m / tau + sign * alpha - FRAC_PI_4 + zn / (2.0 * (2.0 * u).sqrt());
            (l, dl)
        }
    };
    let target = (0.05 * tol).ln();
    let (hi, tail_hi) = truncation_point(side(1.0), floor, target)?;
    let (lo, tail_lo) = truncation_point(side(-1.0), floor, target)?;
    Ok((lo, hi, tail_lo + tail_hi))
}

/// Re ∫_{−∞}^{∞} t^{2m} e^{αt} ρ(t+λ) ₁F₁((1−2i(t+λ))/4; ½; z²/4) dt.
pub fn moment_integral_single(
    m: u32,
    alpha: f64,
    lambda: f64,
    z: Complex,
    settings: &EvalSettings,
) -> Result<QuadratureResult<f64>> {
    let settings = settings.validated()?;
    check_moment_inputs(m, alpha, z)?;
    let tol = settings.quad_abs_tol;
    let (t_lo, t_hi, tail) = moment_truncation(m, alpha, lambda, z, tol)?;
    let opts = QuadOptions { rel_tol: settings.rel_tol, integrand_rel_err: 1e-13, ..QuadOptions::absolute(tol) }
        .with_panels(seeded(t_lo + t_hi));
    let r = integrate(|t| moment_integrand(t, m, alpha, lambda, z, &settings), -t_lo, t_hi, &opts)?;
    Ok(QuadratureResult {
        value: r.value,
        abs_err_est: r.abs_err_est + tail,
        truncation_t: t_lo.max(t_hi),
        evaluations: r.evaluations,
    })
}

/// −4πe^{−αλ}r^{2m}cos(α/2 + 2mθ) + 4πRe[e^{z²/8}ψ₁^{(2m)}(α, z, λ)], where i/2 − λ = re^{iθ}:
/// the closed form of [`moment_integral_single`].
pub fn moment_rhs_single(m: u32, alpha: f64, lambda: f64, z: Complex, settings: &EvalSettings) -> Result<f64> {
    let k = c(-lambda, 0.5);
    let (r, theta) = (k.norm(), k.arg());
    let m2 = 2 * m;
    let d = psi1_alpha_derivative(alpha, z, lambda, m2 as usize, settings)?;
    let explicit = -4.0 * PI * (-alpha * lambda).exp() * r.powi(m2 as i32) * (alpha / 2.0 + m2 as f64 * theta).cos();
    Ok(explicit + 4.0 * PI * ((z * z / 8.0).exp() * d).re)
}
