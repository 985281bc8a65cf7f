//! Jacobi-type theta sums ψ(x) and ψ(x, z), their modular transformations,
//! ψ₁ with its α-derivatives, and the small-δ limits near x = ±i.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::jet::{Analytic, Jet};
use crate::region::require_inside;
use crate::settings::EvalSettings;
use crate::Complex;

/// Below this real part of x, ψ(x, z) near ±i is evaluated through the split transform.
const AXIS_SWITCH: f64 = 0.5;
/// Highest supported α-derivative.
pub const MAX_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaEval {
    pub value: Complex,
    pub terms_used: usize,
    pub abs_err_est: f64,
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Σ_{n≥1} exp(L − πn²x)·cos(√(πx)·n·z), generic over values and jets.
///
/// Terms are formed as exponentials so a large prefactor e^{L} never
/// overflows on its own. Truncation uses the majorant
/// e^{Re L − πn²Re x + n|Im √(πx)z|}, which is geometric past its peak.
fn weighted_theta_sum<A: Analytic>(x: A, z: A, log_weight: A, settings: &EvalSettings) -> Result<(A, usize, f64)> {
    let x0 = x.value();
    if !(x0.re > 0.0) {
        return Err(Error::Domain(format!("theta sum needs Re(x) > 0, got x = {x0}")));
    }
    let k = (x * c(PI, 0.0)).sqrt() * z;
    let ik = k * c(0.0, 1.0);
    let (r, b, lre) = (x0.re, k.value().im.abs(), log_weight.value().re);
    let peak = b / (2.0 * PI * r);
    let mut sum = A::constant(c(0.0, 0.0));
    let mut mass = 0.0;
    let mut prev_norm = f64::INFINITY;
    for n in 1..=settings.max_terms {
        let nf = n as f64;
        let e = log_weight - x * c(PI * nf * nf, 0.0);
        let term = ((e + ik * c(nf, 0.0)).exp() + (e - ik * c(nf, 0.0)).exp()) * c(0.5, 0.0);
        sum = sum + term;
        let norm = term.magnitude();
        mass += term.value().norm();
        if nf < peak {
            prev_norm = norm;
            continue;
        }
        let m = nf + 1.0;
        let q = (-PI * (2.0 * m + 1.0) * r + b).exp();
        if q < 1.0 {
            let next = (lre - PI * m * m * r + m * b).exp() / (1.0 - q);
            let jet_tail = norm * q / (1.0 - q);
            let tail = next + jet_tail;
            let tol = settings.quad_abs_tol.min((f64::EPSILON * mass).max(f64::MIN_POSITIVE));
            if tail <= tol && norm <= prev_norm.max(tol) {
                let rounding = 2.0 * f64::EPSILON * mass;
                return Ok((sum, n, tail + rounding));
            }
        }
        prev_norm = norm;
    }
    Err(Error::Divergence(settings.max_terms))
}

/// Classical ψ(x) = Σ_{n≥1} e^{−πn²x}.
pub fn psi_classical(x: f64, settings: &EvalSettings) -> Result<ThetaEval> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("psi needs x > 0, got {x}")));
    }
    psi_general(c(x, 0.0), c(0.0, 0.0), settings)
}

/// ψ(x, z) = Σ_{n≥1} e^{−πn²x} cos(√(πx)·n·z), by direct summation.
pub fn psi_general(x: Complex, z: Complex, settings: &EvalSettings) -> Result<ThetaEval> {
    let (value, terms_used, abs_err_est) = weighted_theta_sum(x, z, c(0.0, 0.0), settings)?;
    Ok(ThetaEval { value, terms_used, abs_err_est })
}

/// |√x(2ψ(x)+1) − (2ψ(1/x)+1)|.
pub fn jacobi_residual(x: f64, settings: &EvalSettings) -> Result<f64> {
    let a = psi_classical(x, settings)?.value.re;
    let b = psi_classical(1.0 / x, settings)?.value.re;
    Ok((x.sqrt() * (2.0 * a + 1.0) - (2.0 * b + 1.0)).abs())
}

fn check_theta_parameter(a: Complex) -> Result<()> {
    if !(a.re > 0.0 && (a * a).re > 0.0) {
        return Err(Error::Domain(format!("need Re(a) > 0 and Re(a²) > 0, got a = {a}")));
    }
    Ok(())
}

/// Both sides of the generalized theta transformation with b = 1/a:
/// √a(e^{−z²/8}/(2a) − e^{z²/8}ψ(a², z)) and √b(e^{z²/8}/(2b) − e^{−z²/8}ψ(b², iz)).
pub fn general_theta_sides(a: Complex, z: Complex, settings: &EvalSettings) -> Result<(Complex, Complex)> {
    check_theta_parameter(a)?;
    let b = a.inv();
    let q = z * z / 8.0;
    let (eq, emq) = (q.exp(), (-q).exp());
    let psi_a = psi_general(a * a, z, settings)?.value;
    let psi_b = psi_general(b * b, z * c(0.0, 1.0), settings)?.value;
    let side_a = a.sqrt() * (emq / (a * 2.0) - eq * psi_a);
    let side_b = b.sqrt() * (eq / (b * 2.0) - emq * psi_b);
    Ok((side_a, side_b))
}

/// |side(a) − side(1/a)| for the generalized theta transformation.
pub fn general_theta_residual(a: Complex, z: Complex, settings: &EvalSettings) -> Result<f64> {
    let (l, r) = general_theta_sides(a, z, settings)?;
    Ok((l - r).norm())
}

/// Residual of ψ(x,z) = e^{−z²/4}x^{−1/2}ψ(1/x, iz) + e^{−z²/4}/(2√x) − ½.
pub fn psi_xz_transform_residual(x: Complex, z: Complex, settings: &EvalSettings) -> Result<f64> {
    if !(x.re > 0.0) {
        return Err(Error::Domain(format!("need Re(x) > 0, got x = {x}")));
    }
    let lhs = psi_general(x, z, settings)?.value;
    let g = (-z * z / 4.0).exp() / x.sqrt();
    let rhs = g * psi_general(x.inv(), z * c(0.0, 1.0), settings)?.value + g * 0.5 - 0.5;
    Ok((lhs - rhs).norm())
}

/// S(δ) = e^{−w²/4}δ^{−1/2}[ψ(1/(4δ), iw) − ψ(1/δ, iw)], w² = z²(σi+δ)/δ,
/// so that ψ(σi+δ, z) = S(δ) − ½ for σ = ±1.
fn split_transformed<A: Analytic>(
    delta: A,
    sigma: f64,
    z: Complex,
    settings: &EvalSettings,
) -> Result<(A, usize, f64)> {
    let w = (delta + c(0.0, sigma)).sqrt() / delta.sqrt() * z;
    let iw = w * c(0.0, 1.0);
    let log_weight = -(w * w) * c(0.25, 0.0) - delta.ln() * c(0.5, 0.0);
    let inv = A::constant(c(1.0, 0.0)) / delta;
    let (s1, n1, e1) = weighted_theta_sum(inv * c(0.25, 0.0), iw, log_weight, settings)?;
    let (s2, n2, e2) = weighted_theta_sum(inv, iw, log_weight, settings)?;
    Ok((s1 - s2, n1 + n2, e1 + e2))
}

/// e^{−z²/8}/2 + e^{z²/8}ψ(x, z), switching to the split transform near x = ±i.
fn theta_bracket<A: Analytic>(x: A, z: Complex, settings: &EvalSettings) -> Result<(A, usize, f64)> {
    let x0 = x.value();
    let q = z * z / 8.0;
    if x0.re >= AXIS_SWITCH {
        let (psi, n, err) = weighted_theta_sum(x, A::constant(z), A::constant(c(0.0, 0.0)), settings)?;
        Ok((psi * q.exp() + (-q).exp() * 0.5, n, err * q.exp().norm()))
    } else {
        let sigma = if x0.im >= 0.0 { 1.0 } else { -1.0 };
        let (s, n, err) = split_transformed(x - c(0.0, sigma), sigma, z, settings)?;
        // e^{−q}/2 + e^{q}(S − ½) = −sinh(q) + e^{q}S
        Ok((s * q.exp() - q.sinh(), n, err * q.exp().norm()))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.abs() < FRAC_PI_4) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (−π/4, π/4)")));
    }
    Ok(())
}

fn psi1_generic<A: Analytic>(alpha: A, z: Complex, lambda: f64, settings: &EvalSettings) -> Result<A> {
    let x = (alpha * c(0.0, 2.0)).exp();
    let (bracket, _, _) = theta_bracket(x, z, settings)?;
    Ok((alpha * c(-lambda, 0.5)).exp() * bracket)
}

/// ψ₁(α, z) = e^{(i/2−λ)α}(e^{−z²/8}/2 + e^{z²/8}ψ(e^{2iα}, z)).
pub fn psi1(alpha: f64, z: Complex, lambda: f64, settings: &EvalSettings) -> Result<Complex> {
    check_alpha(alpha)?;
    psi1_generic(c(alpha, 0.0), z, lambda, settings)
}

/// The `order`-th α-derivative of ψ₁, by term-wise differentiation of the series.
pub fn psi1_alpha_derivative(
    alpha: f64,
    z: Complex,
    lambda: f64,
    order: usize,
    settings: &EvalSettings,
) -> Result<Complex> {
    if order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    check_alpha(alpha)?;
    let jet = psi1_generic(Jet::<{ MAX_ORDER + 1 }>::variable(c(alpha, 0.0)), z, lambda, settings)?;
    Ok(jet.derivative(order))
}

/// The α → π/4⁻ limit of the `order`-th derivative of ψ₁:
/// −(i/2−λ)^order e^{(π/4)(i/2−λ)} sinh(z²/8).
pub fn psi1_limit(z: Complex, lambda: f64, order: usize) -> Complex {
    let k = c(-lambda, 0.5);
    -k.powu(order as u32) * (k * FRAC_PI_4).exp() * (z * z / 8.0).sinh()
}

/// |ψ₁^{(order)}(α_k) − limit| along α_k = π/4 − 10^{−k}.
pub fn psi1_limit_residuals(
    z: Complex,
    lambda: f64,
    order: usize,
    ks: &[u32],
    settings: &EvalSettings,
) -> Result<Vec<f64>> {
    let limit = psi1_limit(z, lambda, order);
    ks.iter()
        .map(|&k| {
            let alpha = FRAC_PI_4 - 10f64.powi(-(k as i32));
            Ok((psi1_alpha_derivative(alpha, z, lambda, order, settings)? - limit).norm())
        })
        .collect()
}

/// The two small-δ theta expressions that govern ψ near x = i.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallDeltaSequences {
    /// |δ^{−1/2}e^{−(z²/4)(1+i/δ)}ψ(1/(4δ), iz√(1+i/δ))|
    pub quarter: Vec<f64>,
    /// the same with ψ(1/δ, ·)
    pub unit: Vec<f64>,
}

/// Evaluate both expressions for complex δ with |arg δ| < π/2.
pub fn small_delta_decay_complex(
    z: Complex,
    deltas: &[Complex],
    settings: &EvalSettings,
) -> Result<SmallDeltaSequences> {
    require_inside(z)?;
    let mut quarter = Vec::with_capacity(deltas.len());
    let mut unit = Vec::with_capacity(deltas.len());
    for &d in deltas {
        if !(d.re > 0.0) {
            return Err(Error::Parameter(format!("delta = {d} needs a positive real part")));
        }
        let u = c(1.0, 0.0) + c(0.0, 1.0) / d;
        let arg = z * c(0.0, 1.0) * u.sqrt();
        let lw = -(z * z / 4.0) * u - d.ln() * 0.5;
        quarter.push(weighted_theta_sum((d * 4.0).inv(), arg, lw, settings)?.0.norm());
        unit.push(weighted_theta_sum(d.inv(), arg, lw, settings)?.0.norm());
    }
    Ok(SmallDeltaSequences { quarter, unit })
}

/// Both expressions on a strictly decreasing sequence of positive δ.
pub fn small_delta_decay(z: Complex, deltas: &[f64], settings: &EvalSettings) -> Result<SmallDeltaSequences> {
    if deltas.iter().any(|&d| !(d > 0.0)) || deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Parameter("deltas must be positive and strictly decreasing".into()));
    }
    let ds: Vec<Complex> = deltas.iter().map(|&d| c(d, 0.0)).collect();
    small_delta_decay_complex(z, &ds, settings)
}

/// e^{−z²/8}/2 + e^{z²/8}ψ(i+δ, z) through the even/odd split.
pub fn psi_near_i(z: Complex, delta: f64, settings: &EvalSettings) -> Result<Complex> {
    require_inside(z)?;
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("delta = {delta} must be positive")));
    }
    let (s, _, _) = split_transformed(c(delta, 0.0), 1.0, z, settings)?;
    let q = z * z / 8.0;
    Ok(s * q.exp() - q.sinh())
}

/// ψ(i+δ, z) as 2ψ(4δ, w) − ψ(δ, w), w = √(i+δ)/√δ·z, summed directly.
pub fn psi_at_i_split_direct(z: Complex, delta: f64, settings: &EvalSettings) -> Result<Complex> {
    let d = c(delta, 0.0);
    let w = (d + c(0.0, 1.0)).sqrt() / d.sqrt() * z;
    Ok(psi_general(d * 4.0, w, settings)?.value * 2.0 - psi_general(d, w, settings)?.value)
}
