//! The vertically shifted combination F_z(s) = Σ c_j η(s+iλ_j){₁F₁(…) + ₁F₁(…)},
//! its real form on the critical line, and the moment bookkeeping that
//! predicts its sign behaviour.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::integral::{moment_integral_single, moment_rhs_single, QuadratureResult};
use crate::region::classify;
use crate::settings::{EvalSettings, ValueWithError};
use crate::specfun::{eta_completed, eta_parts, onef1};
use crate::Complex;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Unvalidated configuration as read from a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftConfigSpec {
    pub coefficients: Vec<f64>,
    pub shifts: Vec<f64>,
    pub z_re: f64,
    pub z_im: f64,
    #[serde(default)]
    pub tail_bound: f64,
}

/// A validated set of coefficients c_j, distinct shifts λ_j and the parameter z.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftConfig {
    coefficients: Vec<f64>,
    shifts: Vec<f64>,
    z: Complex,
    tail_bound: f64,
    dominant: usize,
}

impl ShiftConfig {
    pub fn new(coefficients: Vec<f64>, shifts: Vec<f64>, z: Complex, tail_bound: f64) -> Result<Self> {
        validate_config(ShiftConfigSpec { coefficients, shifts, z_re: z.re, z_im: z.im, tail_bound })
    }

    /// c = (1), λ = (0), z = 0: F_0(s) = 2η(s).
    pub fn hardy() -> Self {
        Self::new(vec![1.0], vec![0.0], c(0.0, 0.0), 0.0).expect("valid")
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    pub fn z(&self) -> Complex {
        self.z
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Index of the unique shift of largest modulus.
    pub fn dominant_index(&self) -> usize {
        self.dominant
    }

    pub fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.coefficients.iter().copied().zip(self.shifts.iter().copied())
    }

    /// Same shifts and z, coefficients multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(
            self.coefficients.iter().map(|x| x * k).collect(),
            self.shifts.clone(),
            self.z,
            self.tail_bound * k.abs(),
        )
    }

    pub fn spec(&self) -> ShiftConfigSpec {
        ShiftConfigSpec {
            coefficients: self.coefficients.clone(),
            shifts: self.shifts.clone(),
            z_re: self.z.re,
            z_im: self.z.im,
            tail_bound: self.tail_bound,
        }
    }

    /// SHA-256 of a canonical rendering (shortest round-trip decimal for every float).
    pub fn digest(&self) -> String {
        let mut text = String::from("coefficients=");
        for x in &self.coefficients {
            text.push_str(&format!("{x:?},"));
        }
        text.push_str(";shifts=");
        for x in &self.shifts {
            text.push_str(&format!("{x:?},"));
        }
        text.push_str(&format!(";z={:?},{:?};tail_bound={:?}", self.z.re, self.z.im, self.tail_bound));
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Check the hypotheses on (c_j, λ_j, z) and locate the dominant shift.
pub fn validate_config(spec: ShiftConfigSpec) -> Result<ShiftConfig> {
    let ShiftConfigSpec { coefficients, shifts, z_re, z_im, tail_bound } = spec;
    if coefficients.is_empty() {
        return Err(Error::Config("at least one coefficient is required".into()));
    }
    if coefficients.len() != shifts.len() {
        return Err(Error::Config(format!("{} coefficients but {} shifts", coefficients.len(), shifts.len())));
    }
    if coefficients.iter().chain(&shifts).chain([&z_re, &z_im, &tail_bound]).any(|x| !x.is_finite()) {
        return Err(Error::Config("all values must be finite".into()));
    }
    if let Some(j) = coefficients.iter().position(|&x| x == 0.0) {
        return Err(Error::Config(format!("coefficient {j} is zero")));
    }
    if tail_bound < 0.0 {
        return Err(Error::Config("tail_bound must be nonnegative".into()));
    }
    for i in 0..shifts.len() {
        for j in i + 1..shifts.len() {
            if shifts[i] == shifts[j] {
                return Err(Error::Config(format!("duplicate shift {} at indices {i} and {j}", shifts[i])));
            }
        }
    }
    let max_abs = shifts.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let hits: Vec<usize> = (0..shifts.len()).filter(|&j| shifts[j].abs() == max_abs).collect();
    if hits.len() != 1 {
        return Err(Error::Config(format!("max |shift| = {max_abs} is attained more than once")));
    }
    let z = c(z_re, z_im);
    match classify(z) {
        Ok(v) if v.inside => {}
        Ok(v) => {
            return Err(Error::Config(format!(
                "z = {z} is not in the region D (label {}, margin {:e})",
                v.component_label, v.margin
            )))
        }
        Err(e) => return Err(Error::Config(format!("region check failed: {e}"))),
    }
    Ok(ShiftConfig { coefficients, shifts, z, tail_bound, dominant: hits[0] })
}

/// F_z(s) with error estimate; the tail bound multiplies the largest term.
pub fn f_z(s: Complex, cfg: &ShiftConfig, settings: &EvalSettings) -> Result<ValueWithError> {
    let z = cfg.z;
    let (w, wc) = (z * z / 4.0, z.conj() * z.conj() / 4.0);
    let half = c(0.5, 0.0);
    let mut total = c(0.0, 0.0);
    let mut err = 0.0;
    let mut largest = 0.0f64;
    for (cj, lj) in cfg.terms() {
        let sh = s + c(0.0, lj);
        let eta = eta_completed(sh, settings)?;
        let f1 = onef1((c(1.0, 0.0) - sh) * 0.5, half, w, settings)?;
        let f2 = onef1((c(1.0, 0.0) - (s.conj() - c(0.0, lj))) * 0.5, half, wc, settings)?;
        let bracket = f1.value + f2.value;
        let term = eta.value * bracket;
        total += term * cj;
        err += cj.abs() * (eta.value.norm() * (f1.abs_err_est + f2.abs_err_est) + eta.abs_err_est * bracket.norm());
        largest = largest.max(term.norm());
    }
    Ok(ValueWithError::new(total, err + cfg.tail_bound * largest))
}

/// The critical-line value together with the full complex evaluation it is checked against.
#[derive(Debug, Clone, Copy)]
struct CriticalEval {
    real_form: f64,
    full: Complex,
}

fn critical_eval(t: f64, cfg: &ShiftConfig, log_weight: f64, settings: &EvalSettings) -> Result<CriticalEval> {
    let z = cfg.z;
    let (w, wc) = (z * z / 4.0, z.conj() * z.conj() / 4.0);
    let half = c(0.5, 0.0);
    let mut real_form = 0.0;
    let mut full = c(0.0, 0.0);
    for (cj, lj) in cfg.terms() {
        let u = t + lj;
        let eta = eta_parts(c(0.5, u), settings)?.scaled(c(log_weight, 0.0))?.value;
        let f1 = onef1(c(0.25, -u / 2.0), half, w, settings)?.value;
        let f2 = onef1(c(0.25, u / 2.0), half, wc, settings)?.value;
        real_form += 2.0 * cj * eta.re * f1.re;
        full += eta * (f1 + f2) * cj;
    }
    let bound = 1e-9 * (1.0 + real_form.abs());
    let residue = full.im.abs().max((full.re - real_form).abs());
    if residue > bound {
        return Err(Error::Symmetry { residue, bound });
    }
    Ok(CriticalEval { real_form, full })
}

/// F_z(½ + it) = 2Σ c_j ρ(t+λ_j) Re ₁F₁((1−2i(t+λ_j))/4; ½; z²/4), checked against
/// the complex evaluation (imaginary part and real part must agree).
pub fn f_z_critical(t: f64, cfg: &ShiftConfig, settings: &EvalSettings) -> Result<f64> {
    Ok(critical_eval(t, cfg, 0.0, settings)?.real_form)
}

/// e^{π|t|/4}·F_z(½ + it): same sign as F_z, but O(1) in size at large |t|.
pub fn f_z_critical_scaled(t: f64, cfg: &ShiftConfig, settings: &EvalSettings) -> Result<f64> {
    Ok(critical_eval(t, cfg, FRAC_PI_4 * t.abs(), settings)?.real_form)
}

/// |Im F_z(½+it)| / (1 + |F_z(½+it)|) for the normalized function; the reality check.
pub fn critical_imaginary_ratio(t: f64, cfg: &ShiftConfig, settings: &EvalSettings) -> Result<f64> {
    let e = critical_eval(t, cfg, FRAC_PI_4 * t.abs(), settings)?;
    Ok(e.full.im.abs() / (1.0 + e.full.norm()))
}

/// i/2 − λ = r e^{iθ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarShift {
    pub r: f64,
    pub theta: f64,
}

pub fn polar_shift(lambda: f64) -> PolarShift {
    PolarShift { r: 0.5f64.hypot(lambda), theta: 0.5f64.atan2(-lambda) }
}

/// u + iv = 1 + e^{z²/8} sinh(z²/8) = w e^{iβ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentParams {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub beta: f64,
}

pub fn moment_params(z: Complex) -> Result<MomentParams> {
    let q = z * z / 8.0;
    let e = c(1.0, 0.0) + q.exp() * q.sinh();
    let (u, v) = (e.re, e.im);
    let w = u.hypot(v);
    if !(w >= 1e-14) {
        return Err(Error::Degenerate(w));
    }
    let mut beta = v.atan2(u);
    if beta < 0.0 {
        beta += 2.0 * PI;
    }
    if beta >= 2.0 * PI {
        beta = 0.0;
    }
    Ok(MomentParams { u, v, w, beta })
}

/// −4πw Σ c_j e^{−πλ_j/4} r_j^{2m} cos(π/8 + β + 2mθ_j): the α → π/4 limit of the moments.
pub fn moment_closed_form(m: u32, cfg: &ShiftConfig) -> Result<f64> {
    let p = moment_params(cfg.z)?;
    let sum: f64 = cfg
        .terms()
        .map(|(cj, lj)| {
            let ps = polar_shift(lj);
            let m2 = 2.0 * m as f64;
            cj * (-FRAC_PI_4 * lj).exp() * ps.r.powf(m2) * (FRAC_PI_8 + p.beta + m2 * ps.theta).cos()
        })
        .sum();
    Ok(-4.0 * PI * p.w * sum)
}

/// Σ c_j ∫ t^{2m} e^{αt} ρ(t+λ_j) Re ₁F₁(…) dt, i.e. ½∫ t^{2m} e^{αt} F_z(½+it) dt.
pub fn moment_numeric(m: u32, alpha: f64, cfg: &ShiftConfig, settings: &EvalSettings) -> Result<QuadratureResult<f64>> {
    let mut out = QuadratureResult { value: 0.0, abs_err_est: 0.0, truncation_t: 0.0, evaluations: 0 };
    for (cj, lj) in cfg.terms() {
        let r = moment_integral_single(m, alpha, lj, cfg.z, settings)?;
        out.value += cj * r.value;
        out.abs_err_est += cj.abs() * r.abs_err_est;
        out.truncation_t = out.truncation_t.max(r.truncation_t);
        out.evaluations += r.evaluations;
    }
    Ok(out)
}

/// The closed-form right-hand side matching [`moment_numeric`] at α < π/4.
pub fn moment_rhs(m: u32, alpha: f64, cfg: &ShiftConfig, settings: &EvalSettings) -> Result<f64> {
    let mut acc = 0.0;
    for (cj, lj) in cfg.terms() {
        acc += cj * moment_rhs_single(m, alpha, lj, cfg.z, settings)?;
    }
    Ok(acc)
}

/// Where the moments are sampled before extrapolating to α = π/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitNodes {
    /// Distances ε = π/4 − α of the two samples, ε_far > ε_near.
    pub eps_far: f64,
    pub eps_near: f64,
    /// Quadrature tolerance for the samples; the check itself resolves ~1e−3.
    pub quad_abs_tol: f64,
}

impl Default for LimitNodes {
    fn default() -> Self {
        // Both nodes are close enough that the exponentially small remainder
        // (~e^{−c/ε}) is negligible and the approach is linear in ε.
        Self { eps_far: 0.01, eps_near: 0.0075, quad_abs_tol: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitReport {
    pub m: u32,
    pub value_far: f64,
    pub value_near: f64,
    pub extrapolated: f64,
    pub closed_form: f64,
    /// |extrapolated − closed_form| / (1 + |closed_form|)
    pub discrepancy: f64,
}

pub fn moment_limit_report(
    m: u32,
    cfg: &ShiftConfig,
    nodes: &LimitNodes,
    settings: &EvalSettings,
) -> Result<LimitReport> {
    if m > 1 {
        return Err(Error::Parameter(format!("limit check supports m ≤ 1, got {m}")));
    }
    if !(nodes.eps_far > nodes.eps_near && nodes.eps_near > 0.0) {
        return Err(Error::Parameter("limit nodes need eps_far > eps_near > 0".into()));
    }
    let s = settings.with_quad_abs_tol(nodes.quad_abs_tol.max(settings.quad_abs_tol));
    let value_far = moment_numeric(m, FRAC_PI_4 - nodes.eps_far, cfg, &s)?.value;
    let value_near = moment_numeric(m, FRAC_PI_4 - nodes.eps_near, cfg, &s)?.value;
    let (a, b) = (nodes.eps_far, nodes.eps_near);
    let extrapolated = value_near + (value_near - value_far) * b / (a - b);
    let closed_form = moment_closed_form(m, cfg)?;
    let discrepancy = (extrapolated - closed_form).abs() / (1.0 + closed_form.abs());
    Ok(LimitReport { m, value_far, value_near, extrapolated, closed_form, discrepancy })
}

/// Relative discrepancy between the extrapolated α → π/4 moment and its closed form.
pub fn moment_limit_check(m: u32, cfg: &ShiftConfig, settings: &EvalSettings) -> Result<f64> {
    Ok(moment_limit_report(m, cfg, &LimitNodes::default(), settings)?.discrepancy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> EvalSettings {
        EvalSettings::default()
    }

    fn two_term(z: Complex) -> ShiftConfig {
        ShiftConfig::new(vec![1.0, 0.5], vec![0.0, 1.0], z, 0.0).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(ShiftConfig::hardy().dominant_index(), 0);
        let dup = ShiftConfig::new(vec![1.0, 0.5], vec![0.3, 0.3], c(0.0, 0.0), 0.0);
        assert!(matches!(dup, Err(Error::Config(m)) if m.contains("duplicate")));
        let twice = ShiftConfig::new(vec![1.0, 0.5], vec![0.3, -0.3], c(0.0, 0.0), 0.0);
        assert!(matches!(twice, Err(Error::Config(m)) if m.contains("more than once")));
        let zero = ShiftConfig::new(vec![1.0, 0.0], vec![0.3, 0.1], c(0.0, 0.0), 0.0);
        assert!(matches!(zero, Err(Error::Config(_))));
        let outside = ShiftConfig::new(vec![1.0], vec![0.0], c(2.0, 2.0), 0.0);
        assert!(matches!(outside, Err(Error::Config(m)) if m.contains("region")));
        assert_eq!(two_term(c(0.1, 0.0)).dominant_index(), 1);
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = two_term(c(0.3, 0.1));
        assert_eq!(a.digest(), two_term(c(0.3, 0.1)).digest());
        assert_ne!(a.digest(), two_term(c(0.3, 0.2)).digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn hardy_reduction() {
        let cfg = ShiftConfig::hardy();
        let sv = c(0.7, 3.0);
        let f = f_z(sv, &cfg, &s()).unwrap().value;
        let eta = eta_completed(sv, &s()).unwrap().value;
        assert!((f - eta * 2.0).norm() < 1e-14 * eta.norm());
        assert!(f_z_critical(14.134_725, &cfg, &s()).unwrap().abs() < 1e-5);
    }

    #[test]
    fn bracket_conjugacy() {
        let (sv, z, lj) = (c(0.5, 3.0), c(0.4, 0.2), 0.7);
        let sh = sv + c(0.0, lj);
        let half = c(0.5, 0.0);
        let f1 = onef1((c(1.0, 0.0) - sh) * 0.5, half, z * z / 4.0, &s()).unwrap().value;
        let f2 =
            onef1((c(1.0, 0.0) - (sv.conj() - c(0.0, lj))) * 0.5, half, z.conj() * z.conj() / 4.0, &s()).unwrap().value;
        assert!((f2 - f1.conj()).norm() < 1e-12);
        assert!(((f1 + f2) - c(2.0 * f1.re, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn factorwise_oracles() {
        // mpmath assembled from η and hyp1f1
        let v = f_z(c(0.5, 5.0), &two_term(c(0.3, 0.1)), &s()).unwrap();
        assert!((v.value - c(-0.060_193_158_664_898_107, 0.0)).norm() < 1e-11, "{}", v.value);
        let cfg = ShiftConfig::new(vec![1.0, -0.5], vec![0.2, 0.9], c(0.5, 0.25), 0.0).unwrap();
        let v = f_z_critical(2.0, &cfg, &s()).unwrap();
        assert!((v + 0.293_293_610_903_537_7).abs() < 1e-12, "{v}");
        let full = f_z(c(0.5, 2.0), &cfg, &s()).unwrap().value;
        assert!((full.re - v).abs() < 1e-12 && full.im.abs() < 1e-12);
    }

    #[test]
    fn scaled_critical_form_keeps_sign() {
        let cfg = two_term(c(0.3, 0.1));
        for &t in &[-7.5, 3.0, 40.0] {
            let a = f_z_critical(t, &cfg, &s()).unwrap();
            let b = f_z_critical_scaled(t, &cfg, &s()).unwrap();
            assert!((b * (-FRAC_PI_4 * t.abs()).exp() - a).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn polar_and_params() {
        let p = polar_shift(0.0);
        assert!((p.r - 0.5).abs() < 1e-16 && (p.theta - PI / 2.0).abs() < 1e-16);
        let p = polar_shift(0.5);
        assert!((p.r - 0.5f64.sqrt()).abs() < 1e-16 && (p.theta - 3.0 * FRAC_PI_4).abs() < 1e-15);
        let p = polar_shift(-0.5);
        assert!((p.theta - FRAC_PI_4).abs() < 1e-15);
        let m = moment_params(c(0.0, 0.0)).unwrap();
        assert_eq!((m.u, m.v, m.w, m.beta), (1.0, 0.0, 1.0, 0.0));
        let m = moment_params(c(1.0, 0.0)).unwrap();
        assert_eq!(m.v, 0.0);
        assert!((m.u - (1.0 + 0.125f64.exp() * 0.125f64.sinh())).abs() < 1e-15);
        // mpmath
        let m = moment_params(c(0.5, 0.25)).unwrap();
        assert!((m.u - 1.022_972_405_399_401_4).abs() < 1e-15);
        assert!((m.v - 0.032_728_401_545_455_685).abs() < 1e-15);
        assert!((m.w - 1.023_495_818_494_808_5).abs() < 1e-15);
        assert!((m.beta - 0.031_982_526_131_072_11).abs() < 1e-15);
        assert!(matches!(moment_params(c(2.0, 2.0)), Ok(_) | Err(Error::Degenerate(_))));
    }

    #[test]
    fn closed_forms() {
        let v = moment_closed_form(0, &ShiftConfig::hardy()).unwrap();
        assert!((v + 4.0 * PI * FRAC_PI_8.cos()).abs() < 1e-13);
        // mpmath
        let v = moment_closed_form(1, &two_term(c(0.3, 0.1))).unwrap();
        assert!((v + 0.203_799_523_793_999_44).abs() < 1e-13, "{v}");
        // z = 0: the prefactor is exactly one
        let cfg = ShiftConfig::new(vec![1.0, -2.0], vec![0.4, -1.1], c(0.0, 0.0), 0.0).unwrap();
        let direct: f64 = cfg
            .terms()
            .map(|(cj, lj)| {
                let p = polar_shift(lj);
                -4.0 * PI * cj * (-FRAC_PI_4 * lj).exp() * p.r.powi(2) * (FRAC_PI_8 + 2.0 * p.theta).cos()
            })
            .sum();
        assert!((moment_closed_form(1, &cfg).unwrap() - direct).abs() < 1e-13);
    }

    #[test]
    fn numeric_moments() {
        let cfg = two_term(c(0.3, -0.2));
        let num = moment_numeric(0, 0.2, &cfg, &s()).unwrap().value;
        let rhs = moment_rhs(0, 0.2, &cfg, &s()).unwrap();
        // mpmath
        assert!((rhs + 8.343_542_487_811_534).abs() < 1e-10);
        assert!((num - rhs).abs() < 1e-5);
        let doubled = moment_numeric(0, 0.2, &cfg.scaled(2.0).unwrap(), &s()).unwrap().value;
        assert!((doubled - 2.0 * num).abs() < 1e-12 * num.abs().max(1.0));
        let hardy = moment_numeric(0, 0.0, &ShiftConfig::hardy(), &s()).unwrap().value;
        assert!((hardy + 5.740_099_371_335_288).abs() < 1e-8);
    }
}
