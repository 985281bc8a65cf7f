use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::settings::{ensure_finite, ValueWithError};
use crate::Complex;

// Godfrey's Lanczos parameters (g = 607/128, 15 terms).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
/// Approximation error of the rational form itself.
const LANCZOS_REL: f64 = 4e-15;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(s: Complex) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// ln Γ(s) on the principal-ish branch (continuous in the upper and lower
/// half-planes) together with an absolute error estimate for the logarithm.
pub fn ln_gamma(s: Complex) -> Result<(Complex, f64)> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(s));
    }
    if s.re < 0.5 {
        // Γ(s) = π / (sin(πs) Γ(1−s)), with ln sin(πs) formed without overflow.
        let (lg, err) = ln_gamma_lanczos(Complex::new(1.0, 0.0) - s);
        let ln_sin = ln_sin_pi(s);
        let v = Complex::new(PI.ln(), 0.0) - ln_sin - lg;
        let err = err + f64::EPSILON * (ln_sin.norm() + s.norm() * PI + 1.0) * 4.0;
        return Ok((v, err));
    }
    Ok(ln_gamma_lanczos(s))
}

fn ln_gamma_lanczos(s: Complex) -> (Complex, f64) {
    let z = s - 1.0;
    let mut a = Complex::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let v = (z + 0.5) * t.ln() - t + a.ln() + LN_SQRT_2PI;
    let err = LANCZOS_REL + 4.0 * f64::EPSILON * (v.norm() + 1.0);
    (v, err)
}

/// ln sin(πs), stable for large |Im s|.
fn ln_sin_pi(s: Complex) -> Complex {
    let i = Complex::i();
    let ln_2i = Complex::new(2f64.ln(), PI / 2.0);
    if s.im >= 0.0 {
        // sin(πs) = e^{−iπs}(e^{2iπs} − 1)/(2i)
        -i * PI * s + ((i * 2.0 * PI * s).exp() - 1.0).ln() - ln_2i
    } else {
        i * PI * s + (Complex::new(1.0, 0.0) - (-i * 2.0 * PI * s).exp()).ln() - ln_2i
    }
}

/// Complex Gamma function.
pub fn gamma_c(s: Complex) -> Result<ValueWithError> {
    let (lg, err) = ln_gamma(s)?;
    if lg.re > f64::MAX.ln() {
        return Err(Error::Overflow("gamma"));
    }
    let v = ensure_finite(lg.exp(), "gamma")?;
    Ok(ValueWithError::new(v, v.norm() * err))
}
