use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::scalar::ComplexSum;
use crate::settings::{ensure_finite, EvalSettings, ValueWithError};
use crate::Complex;

/// B_{2k}/(2k)! for k = 1..=14; the last entry only feeds the error estimate.
const BERNOULLI_SCALED: [f64; 14] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1.1240007277776077e21,
    -236364091.0 / 2730.0 / 6.204484017332394e23,
    8553103.0 / 6.0 / 4.0329146112660565e26,
    -23749461029.0 / 870.0 / 3.0488834461171387e29,
];
const CORRECTIONS: usize = 13;
/// Direct-sum length per unit of |Im s|.
const EM_LENGTH_FACTOR: f64 = 1.3;

/// Riemann zeta function.
pub fn zeta_c(s: Complex, settings: &EvalSettings) -> Result<ValueWithError> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s == Complex::new(1.0, 0.0) {
        return Err(Error::Pole(s));
    }
    if s.re < 0.0 {
        return zeta_reflected(s, settings);
    }
    euler_maclaurin(s, settings)
}

fn euler_maclaurin(s: Complex, settings: &EvalSettings) -> Result<ValueWithError> {
    let wanted = (EM_LENGTH_FACTOR * s.im.abs()).ceil() as usize;
    let n = wanted.max(settings.em_terms).max(2).min(settings.max_terms);
    let nf = n as f64;

    let mut acc = ComplexSum::new();
    let mut abs_mass = 0.0;
    for term in inverse_powers(s, n) {
        acc.add(term);
        abs_mass += term.norm();
    }
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp(); // N^{−s}
    acc.add(n_pow * nf / (s - 1.0));
    acc.add(n_pow * 0.5);

    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut poch = s; // s(s+1)…(s+2k−2)
    let mut npow = n_pow / nf; // N^{−s−2k+1}
    let inv_n2 = 1.0 / (nf * nf);
    let mut next = Complex::new(0.0, 0.0);
    for (k, &b) in BERNOULLI_SCALED.iter().enumerate() {
        let term = poch * npow * b;
        if k < CORRECTIONS {
            acc.add(term);
        } else {
            next = term;
        }
        let j = 2.0 * k as f64;
        poch = poch * (s + j + 1.0) * (s + j + 2.0);
        npow *= inv_n2;
    }
    let value = ensure_finite(acc.value(), "zeta")?;
    let sigma = s.re + 2.0 * CORRECTIONS as f64 + 1.0;
    let truncation = next.norm() * ((s + 2.0 * CORRECTIONS as f64 + 1.0).norm() / sigma);
    let rounding = 4.0 * f64::EPSILON * (abs_mass + value.norm() + 1.0);
    let target = settings.rel_tol * value.norm().max(f64::MIN_POSITIVE);
    if truncation > target && n == settings.max_terms {
        return Err(Error::Accuracy { estimate: truncation, target });
    }
    Ok(ValueWithError::new(value, truncation + rounding))
}

/// k^{−s} for 1 ≤ k < n. Only primes cost a transcendental evaluation;
/// composites reuse the multiplicativity k^{−s} = p^{−s}(k/p)^{−s}.
fn inverse_powers(s: Complex, n: usize) -> Vec<Complex> {
    let mut spf = vec![0u32; n];
    let mut out = vec![Complex::new(0.0, 0.0); n];
    if n > 1 {
        out[1] = Complex::new(1.0, 0.0);
    }
    for k in 2..n {
        if spf[k] == 0 {
            let lk = (k as f64).ln();
            let mag = (-s.re * lk).exp();
            let (sin, cos) = (s.im * lk).sin_cos();
            out[k] = Complex::new(mag * cos, -mag * sin);
            let mut j = k;
            while j < n {
                if spf[j] == 0 {
                    spf[j] = k as u32;
                }
                j += k;
            }
        } else {
            let p = spf[k] as usize;
            out[k] = out[p] * out[k / p];
        }
    }
    out.into_iter().skip(1).collect()
}

/// ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s), assembled in logarithms.
fn zeta_reflected(s: Complex, settings: &EvalSettings) -> Result<ValueWithError> {
    let one = Complex::new(1.0, 0.0);
    let inner = euler_maclaurin(one - s, settings)?;
    let (lg, lg_err) = ln_gamma(one - s)?;
    let half = s * 0.5;
    let i = Complex::i();
    let ln_2i = Complex::new(2f64.ln(), PI / 2.0);
    let ln_sin = if half.im >= 0.0 {
        -i * PI * half + ((i * 2.0 * PI * half).exp() - 1.0).ln() - ln_2i
    } else {
        i * PI * half + (one - (-i * 2.0 * PI * half).exp()).ln() - ln_2i
    };
    if half.im == 0.0 && half.re == half.re.round() {
        // Trivial zeros at the negative even integers.
        return Ok(ValueWithError::new(Complex::new(0.0, 0.0), 0.0));
    }
    let log_factor = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_sin + lg;
    if log_factor.re > f64::MAX.ln() {
        return Err(Error::Overflow("zeta"));
    }
    let factor = log_factor.exp();
    let value = ensure_finite(factor * inner.value, "zeta")?;
    let log_err = lg_err + 8.0 * f64::EPSILON * (log_factor.norm() + 1.0);
    let err = factor.norm() * inner.abs_err_est + value.norm() * log_err;
    Ok(ValueWithError::new(value, err))
}
