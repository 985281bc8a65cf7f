use crate::error::{Error, Result};
use crate::scalar::ComplexSum;
use crate::settings::{ensure_finite, EvalSettings, ValueWithError};
use crate::Complex;

/// Kummer's function ₁F₁(a; b; w) by its Maclaurin series.
///
/// Summation is compensated; the error estimate carries the remainder bound
/// and a cancellation term proportional to the largest partial sum.
pub fn onef1(a: Complex, b: Complex, w: Complex, settings: &EvalSettings) -> Result<ValueWithError> {
    if b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round() {
        return Err(Error::Parameter(format!("b = {b} is a nonpositive integer")));
    }
    let mut term = Complex::new(1.0, 0.0);
    let mut acc = ComplexSum::new();
    acc.add(term);
    let mut max_partial = 1.0f64;
    let mut small_run = 0;
    for n in 0..settings.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * w / ((b + nf) * (nf + 1.0));
        term *= ratio;
        acc.add(term);
        let partial = acc.value();
        max_partial = max_partial.max(partial.norm());
        let tm = term.norm();
        if tm <= settings.rel_tol * partial.norm() || tm == 0.0 {
            small_run += 1;
        } else {
            small_run = 0;
        }
        // Past the peak the ratio bound n ↦ |a+n||w|/(|b+n|(n+1)) is decreasing.
        let r_next = ((a + nf + 1.0).norm() * w.norm()) / ((b + nf + 1.0).norm() * (nf + 2.0));
        if small_run >= 2 && r_next < 0.5 {
            let value = ensure_finite(partial, "1F1")?;
            let tail = tm * r_next / (1.0 - r_next);
            let cancel = 4.0 * f64::EPSILON * max_partial;
            return Ok(ValueWithError::new(value, tail + cancel));
        }
    }
    Err(Error::Divergence(settings.max_terms))
}

/// Normalized residual of the large-parameter asymptotic
/// |₁F₁(−s; ½; z²/4) − e^{z²/8} cos(z√(s+¼))| · |s+¼|^{1/2}.
pub fn onef1_asym_residual(s: Complex, z: Complex, settings: &EvalSettings) -> Result<f64> {
    if s.norm() < 4.0 {
        return Err(Error::Domain(format!("|s| = {} is below 4", s.norm())));
    }
    let z2 = z * z;
    let f = onef1(-s, Complex::new(0.5, 0.0), z2 / 4.0, settings)?.value;
    let q = s + 0.25;
    let lead = (z2 / 8.0).exp() * (z * q.sqrt()).cos();
    Ok((f - lead).norm() * q.norm().sqrt())
}
