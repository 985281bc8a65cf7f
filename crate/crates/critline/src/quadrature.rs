//! Globally adaptive Gauss–Kronrod (7/15) quadrature, generic over the scalar.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex as C;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Values that can be integrated: real or complex over the same scalar.
pub trait QuadValue<T: Real>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> T;
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn norm(&self) -> T {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for C<T> {
    fn zero() -> Self {
        C::new(T::zero(), T::zero())
    }
    fn norm(&self) -> T {
        C::norm(*self)
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    /// Relative to |integral|.
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Number of equal panels the interval starts with.
    pub initial_panels: usize,
    /// Relative accuracy of individual integrand values, added to every panel error.
    pub integrand_rel_err: T,
}

impl<T: Real> QuadOptions<T> {
    pub fn absolute(abs_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol: T::zero(),
            max_subdivisions: 200_000,
            initial_panels: 1,
            integrand_rel_err: T::epsilon() * T::lit(16.0),
        }
    }

    pub fn with_panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<T, V> {
    pub value: V,
    pub abs_err_est: T,
    pub evaluations: usize,
    pub subintervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T, V> {
    a: T,
    b: T,
    value: V,
    err: T,
    floor: T,
}

impl<T: Real, V> Panel<T, V> {
    fn improvable(&self) -> T {
        self.err - self.floor
    }
}

struct Ranked<T, V>(Panel<T, V>);

impl<T: Real, V> PartialEq for Ranked<T, V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real, V> Eq for Ranked<T, V> {}
impl<T: Real, V> PartialOrd for Ranked<T, V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real, V> Ord for Ranked<T, V> {
    // Largest improvable error first; ties go to the leftmost panel.
    fn cmp(&self, other: &Self) -> Ordering {
        let (x, y) = (self.0.improvable(), other.0.improvable());
        x.partial_cmp(&y)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.0.a.partial_cmp(&self.0.a).unwrap_or(Ordering::Equal))
    }
}

fn gk15<T, V, F>(f: &mut F, a: T, b: T, opts: &QuadOptions<T>) -> Result<Panel<T, V>>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> Result<V>,
{
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let mut fv = [V::zero(); 15];
    fv[7] = f(center)?;
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        fv[j] = f(center - dx)?;
        fv[14 - j] = f(center + dx)?;
    }
    let mut kron = V::zero();
    let mut gauss = V::zero();
    let mut resabs = T::zero();
    for j in 0..7 {
        let w = T::lit(WGK[j]);
        kron = kron + (fv[j] + fv[14 - j]) * w;
        resabs = resabs + (fv[j].norm() + fv[14 - j].norm()) * w;
        if j % 2 == 1 {
            gauss = gauss + (fv[j] + fv[14 - j]) * T::lit(WG[j / 2]);
        }
    }
    kron = kron + fv[7] * T::lit(WGK[7]);
    gauss = gauss + fv[7] * T::lit(WG[3]);
    resabs = resabs + fv[7].norm() * T::lit(WGK[7]);
    let mean = kron * T::lit(0.5);
    let mut resasc = T::lit(WGK[7]) * (fv[7] - mean).norm();
    for j in 0..7 {
        resasc = resasc + T::lit(WGK[j]) * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
    }
    let h = half.abs();
    let (kron, gauss, resabs, resasc) = (kron * half, gauss * half, resabs * h, resasc * h);
    // QUADPACK's error heuristic.
    let mut err = (kron - gauss).norm();
    if resasc > T::zero() && err > T::zero() {
        let r = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = resasc * r.min(T::one());
    }
    let floor = T::lit(50.0) * T::epsilon() * resabs + opts.integrand_rel_err * resabs;
    let err = err.max(floor);
    Ok(Panel { a, b, value: kron, err, floor })
}

/// ∫_a^b f(t) dt.
///
/// The effective tolerance is max(abs_tol, rel_tol·|I|, roundoff floor), where
/// the floor is what the integrand's own magnitude and accuracy permit.
/// Refinement bisects the panel with the largest improvable error (ties to
/// the left), so results are deterministic.
pub fn integrate<T, V, F>(mut f: F, a: T, b: T, opts: &QuadOptions<T>) -> Result<Integral<T, V>>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> Result<V>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Parameter("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(Integral { value: V::zero(), abs_err_est: T::zero(), evaluations: 0, subintervals: 0 });
    }
    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / T::count(n0);
    let mut heap = BinaryHeap::with_capacity(2 * n0);
    let mut evaluations = 0usize;
    let (mut total, mut err_sum, mut floor_sum) = (V::zero(), T::zero(), T::zero());
    for i in 0..n0 {
        let lo = a + width * T::count(i);
        let hi = if i + 1 == n0 { b } else { a + width * T::count(i + 1) };
        let p = gk15(&mut f, lo, hi, opts)?;
        evaluations += 15;
        total = total + p.value;
        err_sum = err_sum + p.err;
        floor_sum = floor_sum + p.floor;
        heap.push(Ranked(p));
    }
    let mut splits = 0usize;
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm()).max(floor_sum);
        if err_sum <= tol {
            break;
        }
        if splits >= opts.max_subdivisions {
            return Err(Error::Tolerance {
                estimate: err_sum.to_f64().unwrap_or(f64::INFINITY),
                tolerance: tol.to_f64().unwrap_or(0.0),
            });
        }
        let Ranked(p) = heap.pop().expect("non-empty panel set");
        if p.improvable() <= T::zero() {
            heap.push(Ranked(p));
            break;
        }
        let mid = (p.a + p.b) * T::lit(0.5);
        total = total - p.value;
        err_sum = err_sum - p.err;
        floor_sum = floor_sum - p.floor;
        if !(p.a < mid && mid < p.b) {
            // Cannot split further: the panel's error becomes part of the floor.
            let stuck = Panel { floor: p.err, ..p };
            total = total + stuck.value;
            err_sum = err_sum + stuck.err;
            floor_sum = floor_sum + stuck.floor;
            heap.push(Ranked(stuck));
            continue;
        }
        for (lo, hi) in [(p.a, mid), (mid, p.b)] {
            let q = gk15(&mut f, lo, hi, opts)?;
            evaluations += 15;
            total = total + q.value;
            err_sum = err_sum + q.err;
            floor_sum = floor_sum + q.floor;
            heap.push(Ranked(q));
        }
        splits += 1;
    }
    // Deterministic final assembly in left-to-right order.
    let mut panels: Vec<Panel<T, V>> = heap.into_iter().map(|r| r.0).collect();
    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let value = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
    let abs_err_est = panels.iter().fold(T::zero(), |acc, p| acc + p.err);
    Ok(Integral { value, abs_err_est, evaluations, subintervals: panels.len() })
}
