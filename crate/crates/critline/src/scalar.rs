//! Scalar abstraction for the precision-agnostic parts of the library.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex as C;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable by the quadrature, summation and root-finding code.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Neumaier's improved Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> NeumaierSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), comp: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> FromIterator<T> for NeumaierSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of complex numbers, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum<T> {
    re: NeumaierSum<T>,
    im: NeumaierSum<T>,
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self { re: NeumaierSum::new(), im: NeumaierSum::new() }
    }

    pub fn add(&mut self, z: C<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> C<T> {
        C::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of a slice.
pub fn neumaier_sum<T: Real>(xs: &[T]) -> T {
    xs.iter().copied().collect::<NeumaierSum<T>>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_lost_bits() {
        let xs = [1.0f64, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(&xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn works_in_single_precision() {
        let xs = vec![0.1f32; 10_000];
        let err_plain = (xs.iter().sum::<f32>() - 1000.0).abs();
        let err_comp = (neumaier_sum(&xs) - 1000.0).abs();
        assert!(err_comp < 1e-3);
        assert!(err_comp < err_plain);
    }

    #[test]
    fn complex_sum_is_componentwise() {
        let mut s = ComplexSum::<f64>::new();
        s.add(C::new(1e16, -1.0));
        s.add(C::new(1.0, 1e16));
        s.add(C::new(-1e16, -1e16));
        assert_eq!(s.value(), C::new(1.0, -1.0));
    }
}
