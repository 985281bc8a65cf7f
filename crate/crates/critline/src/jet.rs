//! Truncated Taylor series ("jets") for exact derivatives of analytic expressions.
//!
//! A `Jet<N>` stores the first `N` Taylor coefficients of a function of one
//! variable about a point. Arithmetic and elementary functions propagate the
//! coefficients exactly (up to rounding), so running a series evaluator on jets
//! yields term-wise analytic derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::Complex;

/// Operations needed to run the theta-series evaluators on either plain values or jets.
pub trait Analytic:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<Complex, Output = Self>
    + Sub<Complex, Output = Self>
    + Mul<Complex, Output = Self>
{
    fn constant(c: Complex) -> Self;
    fn value(&self) -> Complex;
    /// Largest coefficient modulus; equals `|value|` for plain numbers.
    fn magnitude(&self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
}

impl Analytic for Complex {
    fn constant(c: Complex) -> Self {
        c
    }
    fn value(&self) -> Complex {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn exp(self) -> Self {
        Complex::exp(self)
    }
    fn ln(self) -> Self {
        Complex::ln(self)
    }
    fn sqrt(self) -> Self {
        Complex::sqrt(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize> {
    c: [Complex; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(v: Complex) -> Self {
        let mut c = [Complex::new(0.0, 0.0); N];
        c[0] = v;
        Self { c }
    }

    /// The independent variable expanded about `x0`.
    pub fn variable(x0: Complex) -> Self {
        let mut j = Self::constant(x0);
        if N > 1 {
            j.c[1] = Complex::new(1.0, 0.0);
        }
        j
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.c[k]
    }

    /// The k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> Complex {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for k in 0..N {
            self.c[k] = -self.c[k];
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [Complex::new(0.0, 0.0); N];
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..=k {
                *o += self.c[i] * rhs.c[k - i];
            }
        }
        Self { c: out }
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let mut q = [Complex::new(0.0, 0.0); N];
        let inv = rhs.c[0].inv();
        for k in 0..N {
            let mut acc = self.c[k];
            for i in 1..=k {
                acc -= rhs.c[i] * q[k - i];
            }
            q[k] = acc * inv;
        }
        Self { c: q }
    }
}

impl<const N: usize> Add<Complex> for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Complex) -> Self {
        self.c[0] += rhs;
        self
    }
}

impl<const N: usize> Sub<Complex> for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: Complex) -> Self {
        self.c[0] -= rhs;
        self
    }
}

impl<const N: usize> Mul<Complex> for Jet<N> {
    type Output = Self;
    fn mul(mut self, rhs: Complex) -> Self {
        for k in 0..N {
            self.c[k] *= rhs;
        }
        self
    }
}

impl<const N: usize> Analytic for Jet<N> {
    fn constant(c: Complex) -> Self {
        Jet::constant(c)
    }

    fn value(&self) -> Complex {
        self.c[0]
    }

    fn magnitude(&self) -> f64 {
        self.c.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn exp(self) -> Self {
        let mut e = [Complex::new(0.0, 0.0); N];
        e[0] = self.c[0].exp();
        for k in 1..N {
            let mut acc = Complex::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.c[j] * e[k - j] * j as f64;
            }
            e[k] = acc / k as f64;
        }
        Self { c: e }
    }

    fn ln(self) -> Self {
        let mut l = [Complex::new(0.0, 0.0); N];
        l[0] = self.c[0].ln();
        let inv = self.c[0].inv();
        for k in 1..N {
            let mut acc = Complex::new(0.0, 0.0);
            for (j, lj) in l.iter().enumerate().take(k).skip(1) {
                acc += *lj * self.c[k - j] * j as f64;
            }
            l[k] = (self.c[k] - acc / k as f64) * inv;
        }
        Self { c: l }
    }

    fn sqrt(self) -> Self {
        let mut s = [Complex::new(0.0, 0.0); N];
        s[0] = self.c[0].sqrt();
        let inv = (s[0] * 2.0).inv();
        for k in 1..N {
            let mut acc = Complex::new(0.0, 0.0);
            for j in 1..k {
                acc += s[j] * s[k - j];
            }
            s[k] = (self.c[k] - acc) * inv;
        }
        Self { c: s }
    }
}
