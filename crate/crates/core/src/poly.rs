//! Dense univariate polynomials, coefficients stored low → high.

use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

pub trait Coefficient: Clone {
    fn is_zero_coeff(&self) -> bool;
}

impl Coefficient for Rational {
    fn is_zero_coeff(&self) -> bool {
        *self == 0
    }
}

impl Coefficient for Integer {
    fn is_zero_coeff(&self) -> bool {
        *self == 0
    }
}

impl Coefficient for Complex {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
}

/// Polynomial `c_0 + c_1 t + … + c_d t^d` with `c_d ≠ 0`.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

/// Exact rational polynomial.
pub type ExactPoly = Poly<Rational>;
/// Polynomial with complex coefficients at a working precision.
pub type PrecPoly = Poly<Complex>;

impl<C: Coefficient> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(Coefficient::is_zero_coeff) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    /// `t^d p(1/t)`: the coefficient vector reversed. Its roots are the
    /// reciprocals of the roots of `self`.
    pub fn reverse(&self) -> Result<Self> {
        match self.coeffs.first() {
            Some(c) if !c.is_zero_coeff() => {
                let mut coeffs = self.coeffs.clone();
                coeffs.reverse();
                Ok(Poly { coeffs })
            }
            _ => Err(Error::ZeroRoot),
        }
    }
}

impl Poly<Rational> {
    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1 t`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, t: &Complex) -> Complex {
        let bits = t.prec().0.max(t.prec().1);
        let mut acc = Complex::with_val(bits, 0);
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    pub fn to_complex(&self, bits: u32) -> Poly<Complex> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| Complex::with_val(bits, c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Poly::new(self.coeffs.iter().map(|c| Rational::from(c * k)).collect())
    }
}

impl Poly<Complex> {
    pub fn precision(&self) -> u32 {
        self.coeffs.first().map_or(0, |c| c.prec().0)
    }

    /// Horner evaluation at the precision of `t`.
    pub fn eval(&self, t: &Complex) -> Complex {
        let mut acc = Complex::with_val(t.prec(), 0);
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    /// `(p(t), p'(t))` by a single Horner pass.
    pub fn eval_with_derivative(&self, t: &Complex) -> (Complex, Complex) {
        let mut p = Complex::with_val(t.prec(), 0);
        let mut dp = Complex::with_val(t.prec(), 0);
        for c in self.coeffs.iter().rev() {
            dp *= t;
            dp += &p;
            p *= t;
            p += c;
        }
        (p, dp)
    }

    /// `Σ |c_k| |t|^k`, the scale against which `|p(t)|` is a backward error.
    pub fn abs_eval(&self, t: &Complex) -> Float {
        let bits = t.prec().0;
        let r = Float::with_val(bits, t.abs_ref());
        let mut acc = Float::with_val(bits, 0);
        for c in self.coeffs.iter().rev() {
            acc *= &r;
            acc += Float::with_val(bits, c.abs_ref());
        }
        acc
    }
}

impl<'a> Add<&'a Poly<Rational>> for &'a Poly<Rational> {
    type Output = Poly<Rational>;

    fn add(self, rhs: Self) -> Poly<Rational> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly<Rational>> for &'a Poly<Rational> {
    type Output = Poly<Rational>;

    fn sub(self, rhs: Self) -> Poly<Rational> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly<Rational>> for &'a Poly<Rational> {
    type Output = Poly<Rational>;

    fn mul(self, rhs: Self) -> Poly<Rational> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly<Rational> {
    type Output = Poly<Rational>;

    fn neg(self) -> Poly<Rational> {
        Poly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}
