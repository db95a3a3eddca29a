//! The β parameter and the classes of β each analysis accepts.

use std::fmt;

use rug::{Complex, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaClass {
    /// Real and strictly greater than one.
    RealGt1,
    /// Exactly one.
    RealEq1,
    /// Any other nonzero value, real or complex.
    ComplexNonzero,
}

impl fmt::Display for BetaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetaClass::RealGt1 => "real_gt1",
            BetaClass::RealEq1 => "real_eq1",
            BetaClass::ComplexNonzero => "complex_nonzero",
        })
    }
}

/// A nonzero β with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaParam {
    re: Rational,
    im: Rational,
}

impl BetaParam {
    pub fn real(value: Rational) -> Result<Self> {
        Self::complex(value, Rational::new())
    }

    pub fn complex(re: Rational, im: Rational) -> Result<Self> {
        if re == 0 && im == 0 {
            return Err(Error::InvalidParameter("beta must be nonzero".into()));
        }
        Ok(BetaParam { re, im })
    }

    /// Accepts `"p/q"`, decimal literals, and complex values written as
    /// `"a+bi"`, `"a-bi"` or `"bi"` with rational or decimal parts.
    pub fn parse(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix('i') else {
            return Self::real(parse_rational(&s)?);
        };
        // Split at the last sign that is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (parse_rational(&body[..k])?, parse_imag(&body[k..], input)?),
            None => (Rational::new(), parse_imag(body, input)?),
        };
        Self::complex(re, im)
    }

    pub fn class(&self) -> BetaClass {
        if self.im != 0 {
            BetaClass::ComplexNonzero
        } else if self.re == 1 {
            BetaClass::RealEq1
        } else if self.re > 1 {
            BetaClass::RealGt1
        } else {
            BetaClass::ComplexNonzero
        }
    }

    /// Fails with [`Error::UnsupportedBeta`] unless β belongs to one of `accepted`.
    pub fn require(&self, feature: &'static str, accepted: &[BetaClass]) -> Result<()> {
        let class = self.class();
        if accepted.contains(&class) {
            Ok(())
        } else {
            Err(Error::UnsupportedBeta {
                feature,
                beta: self.to_string(),
                class,
            })
        }
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    /// The exact value when β is real.
    pub fn as_real(&self) -> Option<&Rational> {
        self.is_real().then_some(&self.re)
    }

    pub(crate) fn expect_real(&self, feature: &'static str) -> Result<&Rational> {
        self.as_real().ok_or_else(|| Error::UnsupportedBeta {
            feature,
            beta: self.to_string(),
            class: self.class(),
        })
    }

    /// |β| ≥ 1, decided exactly.
    pub fn modulus_at_least_one(&self) -> bool {
        Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref()) >= 1
    }

    pub fn to_complex(&self, bits: u32) -> Complex {
        Complex::with_val(bits, (&self.re, &self.im))
    }

    /// `[β^-1, β^-2, …, β^-n]` exactly, for real β.
    pub fn inverse_powers_exact(&self, n: usize) -> Result<Vec<Rational>> {
        let beta = self.expect_real("exact arithmetic")?;
        let inv = Rational::from(beta.recip_ref());
        let mut term = Rational::from(1);
        Ok((0..n)
            .map(|_| {
                term *= &inv;
                term.clone()
            })
            .collect())
    }

    /// `[β^-1, …, β^-n]` at `bits` of precision.
    ///
    /// Real β goes through the exact powers; complex β is raised by repeated
    /// multiplication at a guarded precision so the result is accurate to
    /// roughly `bits`.
    pub fn inverse_powers(&self, n: usize, bits: u32) -> Vec<Complex> {
        if let Some(beta) = self.as_real() {
            let inv = Rational::from(beta.recip_ref());
            let mut term = Rational::from(1);
            return (0..n)
                .map(|_| {
                    term *= &inv;
                    Complex::with_val(bits, &term)
                })
                .collect();
        }
        let guard = bits + 32 + usize::BITS - n.leading_zeros();
        let mut inv = self.to_complex(guard);
        inv.recip_mut();
        let mut term = Complex::with_val(guard, 1);
        (0..n)
            .map(|_| {
                term *= &inv;
                Complex::with_val(bits, &term)
            })
            .collect()
    }
}

fn parse_imag(part: &str, input: &str) -> Result<Rational> {
    match part {
        "" | "+" => Ok(Rational::from(1)),
        "-" => Ok(Rational::from(-1)),
        other => parse_rational(other).map_err(|_| Error::Parse {
            input: input.to_string(),
            reason: "malformed imaginary part".into(),
        }),
    }
}

impl fmt::Display for BetaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else if self.im < 0 {
            write!(f, "{}-{}i", self.re, Rational::from(-&self.im))
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl std::str::FromStr for BetaParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BetaParam::parse(s)
    }
}
