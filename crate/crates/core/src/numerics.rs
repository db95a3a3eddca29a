//! Scalar arithmetic shared by every other module.
//!
//! Exact values are [`Rational`]s (always in lowest terms with a positive
//! denominator). Approximate values are MPFR-backed [`Float`] and
//! [`Complex`] numbers that carry their own precision, so there is no global
//! precision state: a computation picks its working precision through a
//! [`Precision`] handle and builds every intermediate value with it.

use std::cmp::Ordering;

use rug::ops::PowAssign;

pub use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

pub type ExactRational = Rational;
pub type PrecReal = Float;
pub type PrecComplex = Complex;

/// Smallest accepted working precision, in bits.
pub const MIN_PRECISION: u32 = 64;
/// Working precision used when the caller does not ask for one.
pub const DEFAULT_PRECISION: u32 = 256;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in bits; never below [`MIN_PRECISION`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_PRECISION {
            return Err(Error::Precision(bits));
        }
        Ok(Precision(bits))
    }

    /// Enough bits to represent `digits` decimal digits plus `guard` extra bits.
    pub fn for_digits(digits: u32, guard: u32) -> Self {
        Precision((digits_to_bits(digits) + guard).max(MIN_PRECISION))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn doubled(self) -> Self {
        Precision(self.0 * 2)
    }

    pub fn real<T>(self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.0, value)
    }

    pub fn complex<T>(self, value: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.0, value)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION)
    }
}

/// Runs `computation` with a validated working precision of `bits`.
///
/// Every value the computation builds through the handle is carried at
/// `bits` of precision; MPFR rounds each operation correctly at the
/// precision of its destination.
pub fn with_precision<T>(bits: u32, computation: impl FnOnce(Precision) -> T) -> Result<T> {
    let prec = Precision::new(bits)?;
    Ok(computation(prec))
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32
}

pub fn bits_to_digits(bits: u32) -> u32 {
    (f64::from(bits) / LOG2_10).floor() as u32
}

/// `10^-digits` at the given precision.
pub fn ten_pow_neg(digits: u32, bits: u32) -> Float {
    let mut x = Float::with_val(bits, 10);
    x.pow_assign(-i64::from(digits));
    x
}

/// Parses an exact rational from `"p/q"`, an integer, or a decimal literal
/// such as `"1.25"`, `"-.5"` or `"4.5e-3"`. Decimals are converted to the
/// exact rational they denote.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let fail = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(fail("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: Integer = num
            .trim()
            .parse()
            .map_err(|_| fail("numerator is not an integer"))?;
        let den: Integer = den
            .trim()
            .parse()
            .map_err(|_| fail("denominator is not an integer"))?;
        if den == 0 {
            return Err(fail("zero denominator"));
        }
        return Ok(Rational::from((num, den)));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| fail("malformed exponent"))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(fail("unexpected character"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(digits.parse::<Integer>().map_err(|_| fail("no digits"))?);
    let shift = exponent - frac_part.len() as i64;
    let scale = Integer::from(Integer::u_pow_u(
        10,
        u32::try_from(shift.unsigned_abs()).map_err(|_| fail("exponent too large"))?,
    ));
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Formats a float with `digits` significant decimal digits in positional
/// notation, falling back to scientific notation for very large or very
/// small magnitudes.
pub fn format_float(x: &Float, digits: usize) -> String {
    let digits = digits.max(1);
    let (negative, mantissa, exp) = x.to_sign_string_exp(10, Some(digits));
    let Some(exp) = exp else {
        // zero, infinity or NaN
        return match mantissa.as_str() {
            "0" => "0".to_string(),
            other => format!("{}{}", if negative { "-" } else { "" }, other.trim_matches('@')),
        };
    };
    let sign = if negative { "-" } else { "" };
    let len = mantissa.len() as i32;
    if (-24..=64).contains(&exp) {
        if exp <= 0 {
            format!("{sign}0.{}{mantissa}", "0".repeat((-exp) as usize))
        } else if exp >= len {
            format!("{sign}{mantissa}{}", "0".repeat((exp - len) as usize))
        } else {
            let (int, frac) = mantissa.split_at(exp as usize);
            format!("{sign}{int}.{frac}")
        }
    } else {
        let (lead, rest) = mantissa.split_at(1);
        if rest.is_empty() {
            format!("{sign}{lead}e{}", exp - 1)
        } else {
            format!("{sign}{lead}.{rest}e{}", exp - 1)
        }
    }
}

/// Formats a complex number as `re+imi` / `re-imi`.
pub fn format_complex(z: &Complex, digits: usize) -> String {
    let re = format_float(z.real(), digits);
    let im = format_float(z.imag(), digits);
    match im.strip_prefix('-') {
        Some(abs) => format!("{re}-{abs}i"),
        None => format!("{re}+{im}i"),
    }
}

/// Number of leading significant decimal digits on which `value` and
/// `reference` agree, measured as `floor(-log10(|value - reference| / |reference|))`.
/// Returns `None` when the two are equal at the working precision.
pub fn agreeing_digits(value: &Float, reference: &Float) -> Option<i64> {
    let prec = value.prec().max(reference.prec());
    let mut diff = Float::with_val(prec, value - reference);
    if diff.is_zero() {
        return None;
    }
    diff /= reference;
    diff.abs_mut();
    diff.log10_mut();
    Some((-diff.to_f64()).floor() as i64)
}

/// Sorts complex values by principal argument, breaking ties by modulus.
pub fn cmp_arg_then_modulus(a: &Complex, b: &Complex) -> Ordering {
    let arg_a = Float::with_val(a.prec().0, a.arg_ref());
    let arg_b = Float::with_val(b.prec().0, b.arg_ref());
    arg_a.total_cmp(&arg_b).then_with(|| {
        let na = Float::with_val(a.prec().0, a.norm_ref());
        let nb = Float::with_val(b.prec().0, b.norm_ref());
        na.total_cmp(&nb)
    })
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub fn to_c64(z: &Complex) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.real().to_f64(), z.imag().to_f64())
}
