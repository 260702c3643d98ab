//! Coefficient abstraction for the exact kernels.
//!
//! The range DP and the power-series arithmetic are written once, generically,
//! and instantiated at three coefficient types:
//!
//! * [`crate::Dyadic`] for simple-walk exact mode (every mass has a power-of-two
//!   denominator, so additions are shifts instead of gcd reductions),
//! * [`crate::Rational`] for persistent-walk exact mode and the series module,
//! * `f64` for the documented float-mode DP past the exact horizon limit.

use num_bigint::{BigInt, Sign};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Ring operations required by the dynamic-programming kernels.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + FromPrimitive
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
{
}

/// Scalars that also support exact division; required by power series.
pub trait FieldScalar: Scalar + Div<Output = Self> {}

impl<T> FieldScalar for T where T: Scalar + Div<Output = Self> {}

/// Converts num/den to the nearest `f64`, correct to within an ulp even when
/// both integers are far outside the `f64` range.
///
/// The naive `num.to_f64() / den.to_f64()` overflows to `inf/inf` once either
/// side passes ~1e308; exact means at large horizons have 2^n denominators,
/// so the quotient is formed at ~64-bit precision first and rescaled.
pub fn big_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    assert!(!den.is_zero(), "denominator must be nonzero");
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let num = num.abs();
    let den = den.abs();

    // Scale so the integer quotient carries about 64 significant bits.
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let value = scale_by_pow2(q.to_f64().expect("quotient fits in f64"), -shift as i32);
    if negative {
        -value
    } else {
        value
    }
}

/// Multiplies by 2^exp without going through `powi` overflow for large |exp|.
fn scale_by_pow2(value: f64, exp: i32) -> f64 {
    // Split the exponent so each factor stays within the normal f64 range.
    let mut v = value;
    let mut e = exp;
    while e > 1000 {
        v *= (2.0f64).powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= (2.0f64).powi(-1000);
        e += 1000;
    }
    v * (2.0f64).powi(e)
}

/// Nearest-`f64` value of an arbitrary-precision rational.
pub fn rational_to_f64(r: &crate::Rational) -> f64 {
    big_ratio_to_f64(r.numer(), r.denom())
}

/// Parses an exact rational from `p/q`, decimal (`0.75`), or integer text.
pub fn parse_rational(text: &str) -> crate::Result<crate::Rational> {
    use crate::{Error, Rational};
    let s = text.trim();
    let bad = || Error::BadRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (Sign::Minus, rest),
            None => (Sign::Plus, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if !int_digits.is_empty() && !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac_part);
        let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
        if sign == Sign::Minus {
            numer = -numer;
        }
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(Rational::new(numer, denom));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Formats a nonnegative decimal with the given number of places using
/// half-up rounding (0.40425 at four places prints `0.4043`, never `0.4042`).
///
/// The standard formatter rounds half to even, which disagrees with the
/// table conventions this crate pins down, so rounding is done in integers.
pub fn format_fixed(value: f64, decimals: usize) -> String {
    assert!(value.is_finite(), "cannot format {value}");
    let negative = value < 0.0;
    let scale = 10f64.powi(decimals as i32);
    let scaled = (value.abs() * scale + 0.5).floor();
    let units = scaled as u128;
    let base = 10u128.pow(decimals as u32);
    let int_part = units / base;
    let frac_part = units % base;
    let sign = if negative && units > 0 { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0width$}", width = decimals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn big_ratio_handles_huge_operands() {
        let num = BigInt::one() << 2000u32;
        let den = (BigInt::one() << 2000u32) * BigInt::from(4);
        assert_eq!(big_ratio_to_f64(&num, &den), 0.25);
    }

    #[test]
    fn big_ratio_matches_small_fractions() {
        assert_eq!(big_ratio_to_f64(&BigInt::from(27), &BigInt::from(8)), 3.375);
        assert_eq!(big_ratio_to_f64(&BigInt::from(-1), &BigInt::from(2)), -0.5);
        assert_eq!(big_ratio_to_f64(&BigInt::from(1), &BigInt::from(-2)), -0.5);
        assert_eq!(big_ratio_to_f64(&BigInt::from(0), &BigInt::from(7)), 0.0);
    }

    #[test]
    fn parse_rational_accepts_fraction_decimal_integer() {
        let r = |s: &str| parse_rational(s).unwrap();
        assert_eq!(r("3/4"), crate::Rational::new(3.into(), 4.into()));
        assert_eq!(r("0.75"), crate::Rational::new(3.into(), 4.into()));
        assert_eq!(r(".5"), crate::Rational::new(1.into(), 2.into()));
        assert_eq!(r("-0.25"), crate::Rational::new((-1).into(), 4.into()));
        assert_eq!(r("2"), crate::Rational::from_integer(2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn format_fixed_rounds_half_up() {
        assert_eq!(format_fixed(0.40425, 4), "0.4043");
        assert_eq!(format_fixed(2.25, 1), "2.3");
        assert_eq!(format_fixed(3.375, 4), "3.3750");
        assert_eq!(format_fixed(100.0, 2), "100.00");
        assert_eq!(format_fixed(0.0, 4), "0.0000");
        assert_eq!(format_fixed(20.211544, 2), "20.21");
        assert_eq!(format_fixed(3.4963, 2), "3.50");
    }
}
