//! Exact dyadic rationals: numbers of the form `numer / 2^exp`.
//!
//! Every probability attached to an n-step simple walk is a dyadic rational
//! with exponent at most n, so the simple-walk DP runs entirely in this type.
//! Addition aligns exponents with shifts and multiplication adds exponents;
//! no gcd is ever needed, which keeps exact mode fast at large horizons.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An exact rational whose denominator is a power of two.
///
/// Canonical form: the numerator is odd whenever `exp > 0`, and zero is
/// stored as `0 / 2^0`. Canonicalization happens in every constructor and
/// arithmetic result, so equality is plain structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numer: BigInt,
    exp: u32,
}

impl Dyadic {
    /// Builds `numer / 2^exp`, reducing to canonical form.
    pub fn new(numer: BigInt, exp: u32) -> Self {
        let mut d = Dyadic { numer, exp };
        d.canonicalize();
        d
    }

    /// The value 1/2.
    pub fn half() -> Self {
        Dyadic { numer: BigInt::one(), exp: 1 }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Dyadic { numer: n.into(), exp: 0 }
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    /// Exponent of the power-of-two denominator.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn to_rational(&self) -> crate::Rational {
        crate::Rational::new(self.numer.clone(), BigInt::one() << self.exp as u64)
    }

    pub fn to_f64(&self) -> f64 {
        crate::scalar::big_ratio_to_f64(&self.numer, &(BigInt::one() << self.exp as u64))
    }

    fn canonicalize(&mut self) {
        if self.numer.is_zero() {
            self.exp = 0;
            return;
        }
        let strip = self
            .numer
            .trailing_zeros()
            .map(|z| z.min(self.exp as u64))
            .unwrap_or(0);
        if strip > 0 {
            self.numer >>= strip;
            self.exp -= strip as u32;
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, BigInt::one() << self.exp as u64)
        }
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic { numer: BigInt::zero(), exp: 0 }
    }
    fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic { numer: BigInt::one(), exp: 0 }
    }
}

impl FromPrimitive for Dyadic {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Dyadic::from_integer(n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Dyadic::from_integer(n))
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { numer: -self.numer, exp: self.exp }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        let a = self.numer << (exp - self.exp) as u64;
        let b = rhs.numer << (exp - rhs.exp) as u64;
        Dyadic::new(a + b, exp)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(self.numer * rhs.numer, self.exp + rhs.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = &self.numer << (exp - self.exp) as u64;
        let b = &other.numer << (exp - other.exp) as u64;
        a.cmp(&b)
    }
}

impl ToPrimitive for Dyadic {
    fn to_i64(&self) -> Option<i64> {
        if self.exp == 0 {
            self.numer.to_i64()
        } else {
            None
        }
    }
    fn to_u64(&self) -> Option<u64> {
        if self.exp == 0 {
            self.numer.to_u64()
        } else {
            None
        }
    }
    fn to_f64(&self) -> Option<f64> {
        Some(Dyadic::to_f64(self))
    }
}

// Keeping unused import warnings away: `Integer` supplies `is_odd` in tests.
#[allow(unused)]
fn assert_canonical(d: &Dyadic) -> bool {
    d.numer.is_zero() && d.exp == 0 || d.exp == 0 || d.numer.is_odd()
}
