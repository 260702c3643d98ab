//! Truncated formal power series with exact coefficient arithmetic.
//!
//! A `PowerSeries` holds coefficients up to a fixed truncation order and
//! supports ring operations plus division and square root, all exact when
//! the scalar type is exact.  The walk-specific generating functions live
//! here too:
//!
//! ```text
//! P0(z)    = sum_k C(2k, k) (z/2)^(2k) = 1/sqrt(1 - z^2)
//! delta(z) = 1/(P0(z)(1 - z))          new-site probability per step
//! Delta(z) = 1/(P0(z)(1 - z)^2)        expected number of distinct sites
//! ```
//!
//! `big_delta_series` evaluates Delta both through the reciprocal identity
//! above and through the closed form sqrt(1 - z^2)/(1 - z)^2, and insists
//! the two agree coefficient by coefficient.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::combinatorics::return_probability;
use crate::scalar::FieldScalar;
use crate::{Error, Result};

/// A power series truncated after the coefficient of `z^order`.
///
/// The coefficient vector always has length `order + 1`; the constant term
/// sits at index 0.  Binary operations truncate to the shorter operand.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: FieldScalar> PowerSeries<T> {
    /// Wraps a coefficient vector, lowest order first.
    ///
    /// Panics when `coeffs` is empty: a series needs at least its constant
    /// term.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs a constant term");
        PowerSeries { coeffs }
    }

    /// The zero series truncated at `order`.
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    /// The constant series 1 truncated at `order`.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    /// The polynomial 1 - z truncated at `order`.
    pub fn one_minus_z(order: usize) -> Self {
        let mut s = Self::one(order);
        if order >= 1 {
            s.coeffs[1] = -T::one();
        }
        s
    }

    /// The geometric series 1/(1 - z): every coefficient is 1.
    pub fn geometric(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![T::one(); order + 1],
        }
    }

    /// Truncation order; coefficients of `z^k` are available for `k <= order`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The coefficient of `z^k`, or `None` beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k)
    }

    /// All retained coefficients, lowest order first.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// A copy truncated to a (possibly lower) order.
    pub fn truncated(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        PowerSeries {
            coeffs: self.coeffs[..=keep].to_vec(),
        }
    }

    /// Long division of series.  The divisor must have a nonzero constant
    /// term, otherwise the quotient is not a power series.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let order = self.order().min(rhs.order());
        let mut q: Vec<T> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for k in 0..n {
                acc = acc - q[k].clone() * rhs.coeffs[n - k].clone();
            }
            q.push(acc / rhs.coeffs[0].clone());
        }
        Ok(PowerSeries { coeffs: q })
    }
}

impl<T: FieldScalar + fmt::Display> PowerSeries<T> {
    /// Square root of a series whose constant term is exactly 1.
    ///
    /// With s = sqrt(a) and s_0 = 1, comparing coefficients of z^n in
    /// s * s = a gives
    ///
    /// ```text
    /// s_n = (a_n - sum_{k=1}^{n-1} s_k s_{n-k}) / 2
    /// ```
    ///
    /// which stays inside the coefficient field.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SqrtConstantTerm(self.coeffs[0].to_string()));
        }
        let two = T::one() + T::one();
        let mut s: Vec<T> = Vec::with_capacity(self.coeffs.len());
        s.push(T::one());
        for n in 1..self.coeffs.len() {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                acc = acc - s[k].clone() * s[n - k].clone();
            }
            s.push(acc / two.clone());
        }
        Ok(PowerSeries { coeffs: s })
    }
}

impl<T: FieldScalar> Add for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn add(self, rhs: Self) -> PowerSeries<T> {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
            .collect();
        PowerSeries { coeffs }
    }
}

impl<T: FieldScalar> Sub for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn sub(self, rhs: Self) -> PowerSeries<T> {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
            .collect();
        PowerSeries { coeffs }
    }
}

impl<T: FieldScalar> Mul for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn mul(self, rhs: Self) -> PowerSeries<T> {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![T::zero(); order + 1];
        for (n, c) in coeffs.iter_mut().enumerate() {
            for k in 0..=n {
                *c = c.clone() + self.coeffs[k].clone() * rhs.coeffs[n - k].clone();
            }
        }
        PowerSeries { coeffs }
    }
}

/// Generating function of the return probabilities,
/// P0(z) = 1/sqrt(1 - z^2).
///
/// The coefficient of z^(2k) is C(2k, k)/4^k, the probability that a walk
/// sits at its starting site after 2k steps; odd coefficients vanish.
pub fn p0_series(order: usize) -> PowerSeries<crate::Rational> {
    let coeffs = (0..=order)
        .map(|n| {
            if n % 2 == 0 {
                return_probability(n as u32 / 2).to_rational()
            } else {
                crate::Rational::zero()
            }
        })
        .collect();
    PowerSeries::from_coeffs(coeffs)
}

/// Generating function of the new-site probabilities,
/// delta(z) = 1/(P0(z)(1 - z)).
///
/// The coefficient of z^n is the probability that step n lands on a site
/// the walk has never visited before.
pub fn delta_series(order: usize) -> Result<PowerSeries<crate::Rational>> {
    let denom = &p0_series(order) * &PowerSeries::one_minus_z(order);
    PowerSeries::one(order).div(&denom)
}

/// Generating function of the expected range,
/// Delta(z) = 1/(P0(z)(1 - z)^2) = sqrt(1 - z^2)/(1 - z)^2.
///
/// The coefficient of z^n is the expected number of distinct sites visited
/// in the first n steps.  Both expressions above are evaluated and must
/// agree; a mismatch would mean a defect in the series arithmetic.
pub fn big_delta_series(order: usize) -> Result<PowerSeries<crate::Rational>> {
    let one_minus_z = PowerSeries::one_minus_z(order);
    let denom = &(&p0_series(order) * &one_minus_z) * &one_minus_z;
    let structural = PowerSeries::one(order).div(&denom)?;

    let mut one_minus_z2 = PowerSeries::<crate::Rational>::one(order);
    if order >= 2 {
        one_minus_z2 = &one_minus_z2 - &monomial(order, 2);
    }
    let closed = one_minus_z2.sqrt()?.div(&one_minus_z)?.div(&one_minus_z)?;

    assert_eq!(
        structural, closed,
        "range generating function routes disagree"
    );
    Ok(structural)
}

fn monomial(order: usize, degree: usize) -> PowerSeries<crate::Rational> {
    let mut coeffs = vec![crate::Rational::zero(); order + 1];
    coeffs[degree] = crate::Rational::one();
    PowerSeries::from_coeffs(coeffs)
}
