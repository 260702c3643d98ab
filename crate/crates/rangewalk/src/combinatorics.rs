//! Exact walk combinatorics and the factorial approximations behind the
//! large-n analysis.
//!
//! For a simple walk of n steps, the probability of standing at site r is
//! `C(n, (n+r)/2) / 2^n` when n and r share parity and |r| <= n, else 0.
//! The return probability after 2k steps is the central case
//! `C(2k, k) / 4^k`.

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact binomial coefficient; 0 outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact factorial.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Probability that an n-step simple walk ends at site r.
pub fn site_probability(n: u32, r: i64) -> Dyadic {
    let n64 = n as i64;
    if r.abs() > n64 || (n64 + r) % 2 != 0 {
        return Dyadic::zero();
    }
    Dyadic::new(binomial(n as u64, (n64 + r) / 2), n)
}

/// Probability that a simple walk is back at the origin after 2k steps.
pub fn return_probability(k: u32) -> Dyadic {
    Dyadic::new(binomial(2 * k as u64, k as i64), 2 * k)
}

/// How many correction terms of an asymptotic expansion to keep.
///
/// `Leading` keeps only the dominant term; `FirstCorrection` adds the 1/n
/// term; `SecondCorrection` adds the 1/n^2 term as well. The same orders
/// apply to [`stirling_factorial`], [`gamma_ratio_estimate`], and the range
/// expansions in [`crate::asymptotics`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxOrder {
    Leading,
    FirstCorrection,
    SecondCorrection,
}

impl ApproxOrder {
    /// Maps 0, 1, 2 to the corresponding order.
    pub fn from_index(index: u32) -> Result<Self> {
        match index {
            0 => Ok(ApproxOrder::Leading),
            1 => Ok(ApproxOrder::FirstCorrection),
            2 => Ok(ApproxOrder::SecondCorrection),
            other => Err(Error::BadOrder(other)),
        }
    }
}

/// Stirling approximation to n!:
/// `sqrt(2 pi n) (n/e)^n (1 + 1/(12n) + 1/(288 n^2))`, truncated per order.
///
/// Like n! itself, the value overflows `f64` to infinity near n = 171; the
/// correction factor stays accurate for every n the type can express.
pub fn stirling_factorial(n: u32, order: ApproxOrder) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroHorizon);
    }
    let x = n as f64;
    let leading = (2.0 * std::f64::consts::PI * x).sqrt() * (x / std::f64::consts::E).powf(x);
    let correction = match order {
        ApproxOrder::Leading => 1.0,
        ApproxOrder::FirstCorrection => 1.0 + 1.0 / (12.0 * x),
        ApproxOrder::SecondCorrection => 1.0 + 1.0 / (12.0 * x) + 1.0 / (288.0 * x * x),
    };
    Ok(leading * correction)
}

/// Asymptotic estimate of `Gamma(n + a) / n!`:
/// `n^(a-1) (1 + a(a-1)/(2n) + a(a-1)(a-2)(3a-1)/(24 n^2))`, truncated per order.
pub fn gamma_ratio_estimate(n: u32, a: f64, order: ApproxOrder) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroHorizon);
    }
    let x = n as f64;
    let leading = x.powf(a - 1.0);
    let c1 = a * (a - 1.0) / 2.0;
    let c2 = a * (a - 1.0) * (a - 2.0) * (3.0 * a - 1.0) / 24.0;
    let correction = match order {
        ApproxOrder::Leading => 1.0,
        ApproxOrder::FirstCorrection => 1.0 + c1 / x,
        ApproxOrder::SecondCorrection => 1.0 + c1 / x + c2 / (x * x),
    };
    Ok(leading * correction)
}
