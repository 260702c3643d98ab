//! Exact distribution of the walk range by dynamic programming, with a
//! brute-force enumeration route used to cross-validate it.
//!
//! The DP state after k steps is `(d, w)` where `d = position - min` and
//! `w = max - min`; both are nonnegative and `d <= w <= k`. The range is
//! `Delta = w + 1`. Transitions:
//!
//! * up step:   `(d, w) -> (d + 1, max(w, d + 1))`
//! * down step: `(d, w) -> (d - 1, w)` if `d > 0`, else `(0, w + 1)`
//!
//! Persistent walks carry the last step direction alongside `(d, w)`.
//! The kernels are generic over [`Scalar`], so the same recurrence runs in
//! dyadic-rational, big-rational, and `f64` arithmetic.

use crate::combinatorics::return_probability;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::model::WalkModel;
use crate::scalar::Scalar;
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Largest horizon served in exact arithmetic. Above it the state space and
/// numerator sizes make exactness expensive; use [`float_range_distribution`].
pub const EXACT_HORIZON_LIMIT: u32 = 512;

/// Largest horizon for which all 2^n step sequences are enumerated.
pub const BRUTE_FORCE_LIMIT: u32 = 22;

/// Largest k for which [`lemma_counting_check`] enumerates 2^(2k) sequences.
pub const COUNTING_CHECK_LIMIT: u32 = 11;

/// Practical cap for the float-mode DP; memory grows as the square of this.
pub const FLOAT_HORIZON_LIMIT: u32 = 2048;

/// Probability distribution of the range `Delta_n` (distinct sites visited).
///
/// Masses are keyed by the value of `Delta`, which for an n-step walk lies
/// in `1..=n+1`. The coefficient type defaults to exact rationals; the
/// float-mode DP yields `RangeDistribution<f64>`.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeDistribution<T = Rational> {
    horizon: u32,
    mass: BTreeMap<u32, T>,
}

impl<T: Scalar> RangeDistribution<T> {
    fn new(horizon: u32, mass: BTreeMap<u32, T>) -> Self {
        RangeDistribution { horizon, mass }
    }

    /// Number of steps the distribution describes.
    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// Probability of `Delta = delta`, if in the support.
    pub fn mass_of(&self, delta: u32) -> Option<&T> {
        self.mass.get(&delta)
    }

    /// `(delta, probability)` pairs in increasing order of `delta`.
    pub fn masses(&self) -> impl Iterator<Item = (u32, &T)> {
        self.mass.iter().map(|(k, v)| (*k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.mass.keys().copied()
    }

    /// Sum of all masses; exactly one for a well-formed distribution.
    pub fn total_mass(&self) -> T {
        self.mass.values().fold(T::zero(), |acc, m| acc + m.clone())
    }

    /// Expected range `E(Delta_n)`.
    pub fn mean(&self) -> T {
        self.mass.iter().fold(T::zero(), |acc, (delta, m)| {
            acc + T::from_u32(*delta).expect("small integer") * m.clone()
        })
    }

    /// Expected span `E(max - min) = E(Delta_n) - 1`.
    pub fn span_mean(&self) -> T {
        self.mean() - T::one()
    }

    /// Variance of the range.
    pub fn variance(&self) -> T {
        let mean = self.mean();
        let second = self.mass.iter().fold(T::zero(), |acc, (delta, m)| {
            let d = T::from_u32(*delta).expect("small integer");
            acc + d.clone() * d * m.clone()
        });
        second - mean.clone() * mean
    }

    /// Applies `f` to every mass, keeping the support.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> RangeDistribution<U> {
        RangeDistribution {
            horizon: self.horizon,
            mass: self.mass.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }
}

fn idx(w: usize, d: usize) -> usize {
    w * (w + 1) / 2 + d
}

fn triangle_len(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Simple-walk DP over states `(d, w)`.
struct SimpleDp<T> {
    epoch: usize,
    cur: Vec<T>,
    next: Vec<T>,
}

impl<T: Scalar> SimpleDp<T> {
    fn new(n: u32) -> Self {
        let len = triangle_len(n as usize);
        let mut cur = vec![T::zero(); len];
        cur[idx(0, 0)] = T::one();
        SimpleDp { epoch: 0, cur, next: vec![T::zero(); len] }
    }

    fn step(&mut self, half: &T) {
        for slot in self.next.iter_mut() {
            *slot = T::zero();
        }
        for w in 0..=self.epoch {
            for d in 0..=w {
                let m = &self.cur[idx(w, d)];
                if m.is_zero() {
                    continue;
                }
                let part = m.clone() * half.clone();
                let ui = idx(w.max(d + 1), d + 1);
                self.next[ui] = std::mem::replace(&mut self.next[ui], T::zero()) + part.clone();
                let (dd, dw) = if d > 0 { (d - 1, w) } else { (0, w + 1) };
                let di = idx(dw, dd);
                self.next[di] = std::mem::replace(&mut self.next[di], T::zero()) + part;
            }
        }
        std::mem::swap(&mut self.cur, &mut self.next);
        self.epoch += 1;
    }

    fn distribution(&self) -> RangeDistribution<T> {
        let mut mass = BTreeMap::new();
        for w in 0..=self.epoch {
            let mut acc = T::zero();
            for d in 0..=w {
                acc = acc + self.cur[idx(w, d)].clone();
            }
            if !acc.is_zero() {
                mass.insert(w as u32 + 1, acc);
            }
        }
        RangeDistribution::new(self.epoch as u32, mass)
    }

    fn mean(&self) -> T {
        let mut acc = T::zero();
        for w in 0..=self.epoch {
            let mut row = T::zero();
            for d in 0..=w {
                row = row + self.cur[idx(w, d)].clone();
            }
            acc = acc + T::from_usize(w + 1).expect("small integer") * row;
        }
        acc
    }
}

const DOWN: usize = 0;
const UP: usize = 1;

/// Persistent-walk DP over states `(d, w, last step)`.
struct PersistentDp<T> {
    epoch: usize,
    cur: Vec<[T; 2]>,
    next: Vec<[T; 2]>,
}

impl<T: Scalar> PersistentDp<T> {
    /// Performs the symmetric first step immediately; valid for n >= 1.
    fn new(n: u32, half: &T) -> Self {
        let len = triangle_len(n as usize);
        let zero = || vec![[T::zero(), T::zero()]; len];
        let mut cur = zero();
        cur[idx(1, 1)][UP] = half.clone();
        cur[idx(1, 0)][DOWN] = half.clone();
        PersistentDp { epoch: 1, cur, next: zero() }
    }

    fn step(&mut self, alpha: &T, beta: &T) {
        for slot in self.next.iter_mut() {
            *slot = [T::zero(), T::zero()];
        }
        for w in 0..=self.epoch {
            for d in 0..=w {
                for last in [DOWN, UP] {
                    let m = &self.cur[idx(w, d)][last];
                    if m.is_zero() {
                        continue;
                    }
                    let (w_up, w_down) = if last == UP { (alpha, beta) } else { (beta, alpha) };
                    let up_part = m.clone() * w_up.clone();
                    if !up_part.is_zero() {
                        let ui = idx(w.max(d + 1), d + 1);
                        self.next[ui][UP] =
                            std::mem::replace(&mut self.next[ui][UP], T::zero()) + up_part;
                    }
                    let down_part = m.clone() * w_down.clone();
                    if !down_part.is_zero() {
                        let (dd, dw) = if d > 0 { (d - 1, w) } else { (0, w + 1) };
                        let di = idx(dw, dd);
                        self.next[di][DOWN] =
                            std::mem::replace(&mut self.next[di][DOWN], T::zero()) + down_part;
                    }
                }
            }
        }
        std::mem::swap(&mut self.cur, &mut self.next);
        self.epoch += 1;
    }

    fn distribution(&self) -> RangeDistribution<T> {
        let mut mass = BTreeMap::new();
        for w in 0..=self.epoch {
            let mut acc = T::zero();
            for d in 0..=w {
                acc = acc + self.cur[idx(w, d)][DOWN].clone() + self.cur[idx(w, d)][UP].clone();
            }
            if !acc.is_zero() {
                mass.insert(w as u32 + 1, acc);
            }
        }
        RangeDistribution::new(self.epoch as u32, mass)
    }

    fn mean(&self) -> T {
        let mut acc = T::zero();
        for w in 0..=self.epoch {
            let mut row = T::zero();
            for d in 0..=w {
                row = row + self.cur[idx(w, d)][DOWN].clone() + self.cur[idx(w, d)][UP].clone();
            }
            acc = acc + T::from_usize(w + 1).expect("small integer") * row;
        }
        acc
    }
}

fn point_mass<T: Scalar>(horizon: u32) -> RangeDistribution<T> {
    let mut mass = BTreeMap::new();
    mass.insert(1, T::one());
    RangeDistribution::new(horizon, mass)
}

fn check_exact_horizon(n: u32) -> Result<()> {
    if n > EXACT_HORIZON_LIMIT {
        Err(Error::HorizonTooLarge { n, limit: EXACT_HORIZON_LIMIT })
    } else {
        Ok(())
    }
}

/// Exact distribution of `Delta_n` for `n <= EXACT_HORIZON_LIMIT`.
pub fn exact_range_distribution(model: &WalkModel, n: u32) -> Result<RangeDistribution> {
    check_exact_horizon(n)?;
    match model {
        WalkModel::Simple => Ok(simple_distribution_dyadic(n).map(Dyadic::to_rational)),
        WalkModel::Persistent { alpha } => Ok(persistent_distribution_rational(alpha.clone(), n)),
    }
}

/// Simple-walk distribution in dyadic form; every mass has exponent <= n.
pub fn exact_range_distribution_dyadic(n: u32) -> Result<RangeDistribution<Dyadic>> {
    check_exact_horizon(n)?;
    Ok(simple_distribution_dyadic(n))
}

fn simple_distribution_dyadic(n: u32) -> RangeDistribution<Dyadic> {
    if n == 0 {
        return point_mass(0);
    }
    let mut dp = SimpleDp::<Dyadic>::new(n);
    let half = Dyadic::half();
    for _ in 0..n {
        dp.step(&half);
    }
    dp.distribution()
}

fn persistent_distribution_rational(alpha: Rational, n: u32) -> RangeDistribution {
    if n == 0 {
        return point_mass(0);
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let beta = Rational::one() - alpha.clone();
    let mut dp = PersistentDp::<Rational>::new(n, &half);
    for _ in 1..n {
        dp.step(&alpha, &beta);
    }
    dp.distribution()
}

/// Diagnostic hook: the persistent DP with `alpha` unchecked, so degenerate
/// values outside (0, 1) can be exercised. With `alpha = 1` the walk never
/// turns after its symmetric first step and `Delta_n = n + 1` surely.
/// Not reachable through [`WalkModel`], whose constructor enforces the open
/// interval.
pub fn persistent_distribution_unchecked(alpha: Rational, n: u32) -> Result<RangeDistribution> {
    check_exact_horizon(n)?;
    Ok(persistent_distribution_rational(alpha, n))
}

/// Float-arithmetic DP for horizons past the exact limit. Same recurrence,
/// double precision, no exactness claim: masses carry normal rounding error.
pub fn float_range_distribution(model: &WalkModel, n: u32) -> Result<RangeDistribution<f64>> {
    if n > FLOAT_HORIZON_LIMIT {
        return Err(Error::FloatHorizonTooLarge { n, limit: FLOAT_HORIZON_LIMIT });
    }
    if n == 0 {
        return Ok(point_mass(0));
    }
    match model {
        WalkModel::Simple => {
            let mut dp = SimpleDp::<f64>::new(n);
            for _ in 0..n {
                dp.step(&0.5);
            }
            Ok(dp.distribution())
        }
        WalkModel::Persistent { alpha } => {
            let a = crate::scalar::rational_to_f64(alpha);
            let mut dp = PersistentDp::<f64>::new(n, &0.5);
            for _ in 1..n {
                dp.step(&a, &(1.0 - a));
            }
            Ok(dp.distribution())
        }
    }
}

/// Exact `E(Delta_n)`.
pub fn exact_mean_range(model: &WalkModel, n: u32) -> Result<Rational> {
    Ok(exact_mean_range_prefix(model, n)?.pop().expect("nonempty"))
}

/// Exact means `E(Delta_0), ..., E(Delta_n)` from a single DP sweep.
pub fn exact_mean_range_prefix(model: &WalkModel, n: u32) -> Result<Vec<Rational>> {
    check_exact_horizon(n)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Rational::one());
    if n == 0 {
        return Ok(out);
    }
    match model {
        WalkModel::Simple => {
            let mut dp = SimpleDp::<Dyadic>::new(n);
            let half = Dyadic::half();
            for _ in 0..n {
                dp.step(&half);
                out.push(dp.mean().to_rational());
            }
        }
        WalkModel::Persistent { alpha } => {
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            let beta = Rational::one() - alpha.clone();
            let mut dp = PersistentDp::<Rational>::new(n, &half);
            out.push(dp.mean());
            for _ in 1..n {
                dp.step(alpha, &beta);
                out.push(dp.mean());
            }
        }
    }
    Ok(out)
}

/// Exact `Var(Delta_n)`.
pub fn exact_var_range(model: &WalkModel, n: u32) -> Result<Rational> {
    Ok(exact_range_distribution(model, n)?.variance())
}

/// Distribution of `Delta_n` by enumerating all 2^n step sequences.
///
/// Deliberately shares nothing with the DP: ranges come straight from
/// per-path min/max tracking, and persistent weights from counting
/// direction flips. This is the oracle the DP is validated against.
pub fn brute_force_distribution(model: &WalkModel, n: u32) -> Result<RangeDistribution> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationTooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    if n == 0 {
        return Ok(point_mass(0));
    }
    let bits = n as usize;
    let total: u64 = 1 << bits;
    match model {
        WalkModel::Simple => {
            // span -> number of paths; all paths share weight 2^-n.
            let mut counts = vec![0u64; bits + 1];
            for mask in 0..total {
                counts[span_of_mask(mask, bits)] += 1;
            }
            let denom = BigInt::one() << bits;
            let mass = counts
                .iter()
                .enumerate()
                .filter(|(_, c)| **c > 0)
                .map(|(span, c)| (span as u32 + 1, Rational::new(BigInt::from(*c), denom.clone())))
                .collect();
            Ok(RangeDistribution::new(n, mass))
        }
        WalkModel::Persistent { alpha } => {
            // Path weight is (1/2) alpha^repeats beta^flips; tally paths by
            // (span, flips) and weight each bucket once at the end.
            let mut counts = vec![vec![0u64; bits]; bits + 1];
            let flip_mask: u64 = (1 << (bits - 1)) - 1;
            for mask in 0..total {
                let flips = ((mask ^ (mask >> 1)) & flip_mask).count_ones() as usize;
                counts[span_of_mask(mask, bits)][flips] += 1;
            }
            let beta = Rational::one() - alpha;
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            let mut alpha_pow = vec![Rational::one()];
            let mut beta_pow = vec![Rational::one()];
            for i in 1..bits {
                alpha_pow.push(&alpha_pow[i - 1] * alpha);
                beta_pow.push(&beta_pow[i - 1] * &beta);
            }
            let mut mass = BTreeMap::new();
            for (span, by_flips) in counts.iter().enumerate() {
                let mut acc = Rational::zero();
                for (flips, c) in by_flips.iter().enumerate() {
                    if *c > 0 {
                        acc += Rational::from_integer(BigInt::from(*c))
                            * &alpha_pow[bits - 1 - flips]
                            * &beta_pow[flips];
                    }
                }
                if !acc.is_zero() {
                    mass.insert(span as u32 + 1, acc * &half);
                }
            }
            Ok(RangeDistribution::new(n, mass))
        }
    }
}

fn span_of_mask(mask: u64, bits: usize) -> usize {
    let mut pos = 0i32;
    let (mut lo, mut hi) = (0i32, 0i32);
    for i in 0..bits {
        pos += if mask >> i & 1 == 1 { 1 } else { -1 };
        if pos < lo {
            lo = pos;
        } else if pos > hi {
            hi = pos;
        }
    }
    (hi - lo) as usize
}

/// Probability that epoch n visits a brand-new site: `p_{2 floor(n/2), 0}`.
pub fn new_site_probability(n: u32) -> Dyadic {
    return_probability(n / 2)
}

/// Counts, over all 2^(2k) sequences, (a) walks that never revisit the
/// origin after epoch 0 and (b) walks that end at the origin. The two
/// counts are equal for every k; both are returned so callers can see it.
pub fn lemma_counting_check(k: u32) -> Result<(u64, u64)> {
    if k > COUNTING_CHECK_LIMIT {
        return Err(Error::CountingCheckTooLarge { k, limit: COUNTING_CHECK_LIMIT });
    }
    let bits = 2 * k as usize;
    let total: u64 = 1 << bits;
    let mut never_revisit = 0u64;
    let mut end_at_origin = 0u64;
    for mask in 0..total {
        let mut pos = 0i32;
        let mut revisited = false;
        for i in 0..bits {
            pos += if mask >> i & 1 == 1 { 1 } else { -1 };
            if pos == 0 {
                revisited = true;
            }
        }
        if !revisited {
            never_revisit += 1;
        }
        if pos == 0 {
            end_at_origin += 1;
        }
    }
    Ok((never_revisit, end_at_origin))
}
