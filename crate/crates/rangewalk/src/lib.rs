//! Statistics of the range of one-dimensional random walks.
//!
//! The range of a walk after n steps is the number of distinct sites it has
//! visited, written `Delta_n` throughout this crate; it equals
//! `max - min + 1` of the partial sums. The crate computes its distribution
//! and moments by four independent routes that cross-validate each other:
//!
//! * exact dynamic programming over walk states ([`exact_range`]),
//! * brute-force enumeration of all step sequences ([`exact_range`]),
//! * generating-function power series ([`series`]),
//! * closed-form large-n approximations ([`asymptotics`]).
//!
//! On top of those sit a reproducible Monte Carlo sampler ([`montecarlo`])
//! and a small market-data pipeline ([`market`]) that turns daily high/low
//! ranges into variance forecasts and an estimate of pi.
//!
//! Exact arithmetic uses arbitrary-precision rationals; the dynamic
//! programming and power-series kernels are generic over the coefficient
//! type (see [`scalar`]), so the same recurrences run over dyadic
//! rationals, general big rationals, or `f64`.

pub mod asymptotics;
pub mod combinatorics;
pub mod dyadic;
pub mod error;
pub mod exact_range;
pub mod market;
pub mod model;
pub mod montecarlo;
pub mod scalar;
pub mod series;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use model::WalkModel;

/// Arbitrary-precision signed integer used for exact counts.
pub type Integer = num_bigint::BigInt;

/// Arbitrary-precision rational used wherever exactness is promised.
pub type Rational = num_rational::BigRational;

/// Truncated power series with exact rational coefficients.
pub type RationalSeries = series::PowerSeries<Rational>;
