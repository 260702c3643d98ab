//! Seeded Monte Carlo estimation of the walk range moments.
//!
//! Everything here is reproducible by contract.  The generator is pinned:
//! each replication runs its own ChaCha8 stream created through
//! `ChaCha8Rng::seed_from_u64`, and replication `i` of a run with base seed
//! `b` uses
//!
//! ```text
//! seed_i = splitmix64(b + (i + 1) * 0x9E3779B97F4A7C15)
//! ```
//!
//! where `splitmix64` is the standard finalizer (xor-shift 30, multiply
//! 0xBF58476D1CE4E5B9, xor-shift 27, multiply 0x94D049BB133111EB,
//! xor-shift 31).  Because seeds are random-access, replications can be
//! sharded arbitrarily; sums and sums of squares are held in `u128` and
//! merged exactly, so the report is bit-identical for any shard count.
//!
//! Step consumption is also pinned.  The simple walk turns each generator
//! word into 64 steps, least significant bit first.  The persistent walk
//! spends one word on the symmetric first step and one word per later step,
//! repeating the previous direction when the word falls below
//! floor(alpha * 2^64).  A persistent model with alpha = 1/2 is sampled
//! through the simple path so that the two produce identical streams.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Rational, Result, WalkModel};

/// Streaming description of one finished walk: no path is stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WalkSummary {
    pub horizon: u32,
    pub final_position: i64,
    pub min_site: i64,
    pub max_site: i64,
    pub distinct_sites: u64,
}

impl WalkSummary {
    /// Width of the visited interval, `max_site - min_site`.
    pub fn span(&self) -> i64 {
        self.max_site - self.min_site
    }
}

/// Sample moments of the range over many replications.
///
/// `seeds` records the base seed the replication seeds were split from;
/// `elapsed` is wall-clock bookkeeping and deliberately stays out of the
/// serialized form so that equal inputs give byte-equal reports.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MonteCarloReport {
    pub model: WalkModel,
    pub horizon: u32,
    pub replications: u64,
    pub mean_range: f64,
    pub var_range: f64,
    pub std_error_of_mean: f64,
    pub seeds: Vec<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl MonteCarloReport {
    pub fn csv_header() -> &'static str {
        "model,horizon,replications,meanRange,varRange,stdErrorOfMean,seeds"
    }

    pub fn csv_row(&self) -> String {
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        format!(
            "{},{},{},{},{},{},{}",
            self.model,
            self.horizon,
            self.replications,
            self.mean_range,
            self.var_range,
            self.std_error_of_mean,
            seeds.join(";")
        )
    }
}

const SEED_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The documented seed-splitting rule: splitmix64 applied to
/// `base + (replication + 1) * GAMMA`.
pub fn replication_seed(base: u64, replication: u64) -> u64 {
    let mut z = base.wrapping_add(SEED_GAMMA.wrapping_mul(replication.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Largest `t` with `t <= alpha * 2^64`; a uniform word below `t` means
/// "repeat the previous step".
fn repeat_threshold(alpha: &Rational) -> u64 {
    let scaled = (alpha.numer() * (BigInt::one() << 64u32)) / alpha.denom();
    scaled
        .to_u64()
        .expect("alpha < 1 keeps the threshold below 2^64")
}

fn is_half(alpha: &Rational) -> bool {
    alpha.numer() == &BigInt::from(1) && alpha.denom() == &BigInt::from(2)
}

enum StepStream {
    Simple {
        rng: ChaCha8Rng,
        word: u64,
        remaining: u32,
    },
    Persistent {
        rng: ChaCha8Rng,
        repeat_below: u64,
        last: i64,
    },
}

impl StepStream {
    fn new(model: &WalkModel, seed: u64) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(seed);
        match model {
            WalkModel::Persistent { alpha } if !is_half(alpha) => StepStream::Persistent {
                rng,
                repeat_below: repeat_threshold(alpha),
                last: 0,
            },
            _ => StepStream::Simple {
                rng,
                word: 0,
                remaining: 0,
            },
        }
    }

    #[inline]
    fn next_step(&mut self) -> i64 {
        match self {
            StepStream::Simple {
                rng,
                word,
                remaining,
            } => {
                if *remaining == 0 {
                    *word = rng.next_u64();
                    *remaining = 64;
                }
                let step = if *word & 1 == 1 { 1 } else { -1 };
                *word >>= 1;
                *remaining -= 1;
                step
            }
            StepStream::Persistent {
                rng,
                repeat_below,
                last,
            } => {
                if *last == 0 {
                    *last = if rng.next_u64() & 1 == 1 { 1 } else { -1 };
                } else if rng.next_u64() >= *repeat_below {
                    *last = -*last;
                }
                *last
            }
        }
    }
}

/// Summarizes an explicit +-1 step sequence in one pass.
pub fn path_summary(steps: &[i64]) -> Result<WalkSummary> {
    let mut pos = 0i64;
    let mut lo = 0i64;
    let mut hi = 0i64;
    for (index, &value) in steps.iter().enumerate() {
        if value != 1 && value != -1 {
            return Err(Error::BadStep { index, value });
        }
        pos += value;
        if pos < lo {
            lo = pos;
        } else if pos > hi {
            hi = pos;
        }
    }
    Ok(WalkSummary {
        horizon: u32::try_from(steps.len()).expect("path length fits in u32"),
        final_position: pos,
        min_site: lo,
        max_site: hi,
        distinct_sites: (hi - lo + 1) as u64,
    })
}

/// Runs one seeded walk and reports its range, in O(1) memory.
pub fn simulate_walk(model: &WalkModel, n: u32, seed: u64) -> WalkSummary {
    let mut stream = StepStream::new(model, seed);
    let mut pos = 0i64;
    let mut lo = 0i64;
    let mut hi = 0i64;
    for _ in 0..n {
        pos += stream.next_step();
        if pos < lo {
            lo = pos;
        } else if pos > hi {
            hi = pos;
        }
    }
    WalkSummary {
        horizon: n,
        final_position: pos,
        min_site: lo,
        max_site: hi,
        distinct_sites: (hi - lo + 1) as u64,
    }
}

/// The full position sequence of the same walk `simulate_walk` summarizes:
/// element 0 is the origin and element k the position after k steps.
pub fn walk_positions(model: &WalkModel, n: u32, seed: u64) -> Vec<i64> {
    let mut stream = StepStream::new(model, seed);
    let mut positions = Vec::with_capacity(n as usize + 1);
    let mut pos = 0i64;
    positions.push(pos);
    for _ in 0..n {
        pos += stream.next_step();
        positions.push(pos);
    }
    positions
}

fn accumulate(model: &WalkModel, n: u32, base_seed: u64, lo: u64, hi: u64) -> (u128, u128) {
    let mut sum = 0u128;
    let mut sumsq = 0u128;
    for i in lo..hi {
        let d = simulate_walk(model, n, replication_seed(base_seed, i)).distinct_sites as u128;
        sum += d;
        sumsq += d * d;
    }
    (sum, sumsq)
}

/// Sequential estimate of E(range) and Var(range) over `replications`
/// independent walks.
pub fn estimate_range_moments(
    model: &WalkModel,
    n: u32,
    replications: u64,
    base_seed: u64,
) -> Result<MonteCarloReport> {
    estimate_range_moments_sharded(model, n, replications, base_seed, 1)
}

/// The same estimate with the replications split into `shards` contiguous
/// blocks that run in parallel.  The accumulators are exact integers, so
/// the report does not depend on the shard count or completion order.
pub fn estimate_range_moments_sharded(
    model: &WalkModel,
    n: u32,
    replications: u64,
    base_seed: u64,
    shards: u64,
) -> Result<MonteCarloReport> {
    if replications < 2 {
        return Err(Error::TooFewReplications(replications));
    }
    if shards == 0 {
        return Err(Error::ZeroShards);
    }
    let started = Instant::now();
    let shards = shards.min(replications);
    let bound = |s: u64| -> u64 { (replications as u128 * s as u128 / shards as u128) as u64 };
    let (sum, sumsq) = (0..shards)
        .into_par_iter()
        .map(|s| accumulate(model, n, base_seed, bound(s), bound(s + 1)))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let reps = replications as u128;
    let mean_range = sum as f64 / replications as f64;
    // Unbiased sample variance: (N * sum(x^2) - sum(x)^2) / (N (N - 1)),
    // evaluated in exact integers before the single final rounding.
    let var_range = (reps * sumsq - sum * sum) as f64 / (reps * (reps - 1)) as f64;
    Ok(MonteCarloReport {
        model: model.clone(),
        horizon: n,
        replications,
        mean_range,
        var_range,
        std_error_of_mean: (var_range / replications as f64).sqrt(),
        seeds: vec![base_seed],
        elapsed: started.elapsed(),
    })
}
