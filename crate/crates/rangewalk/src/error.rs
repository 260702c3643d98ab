//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the library.
///
/// Limits exist so that "exact" never silently degrades: callers that want
/// horizons beyond [`crate::exact_range::EXACT_HORIZON_LIMIT`] must opt in
/// to the float-mode DP explicitly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("horizon {n} exceeds the exact-mode limit {limit}; use the float-mode DP beyond it")]
    HorizonTooLarge { n: u32, limit: u32 },

    #[error("horizon {n} exceeds the brute-force enumeration limit {limit}")]
    EnumerationTooLarge { n: u32, limit: u32 },

    #[error("k = {k} exceeds the counting-check enumeration limit {limit}")]
    CountingCheckTooLarge { k: u32, limit: u32 },

    #[error("horizon {n} exceeds the float-mode DP limit {limit}")]
    FloatHorizonTooLarge { n: u32, limit: u32 },

    #[error("alpha must lie strictly between 0 and 1")]
    AlphaOutOfRange,

    #[error("cannot parse {0:?} as a rational number")]
    BadRational(String),

    #[error("n must be at least 1 for asymptotic operations")]
    ZeroHorizon,

    #[error("approximation order must be 0, 1, or 2, got {0}")]
    BadOrder(u32),

    #[error("step at index {index} is {value}; steps must be +1 or -1")]
    BadStep { index: usize, value: i64 },

    #[error("replications must be at least 2, got {0}")]
    TooFewReplications(u64),

    #[error("shard count must be at least 1")]
    ZeroShards,

    #[error("series division requires a divisor with nonzero constant term")]
    ZeroConstantTerm,

    #[error("series square root requires constant term 1, got {0}")]
    SqrtConstantTerm(String),

    #[error("window {window} is invalid for a series of length {len}")]
    BadWindow { window: usize, len: usize },

    #[error("variance and range series have different lengths ({vars} vs {ranges})")]
    LengthMismatch { vars: usize, ranges: usize },

    #[error("smoothed range is zero in the window ending at index {index}")]
    ZeroRangeWindow { index: usize },

    #[error("day {date}: {reason}")]
    BadDay { date: chrono::NaiveDate, reason: String },

    #[error("tick series for {date} needs at least two grid samples at quantization {quantization}")]
    TooFewTicks { date: chrono::NaiveDate, quantization: u32 },

    #[error("quantization step must be at least 1")]
    ZeroQuantization,

    #[error("tick step must be positive, got {0}")]
    BadTick(f64),

    #[error("synthetic calendar must start on a valid date")]
    BadCalendar,

    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
