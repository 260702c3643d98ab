//! Daily range series, realized variance, and range-based volatility.
//!
//! The pipeline: take the daily high-low range R_t, smooth it with a
//! trailing simple moving average, and use
//!
//! ```text
//! E(range) ~ sigma sqrt(8/pi)
//! ```
//!
//! to convert smoothed ranges into a variance forecast,
//! V = (pi/8) SMA(R)^2.  Running the conversion backwards on observed
//! realized variances V_t gives the estimator pi ~ 8 SMA(V)/SMA(R)^2.
//!
//! Realized variance here means the sum of squared price increments on a
//! fixed one-second-style grid: prices are resampled by carrying the last
//! observation forward onto multiples of the quantization step (grid points
//! before the first tick are skipped, the grid ends at the last tick), and
//! gaps wider than the grid step still contribute increments.  Volatility
//! is daily price variance; nothing is annualized.
//!
//! The synthetic generator makes each day an independent +-tick walk that
//! opens at the prior close, so every derived statistic can be checked
//! against the exact and Monte Carlo walk machinery.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write as _};
use std::path::Path;
use std::str::FromStr;

use chrono::{Days, NaiveDate};
use serde::Serialize;

use crate::montecarlo::{replication_seed, simulate_walk, walk_positions};
use crate::{Error, Result, WalkModel};

/// One trading day of open/high/low/close prices, with the realized
/// variance column when it is known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DayRecord {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub realized_var: Option<f64>,
}

impl DayRecord {
    pub fn new(
        date: NaiveDate,
        open: f64,
        high: f64,
        low: f64,
        close: f64,
        realized_var: Option<f64>,
    ) -> Result<Self> {
        let record = DayRecord {
            date,
            open,
            high,
            low,
            close,
            realized_var,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::BadDay {
            date: self.date,
            reason,
        };
        for (name, value) in [
            ("open", self.open),
            ("high", self.high),
            ("low", self.low),
            ("close", self.close),
        ] {
            if !value.is_finite() {
                return Err(bad(format!("{name} is not a finite price")));
            }
        }
        if !(self.low <= self.open && self.open <= self.high) {
            return Err(bad(format!(
                "open {} outside [low {}, high {}]",
                self.open, self.low, self.high
            )));
        }
        if !(self.low <= self.close && self.close <= self.high) {
            return Err(bad(format!(
                "close {} outside [low {}, high {}]",
                self.close, self.low, self.high
            )));
        }
        if let Some(v) = self.realized_var {
            if !v.is_finite() || v < 0.0 {
                return Err(bad(format!("realized variance {v} is negative or not finite")));
            }
        }
        Ok(())
    }

    /// The day's high-low range R_t.
    pub fn range(&self) -> f64 {
        self.high - self.low
    }
}

/// Intraday prices for one day, as (seconds from session open, price),
/// strictly increasing in time.
#[derive(Clone, Debug, PartialEq)]
pub struct TickSeries {
    pub day: NaiveDate,
    pub samples: Vec<(u32, f64)>,
}

/// Which denominator the variance-to-range ratio uses.
///
/// `SquaredMean` is SMA(R)^2, the square of the smoothed range;
/// `MeanSquared` is SMA(R^2), the smoothed squared range.  The first is the
/// default; the second is kept selectable because the two differ by the
/// within-window variance of R and it is useful to see both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioMode {
    SquaredMean,
    MeanSquared,
}

/// Smoothing-window selection for an analysis run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    /// One window covering every loaded day.
    All,
    /// Trailing windows of a fixed number of days.
    Days(usize),
}

impl Window {
    /// Number of days per window for a series of `len` days.
    pub fn resolve(&self, len: usize) -> usize {
        match self {
            Window::All => len,
            Window::Days(n) => *n,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::All => write!(f, "all"),
            Window::Days(n) => write!(f, "{n}"),
        }
    }
}

/// Default smoothing window: one trading month of 21 days.
pub const DEFAULT_WINDOW: usize = 21;

/// One smoothed window's worth of range/variance statistics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RangeVolReport {
    pub window: usize,
    pub sma_range: f64,
    pub sma_var: f64,
    pub ratio: f64,
    pub pi_estimate: f64,
    pub vol_forecast: f64,
}

impl RangeVolReport {
    pub fn csv_header() -> &'static str {
        "window,smaRange,smaVar,ratio,piEstimate,volForecast"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.window, self.sma_range, self.sma_var, self.ratio, self.pi_estimate, self.vol_forecast
        )
    }
}

/// Daily ranges R_t = high_t - low_t, in day order.
pub fn range_series(days: &[DayRecord]) -> Result<Vec<f64>> {
    days.iter()
        .map(|d| {
            d.validate()?;
            Ok(d.range())
        })
        .collect()
}

/// Sum of squared increments of the grid-resampled price path.
///
/// The grid is every multiple of `quantization` seconds from 0 through the
/// last tick; each grid point takes the last price observed at or before
/// it, and grid points before the first tick are dropped.
pub fn realized_variance(ticks: &TickSeries, quantization: u32) -> Result<f64> {
    if quantization == 0 {
        return Err(Error::ZeroQuantization);
    }
    for pair in ticks.samples.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(Error::BadDay {
                date: ticks.day,
                reason: format!("tick timestamps not strictly increasing at {}s", pair[1].0),
            });
        }
    }
    let Some(&(last, _)) = ticks.samples.last() else {
        return Err(Error::TooFewTicks {
            date: ticks.day,
            quantization,
        });
    };
    let step = u64::from(quantization);
    let mut index = 0;
    let mut carried: Option<f64> = None;
    let mut previous: Option<f64> = None;
    let mut grid_points = 0u64;
    let mut sum_sq = 0.0;
    let mut t = 0u64;
    while t <= u64::from(last) {
        while index < ticks.samples.len() && u64::from(ticks.samples[index].0) <= t {
            carried = Some(ticks.samples[index].1);
            index += 1;
        }
        if let Some(price) = carried {
            grid_points += 1;
            if let Some(prev) = previous {
                let d = price - prev;
                sum_sq += d * d;
            }
            previous = Some(price);
        }
        t += step;
    }
    if grid_points < 2 {
        return Err(Error::TooFewTicks {
            date: ticks.day,
            quantization,
        });
    }
    Ok(sum_sq)
}

/// Trailing simple moving average; output index t covers the window ending
/// at input index t + window - 1, so the output has length
/// `len - window + 1`.
pub fn sma(series: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 || window > series.len() {
        return Err(Error::BadWindow {
            window,
            len: series.len(),
        });
    }
    Ok(series
        .windows(window)
        .map(|w| w.iter().sum::<f64>() / window as f64)
        .collect())
}

/// The estimator 8 SMA(V) / SMA(R)^2 per aligned window.
///
/// On walk-like prices the ratio of smoothed variance to squared smoothed
/// range approaches pi/8, so the output hovers near pi.  Any window whose
/// smoothed range is zero is an error; the reported index is the day the
/// window ends on.
pub fn pi_estimate(vars: &[f64], ranges: &[f64], window: usize) -> Result<Vec<f64>> {
    if vars.len() != ranges.len() {
        return Err(Error::LengthMismatch {
            vars: vars.len(),
            ranges: ranges.len(),
        });
    }
    let sma_v = sma(vars, window)?;
    let sma_r = sma(ranges, window)?;
    sma_v
        .iter()
        .zip(&sma_r)
        .enumerate()
        .map(|(i, (v, r))| {
            if *r == 0.0 {
                Err(Error::ZeroRangeWindow {
                    index: i + window - 1,
                })
            } else {
                Ok(8.0 * v / (r * r))
            }
        })
        .collect()
}

/// Range-implied variance forecast (pi/8) SMA(R)^2 per aligned window.
pub fn volatility_from_range(ranges: &[f64], window: usize) -> Result<Vec<f64>> {
    Ok(sma(ranges, window)?
        .iter()
        .map(|r| std::f64::consts::FRAC_PI_8 * r * r)
        .collect())
}

/// Full per-window analysis of a day series that already carries realized
/// variance.  One report per aligned window position.
pub fn analyze_days(
    days: &[DayRecord],
    window: Window,
    mode: RatioMode,
) -> Result<Vec<RangeVolReport>> {
    let ranges = range_series(days)?;
    let vars = days
        .iter()
        .map(|d| {
            d.realized_var.ok_or_else(|| Error::BadDay {
                date: d.date,
                reason: "realized variance missing; supply tick data or a realized_var column"
                    .into(),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let w = window.resolve(days.len());
    let sma_r = sma(&ranges, w)?;
    let sma_v = sma(&vars, w)?;
    let denominators: Vec<f64> = match mode {
        RatioMode::SquaredMean => sma_r.iter().map(|r| r * r).collect(),
        RatioMode::MeanSquared => {
            let squared: Vec<f64> = ranges.iter().map(|r| r * r).collect();
            sma(&squared, w)?
        }
    };
    sma_r
        .iter()
        .zip(&sma_v)
        .zip(&denominators)
        .enumerate()
        .map(|(i, ((r, v), denom))| {
            if *denom == 0.0 {
                return Err(Error::ZeroRangeWindow { index: i + w - 1 });
            }
            let ratio = v / denom;
            Ok(RangeVolReport {
                window: w,
                sma_range: *r,
                sma_var: *v,
                ratio,
                pi_estimate: 8.0 * ratio,
                vol_forecast: std::f64::consts::FRAC_PI_8 * r * r,
            })
        })
        .collect()
}

/// Computes realized variance from tick data for every day that lacks it.
/// Days that already carry a value keep it.  Returns how many days were
/// filled.
pub fn fill_realized_variance(
    days: &mut [DayRecord],
    ticks: &[TickSeries],
    quantization: u32,
) -> Result<usize> {
    let by_date: BTreeMap<NaiveDate, &TickSeries> = ticks.iter().map(|t| (t.day, t)).collect();
    let mut filled = 0;
    for day in days.iter_mut() {
        if day.realized_var.is_some() {
            continue;
        }
        let series = by_date.get(&day.date).ok_or_else(|| Error::BadDay {
            date: day.date,
            reason: "no tick data for this day".into(),
        })?;
        day.realized_var = Some(realized_variance(series, quantization)?);
        filled += 1;
    }
    Ok(filled)
}

/// Parameters of the synthetic +-tick market.
///
/// Day i is an independent walk of `steps_per_day` price moves of size
/// `tick`, seeded with the same splitting rule the Monte Carlo module uses,
/// opening at the prior day's close (day 0 opens at `start_price`).  The
/// calendar runs consecutively from 2000-01-01.  Realized variance is the
/// exact per-day value steps_per_day * tick^2.
#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub days: u32,
    pub steps_per_day: u32,
    pub tick: f64,
    pub start_price: f64,
    pub seed: u64,
    pub model: WalkModel,
}

const SYNTH_EPOCH: (i32, u32, u32) = (2000, 1, 1);

fn synth_fold(
    config: &SynthConfig,
    want_ticks: bool,
    mut sink: impl FnMut(DayRecord, Option<TickSeries>) -> Result<()>,
) -> Result<()> {
    if config.steps_per_day == 0 {
        return Err(Error::ZeroHorizon);
    }
    if !config.tick.is_finite() || config.tick <= 0.0 {
        return Err(Error::BadTick(config.tick));
    }
    let start = NaiveDate::from_ymd_opt(SYNTH_EPOCH.0, SYNTH_EPOCH.1, SYNTH_EPOCH.2)
        .ok_or(Error::BadCalendar)?;
    let realized = f64::from(config.steps_per_day) * config.tick * config.tick;
    let mut open = config.start_price;
    for i in 0..config.days {
        let date = start
            .checked_add_days(Days::new(u64::from(i)))
            .ok_or(Error::BadCalendar)?;
        let day_seed = replication_seed(config.seed, u64::from(i));
        let (lo, hi, last, ticks) = if want_ticks {
            let positions = walk_positions(&config.model, config.steps_per_day, day_seed);
            let lo = *positions.iter().min().expect("positions are nonempty");
            let hi = *positions.iter().max().expect("positions are nonempty");
            let last = *positions.last().expect("positions are nonempty");
            let samples = positions
                .iter()
                .enumerate()
                .map(|(k, &p)| (k as u32, open + config.tick * p as f64))
                .collect();
            (lo, hi, last, Some(TickSeries { day: date, samples }))
        } else {
            let s = simulate_walk(&config.model, config.steps_per_day, day_seed);
            (s.min_site, s.max_site, s.final_position, None)
        };
        let record = DayRecord::new(
            date,
            open,
            open + config.tick * hi as f64,
            open + config.tick * lo as f64,
            open + config.tick * last as f64,
            Some(realized),
        )?;
        open = record.close;
        sink(record, ticks)?;
    }
    Ok(())
}

/// Synthesizes the daily records only.
pub fn synth_days(config: &SynthConfig) -> Result<Vec<DayRecord>> {
    let mut days = Vec::with_capacity(config.days as usize);
    synth_fold(config, false, |record, _| {
        days.push(record);
        Ok(())
    })?;
    Ok(days)
}

/// Synthesizes daily records together with their tick series.
///
/// Tick series are kept in memory (steps_per_day + 1 samples per day), so
/// this suits desk-scale day counts; for bulk generation stream through
/// [`synth_to_writers`] instead.
pub fn synth_days_with_ticks(config: &SynthConfig) -> Result<(Vec<DayRecord>, Vec<TickSeries>)> {
    let mut days = Vec::with_capacity(config.days as usize);
    let mut ticks = Vec::with_capacity(config.days as usize);
    synth_fold(config, true, |record, series| {
        days.push(record);
        ticks.push(series.expect("tick emission was requested"));
        Ok(())
    })?;
    Ok((days, ticks))
}

/// Streams the synthetic market straight to CSV, one day at a time, so
/// memory stays flat no matter how many days are generated.
pub fn synth_to_writers(
    config: &SynthConfig,
    days_out: impl io::Write,
    ticks_out: Option<impl io::Write>,
) -> Result<()> {
    let mut days_out = BufWriter::new(days_out);
    writeln!(days_out, "{}", day_csv_header(true))?;
    let mut ticks_out = match ticks_out {
        Some(w) => {
            let mut w = BufWriter::new(w);
            writeln!(w, "{TICK_CSV_HEADER}")?;
            Some(w)
        }
        None => None,
    };
    synth_fold(config, ticks_out.is_some(), |record, series| {
        writeln!(days_out, "{}", day_csv_row(&record, true))?;
        if let (Some(out), Some(series)) = (ticks_out.as_mut(), series) {
            for (seconds, price) in &series.samples {
                writeln!(out, "{},{},{}", series.day, seconds, price)?;
            }
        }
        Ok(())
    })?;
    days_out.flush()?;
    if let Some(mut out) = ticks_out {
        out.flush()?;
    }
    Ok(())
}

const DAY_CSV_HEADER: &str = "date,open,high,low,close";
const TICK_CSV_HEADER: &str = "date,seconds,price";

fn day_csv_header(with_var: bool) -> String {
    if with_var {
        format!("{DAY_CSV_HEADER},realized_var")
    } else {
        DAY_CSV_HEADER.to_string()
    }
}

fn day_csv_row(day: &DayRecord, with_var: bool) -> String {
    let base = format!(
        "{},{},{},{},{}",
        day.date, day.open, day.high, day.low, day.close
    );
    if with_var {
        match day.realized_var {
            Some(v) => format!("{base},{v}"),
            None => format!("{base},"),
        }
    } else {
        base
    }
}

fn row_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn parse_field<T: FromStr>(record: &csv::StringRecord, index: usize, name: &str) -> Result<T> {
    let text = record.get(index).ok_or_else(|| Error::MalformedRow {
        line: row_line(record),
        reason: format!("missing {name} column"),
    })?;
    text.trim().parse().map_err(|_| Error::MalformedRow {
        line: row_line(record),
        reason: format!("cannot parse {name} from {text:?}"),
    })
}

/// Reads the daily CSV schema `date,open,high,low,close[,realized_var]`.
pub fn read_days(reader: impl io::Read) -> Result<Vec<DayRecord>> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let headers: Vec<String> = csv_reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let with_var = match headers.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["date", "open", "high", "low", "close"] => false,
        ["date", "open", "high", "low", "close", "realized_var"] => true,
        _ => {
            return Err(Error::MalformedRow {
                line: 1,
                reason: format!(
                    "expected header date,open,high,low,close[,realized_var], got {}",
                    headers.join(",")
                ),
            })
        }
    };
    let mut days = Vec::new();
    for record in csv_reader.records() {
        let record = record?;
        let line = row_line(&record);
        let date: NaiveDate = parse_field(&record, 0, "date")?;
        let open = parse_field(&record, 1, "open")?;
        let high = parse_field(&record, 2, "high")?;
        let low = parse_field(&record, 3, "low")?;
        let close = parse_field(&record, 4, "close")?;
        let realized_var = if with_var {
            let text = record.get(5).unwrap_or("").trim();
            if text.is_empty() {
                None
            } else {
                Some(parse_field(&record, 5, "realized_var")?)
            }
        } else {
            None
        };
        let day = DayRecord::new(date, open, high, low, close, realized_var).map_err(|e| {
            Error::MalformedRow {
                line,
                reason: e.to_string(),
            }
        })?;
        days.push(day);
    }
    Ok(days)
}

pub fn load_days(path: impl AsRef<Path>) -> Result<Vec<DayRecord>> {
    read_days(open_named(path.as_ref())?)
}

/// Writes the daily CSV; the realized_var column appears when any record
/// carries one.
pub fn write_days_to(writer: impl io::Write, days: &[DayRecord]) -> Result<()> {
    let with_var = days.iter().any(|d| d.realized_var.is_some());
    let mut out = BufWriter::new(writer);
    writeln!(out, "{}", day_csv_header(with_var))?;
    for day in days {
        writeln!(out, "{}", day_csv_row(day, with_var))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_days(path: impl AsRef<Path>, days: &[DayRecord]) -> Result<()> {
    write_days_to(File::create(path)?, days)
}

/// Reads the tick CSV schema `date,seconds,price`.  Rows for one day must
/// be contiguous and strictly increasing in time.
pub fn read_ticks(reader: impl io::Read) -> Result<Vec<TickSeries>> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let headers: Vec<String> = csv_reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.iter().map(String::as_str).collect::<Vec<_>>() != ["date", "seconds", "price"] {
        return Err(Error::MalformedRow {
            line: 1,
            reason: format!("expected header date,seconds,price, got {}", headers.join(",")),
        });
    }
    let mut series: Vec<TickSeries> = Vec::new();
    let mut seen: Vec<NaiveDate> = Vec::new();
    for record in csv_reader.records() {
        let record = record?;
        let line = row_line(&record);
        let date: NaiveDate = parse_field(&record, 0, "date")?;
        let seconds: u32 = parse_field(&record, 1, "seconds")?;
        let price: f64 = parse_field(&record, 2, "price")?;
        if !price.is_finite() {
            return Err(Error::MalformedRow {
                line,
                reason: format!("price {price} is not finite"),
            });
        }
        match series.last_mut() {
            Some(current) if current.day == date => {
                let last = current.samples.last().expect("series has at least one row");
                if seconds <= last.0 {
                    return Err(Error::MalformedRow {
                        line,
                        reason: format!(
                            "seconds {seconds} does not increase past {} for {date}",
                            last.0
                        ),
                    });
                }
                current.samples.push((seconds, price));
            }
            _ => {
                if seen.contains(&date) {
                    return Err(Error::MalformedRow {
                        line,
                        reason: format!("rows for {date} are not contiguous"),
                    });
                }
                seen.push(date);
                series.push(TickSeries {
                    day: date,
                    samples: vec![(seconds, price)],
                });
            }
        }
    }
    Ok(series)
}

pub fn load_ticks(path: impl AsRef<Path>) -> Result<Vec<TickSeries>> {
    read_ticks(open_named(path.as_ref())?)
}

/// `File::open` with the path folded into the error message.
fn open_named(path: &Path) -> Result<File> {
    File::open(path)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn write_ticks_to(writer: impl io::Write, ticks: &[TickSeries]) -> Result<()> {
    let mut out = BufWriter::new(writer);
    writeln!(out, "{TICK_CSV_HEADER}")?;
    for series in ticks {
        for (seconds, price) in &series.samples {
            writeln!(out, "{},{},{}", series.day, seconds, price)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_ticks(path: impl AsRef<Path>, ticks: &[TickSeries]) -> Result<()> {
    write_ticks_to(File::create(path)?, ticks)
}
