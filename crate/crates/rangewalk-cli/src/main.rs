//! Command-line front end for the `rangewalk` library.
//!
//! Subcommands cover the four routes to the range of a random walk (exact
//! dynamic programming, brute-force enumeration, generating-function series,
//! asymptotic approximation), Monte Carlo estimation, and the market-data
//! pipeline (synthetic data generation plus range-based volatility analysis).
//!
//! Exit codes: 0 success, 1 usage error, 2 data or runtime error,
//! 3 internal invariant violation (or failed self-checks from `check`).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::process::exit;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use rangewalk::asymptotics::{
    error_table, error_table_csv, mean_range_asymptotic, persistent_mean_asymptotic,
    render_error_table, var_range_asymptotic,
};
use rangewalk::combinatorics::ApproxOrder;
use rangewalk::exact_range::{
    brute_force_distribution, exact_mean_range_prefix, exact_range_distribution,
    lemma_counting_check, new_site_probability, BRUTE_FORCE_LIMIT,
};
use rangewalk::market::{self, RangeVolReport, RatioMode, SynthConfig, Window, DEFAULT_WINDOW};
use rangewalk::montecarlo::{estimate_range_moments_sharded, MonteCarloReport};
use rangewalk::scalar::{format_fixed, rational_to_f64};
use rangewalk::series::{big_delta_series, delta_series, p0_series};
use rangewalk::{Error, Rational, Result, WalkModel};

#[derive(Parser)]
#[command(name = "rangewalk", version, about = "Range statistics of random walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact mean, variance, or full distribution of the range
    Exact(ExactArgs),
    /// Asymptotic approximations to the mean and variance of the range
    Approx(ApproxArgs),
    /// Exact-versus-asymptotic error table for small horizons
    Table(TableArgs),
    /// Coefficients of the generating functions behind the range
    Series(SeriesArgs),
    /// Monte Carlo estimate of the range moments
    Simulate(SimulateArgs),
    /// Market data: synthetic generation and range-based volatility
    Market {
        #[command(subcommand)]
        command: MarketCommand,
    },
    /// Cross-validate the independent computation routes against each other
    Check,
}

#[derive(Subcommand)]
enum MarketCommand {
    /// Generate synthetic daily bars (and optionally tick series)
    Synth(SynthArgs),
    /// Range-based volatility analysis of daily bars
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct ExactArgs {
    /// Number of steps
    #[arg(long)]
    n: u32,
    /// Persistence probability for the persistent walk, e.g. 3/4 or 0.75
    #[arg(long)]
    alpha: Option<String>,
    /// Print the full probability distribution instead of the moments
    #[arg(long)]
    dist: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: TextFormat,
}

#[derive(Args)]
struct ApproxArgs {
    /// Number of steps
    #[arg(long)]
    n: u32,
    /// Expansion order: 0 leading, 1 first correction, 2 second correction
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(0..=2))]
    order: u32,
    /// Persistence probability; switches to the persistent-walk leading term
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Largest horizon to tabulate
    #[arg(long = "max-n", default_value_t = 7)]
    max_n: u32,
    #[arg(long, value_enum, default_value = "table")]
    format: TableFormat,
}

#[derive(Clone, Copy)]
enum WhichSeries {
    P0,
    LittleDelta,
    BigDelta,
}

impl WhichSeries {
    fn label(self) -> &'static str {
        match self {
            WhichSeries::P0 => "p0",
            WhichSeries::LittleDelta => "delta",
            WhichSeries::BigDelta => "Delta",
        }
    }
}

/// Case-sensitive: `delta` is the new-site series, `Delta` the mean range.
fn parse_which(text: &str) -> std::result::Result<WhichSeries, String> {
    match text {
        "p0" => Ok(WhichSeries::P0),
        "delta" => Ok(WhichSeries::LittleDelta),
        "Delta" => Ok(WhichSeries::BigDelta),
        other => Err(format!(
            "unknown series '{other}' (expected p0, delta, or Delta)"
        )),
    }
}

#[derive(Args)]
struct SeriesArgs {
    /// Which series: p0 (return probability), delta (new-site), Delta (mean range)
    #[arg(long, value_parser = parse_which)]
    which: WhichSeries,
    /// Number of coefficients to print (indices 0 through terms-1)
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    terms: u32,
    #[arg(long, value_enum, default_value = "csv")]
    format: DataFormat,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of steps per walk
    #[arg(long)]
    n: u32,
    /// Number of independent replications
    #[arg(long)]
    reps: u64,
    /// Base seed; every replication derives its own stream from it
    #[arg(long)]
    seed: u64,
    /// Persistence probability for the persistent walk
    #[arg(long)]
    alpha: Option<String>,
    /// Number of parallel shards; the estimate is independent of this
    #[arg(long, default_value_t = 1)]
    shards: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: DataFormat,
}

#[derive(Args)]
struct SynthArgs {
    /// Number of trading days to generate
    #[arg(long)]
    days: u32,
    /// Intraday steps per day
    #[arg(long, default_value_t = 23_400)]
    steps: u32,
    /// Price change per step
    #[arg(long, default_value_t = 0.01)]
    tick: f64,
    /// Opening price of the first day
    #[arg(long, default_value_t = 1000.0)]
    start: f64,
    /// Base seed; each day derives its own stream from it
    #[arg(long)]
    seed: u64,
    /// Persistence probability for the intraday walk
    #[arg(long)]
    alpha: Option<String>,
    /// Daily CSV destination; - writes to stdout
    #[arg(long, default_value = "-")]
    out: String,
    /// Optional tick CSV destination; - writes to stdout
    #[arg(long = "ticks-out")]
    ticks_out: Option<String>,
}

fn parse_window(text: &str) -> std::result::Result<Window, String> {
    if text == "all" {
        return Ok(Window::All);
    }
    match text.parse::<usize>() {
        Ok(days) if days > 0 => Ok(Window::Days(days)),
        _ => Err(format!("window must be 'all' or a positive integer, got '{text}'")),
    }
}

fn parse_ratio(text: &str) -> std::result::Result<RatioMode, String> {
    match text {
        "squared-mean" => Ok(RatioMode::SquaredMean),
        "mean-squared" => Ok(RatioMode::MeanSquared),
        other => Err(format!(
            "ratio must be squared-mean or mean-squared, got '{other}'"
        )),
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Daily bar CSV (date,open,high,low,close[,realized_var])
    #[arg(long)]
    daily: String,
    /// Tick CSV used to fill in missing realized variances
    #[arg(long)]
    ticks: Option<String>,
    /// Resampling grid spacing in seconds for realized variance
    #[arg(long, default_value_t = 1)]
    quantization: u32,
    /// Moving-average window in days, or 'all' for a single full-sample window
    #[arg(long, value_parser = parse_window, default_value_t = Window::Days(DEFAULT_WINDOW))]
    window: Window,
    /// Denominator convention for the ratio: squared-mean or mean-squared
    #[arg(long, value_parser = parse_ratio, default_value = "squared-mean")]
    ratio: RatioMode,
    #[arg(long, value_enum, default_value = "json")]
    format: DataFormat,
    /// Report destination; - writes to stdout
    #[arg(long, default_value = "-")]
    out: String,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            exit(code);
        }
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(cli)));
    let code = match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(err)) => {
            eprintln!("error: {err}");
            2
        }
        Err(_) => {
            eprintln!("error: internal invariant violated (see panic message above)");
            3
        }
    };
    exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Exact(args) => cmd_exact(args)?,
        Command::Approx(args) => cmd_approx(args)?,
        Command::Table(args) => cmd_table(args)?,
        Command::Series(args) => cmd_series(args)?,
        Command::Simulate(args) => cmd_simulate(args)?,
        Command::Market { command } => match command {
            MarketCommand::Synth(args) => cmd_synth(args)?,
            MarketCommand::Analyze(args) => cmd_analyze(args)?,
        },
        Command::Check => return cmd_check(),
    }
    Ok(0)
}

fn model_from_alpha(alpha: &Option<String>) -> Result<WalkModel> {
    match alpha {
        None => Ok(WalkModel::Simple),
        Some(text) => WalkModel::persistent_from_str(text),
    }
}

fn open_output(path: &str) -> Result<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(io::stdout()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serialization cannot fail")
}

fn cmd_exact(args: ExactArgs) -> Result<()> {
    let model = model_from_alpha(&args.alpha)?;
    let dist = exact_range_distribution(&model, args.n)?;
    if args.dist {
        let rows: Vec<(u32, &Rational)> = dist.masses().collect();
        match args.format {
            TextFormat::Table => {
                println!("model: {model}");
                println!("n: {}", args.n);
                let width = rows
                    .iter()
                    .map(|(_, p)| p.to_string().len())
                    .max()
                    .unwrap_or(1)
                    .max("probability".len());
                println!("{:>6}  {:<width$}  float", "delta", "probability");
                for (delta, p) in &rows {
                    let text = p.to_string();
                    println!("{delta:>6}  {text:<width$}  {}", rational_to_f64(p));
                }
            }
            TextFormat::Csv => {
                println!("delta,probability,float");
                for (delta, p) in &rows {
                    println!("{delta},{p},{}", rational_to_f64(p));
                }
            }
            TextFormat::Json => {
                let pmf: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|(delta, p)| {
                        serde_json::json!({
                            "delta": delta,
                            "probability": p.to_string(),
                            "float": rational_to_f64(p),
                        })
                    })
                    .collect();
                let doc = serde_json::json!({
                    "model": model,
                    "horizon": args.n,
                    "pmf": pmf,
                });
                println!("{}", to_json(&doc));
            }
        }
        return Ok(());
    }
    let mean = dist.mean();
    let variance = dist.variance();
    match args.format {
        TextFormat::Table => {
            println!("model: {model}");
            println!("n: {}", args.n);
            println!("mean: {mean} ({})", rational_to_f64(&mean));
            println!("variance: {variance} ({})", rational_to_f64(&variance));
        }
        TextFormat::Csv => {
            println!("n,mean,variance,meanFloat,varianceFloat");
            println!(
                "{},{mean},{variance},{},{}",
                args.n,
                rational_to_f64(&mean),
                rational_to_f64(&variance)
            );
        }
        TextFormat::Json => {
            let doc = serde_json::json!({
                "model": model,
                "horizon": args.n,
                "mean": mean.to_string(),
                "meanFloat": rational_to_f64(&mean),
                "variance": variance.to_string(),
                "varianceFloat": rational_to_f64(&variance),
            });
            println!("{}", to_json(&doc));
        }
    }
    Ok(())
}

fn cmd_approx(args: ApproxArgs) -> Result<()> {
    let model = model_from_alpha(&args.alpha)?;
    match model {
        WalkModel::Simple => {
            let order = ApproxOrder::from_index(args.order)?;
            println!("n: {}", args.n);
            println!("order: {}", args.order);
            println!("mean: {}", mean_range_asymptotic(args.n, order)?);
            println!("variance: {}", var_range_asymptotic(args.n)?);
        }
        WalkModel::Persistent { alpha } => {
            println!("n: {}", args.n);
            println!("alpha: {alpha}");
            println!(
                "mean: {}",
                persistent_mean_asymptotic(args.n, rational_to_f64(&alpha))?
            );
        }
    }
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<()> {
    let rows = error_table(args.max_n)?;
    match args.format {
        TableFormat::Table => print!("{}", render_error_table(&rows)),
        TableFormat::Csv => print!("{}", error_table_csv(&rows)),
    }
    Ok(())
}

fn cmd_series(args: SeriesArgs) -> Result<()> {
    let order = args.terms as usize - 1;
    let series = match args.which {
        WhichSeries::P0 => p0_series(order),
        WhichSeries::LittleDelta => delta_series(order)?,
        WhichSeries::BigDelta => big_delta_series(order)?,
    };
    match args.format {
        DataFormat::Csv => {
            println!("index,coefficient,float");
            for (index, coeff) in series.coeffs().iter().enumerate() {
                println!("{index},{coeff},{}", rational_to_f64(coeff));
            }
        }
        DataFormat::Json => {
            let coefficients: Vec<serde_json::Value> = series
                .coeffs()
                .iter()
                .enumerate()
                .map(|(index, coeff)| {
                    serde_json::json!({
                        "index": index,
                        "value": coeff.to_string(),
                        "float": rational_to_f64(coeff),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "which": args.which.label(),
                "terms": args.terms,
                "coefficients": coefficients,
            });
            println!("{}", to_json(&doc));
        }
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let model = model_from_alpha(&args.alpha)?;
    let report = estimate_range_moments_sharded(&model, args.n, args.reps, args.seed, args.shards)?;
    eprintln!("elapsed: {:?}", report.elapsed);
    match args.format {
        DataFormat::Json => println!("{}", to_json(&report)),
        DataFormat::Csv => {
            println!("{}", MonteCarloReport::csv_header());
            println!("{}", report.csv_row());
        }
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let model = model_from_alpha(&args.alpha)?;
    let config = SynthConfig {
        days: args.days,
        steps_per_day: args.steps,
        tick: args.tick,
        start_price: args.start,
        seed: args.seed,
        model,
    };
    let days_out = open_output(&args.out)?;
    let ticks_out = match &args.ticks_out {
        Some(path) => Some(open_output(path)?),
        None => None,
    };
    market::synth_to_writers(&config, days_out, ticks_out)?;
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let mut days = market::load_days(&args.daily)?;
    if let Some(ticks_path) = &args.ticks {
        let ticks = market::load_ticks(ticks_path)?;
        market::fill_realized_variance(&mut days, &ticks, args.quantization)?;
    }
    let reports = market::analyze_days(&days, args.window, args.ratio)?;
    let mut out = open_output(&args.out)?;
    match args.format {
        DataFormat::Json => writeln!(out, "{}", to_json(&reports))?,
        DataFormat::Csv => {
            writeln!(out, "{}", RangeVolReport::csv_header())?;
            for report in &reports {
                writeln!(out, "{}", report.csv_row())?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

struct CheckRunner {
    failures: u32,
    total: u32,
}

impl CheckRunner {
    fn new() -> Self {
        CheckRunner { failures: 0, total: 0 }
    }

    fn report(&mut self, name: &str, outcome: std::result::Result<(), String>) {
        self.total += 1;
        match outcome {
            Ok(()) => println!("PASS {name}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }

    fn run(&mut self, name: &str, body: impl FnOnce() -> std::result::Result<(), String>) {
        self.report(name, body());
    }
}

fn check_err(err: Error) -> String {
    format!("unexpected error: {err}")
}

fn cmd_check() -> Result<i32> {
    let mut runner = CheckRunner::new();

    runner.run("dp-vs-bruteforce-simple", || {
        for n in 0..=12u32 {
            let dp = exact_range_distribution(&WalkModel::Simple, n).map_err(check_err)?;
            let bf = brute_force_distribution(&WalkModel::Simple, n).map_err(check_err)?;
            if dp != bf {
                return Err(format!("distributions disagree at n={n}"));
            }
        }
        Ok(())
    });

    runner.run("dp-vs-bruteforce-persistent", || {
        for alpha in ["1/4", "3/4", "2/7"] {
            let model = WalkModel::persistent_from_str(alpha).map_err(check_err)?;
            for n in 0..=10u32 {
                let dp = exact_range_distribution(&model, n).map_err(check_err)?;
                let bf = brute_force_distribution(&model, n).map_err(check_err)?;
                if dp != bf {
                    return Err(format!("distributions disagree at alpha={alpha}, n={n}"));
                }
            }
        }
        Ok(())
    });

    runner.run("series-matches-dp-means", || {
        let series = big_delta_series(64).map_err(check_err)?;
        let means = exact_mean_range_prefix(&WalkModel::Simple, 64).map_err(check_err)?;
        for (n, mean) in means.iter().enumerate() {
            let coeff = series.coeff(n).expect("series is long enough");
            if coeff != mean {
                return Err(format!("coefficient {n} is {coeff}, dp mean is {mean}"));
            }
        }
        Ok(())
    });

    runner.run("new-site-telescoping", || {
        let series = delta_series(64).map_err(check_err)?;
        let means = exact_mean_range_prefix(&WalkModel::Simple, 64).map_err(check_err)?;
        for n in 1..=64usize {
            let increment = &means[n] - &means[n - 1];
            let expected = new_site_probability(n as u32).to_rational();
            if increment != expected {
                return Err(format!("mean increment at n={n} is {increment}, not {expected}"));
            }
            let coeff = series.coeff(n).expect("series is long enough");
            if *coeff != expected {
                return Err(format!("series term at n={n} is {coeff}, not {expected}"));
            }
        }
        Ok(())
    });

    runner.run("lemma-counting", || {
        for k in 0..=8u32 {
            let (walks, paths) = lemma_counting_check(k).map_err(check_err)?;
            if walks != paths {
                return Err(format!("count mismatch at k={k}: {walks} vs {paths}"));
            }
        }
        Ok(())
    });

    runner.run("error-table-pinned-rows", || {
        let rows = error_table(7).map_err(check_err)?;
        let exact = ["1.0000", "2.0000", "2.5000", "3.0000", "3.3750", "3.7500", "4.0625", "4.3750"];
        let approx = ["0.0000", "1.5958", "2.2568", "2.7640", "3.1915", "3.5682", "3.9088", "4.2220"];
        let pct = ["100.00", "20.21", "9.73", "7.87", "5.44", "4.85", "3.78", "3.50"];
        if rows.len() != 8 {
            return Err(format!("expected 8 rows, got {}", rows.len()));
        }
        for (i, row) in rows.iter().enumerate() {
            let got = (
                format_fixed(row.exact, 4),
                format_fixed(row.approx, 4),
                format_fixed(row.pct_error, 2),
            );
            if got.0 != exact[i] || got.1 != approx[i] || got.2 != pct[i] {
                return Err(format!("row n={i} renders as {got:?}"));
            }
        }
        Ok(())
    });

    runner.run("variance-slope", || {
        let var40 = var_range_asymptotic(40).map_err(check_err)?;
        if (var40 - 8.724).abs() > 1e-9 {
            return Err(format!("var at n=40 is {var40}, expected 8.724"));
        }
        Ok(())
    });

    runner.run("bruteforce-limit-guard", || {
        match brute_force_distribution(&WalkModel::Simple, BRUTE_FORCE_LIMIT + 1) {
            Err(Error::EnumerationTooLarge { .. }) => Ok(()),
            Err(other) => Err(format!("wrong error: {other}")),
            Ok(_) => Err("enumeration above the limit should be rejected".into()),
        }
    });

    if runner.failures == 0 {
        println!("all {} checks passed", runner.total);
        Ok(0)
    } else {
        println!("{} of {} checks failed", runner.failures, runner.total);
        Ok(3)
    }
}
