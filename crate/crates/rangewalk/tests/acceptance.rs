//! Top-level acceptance checks, one test per criterion.
//!
//! Each test prints a `PASS criterion-.. ` line (visible with `--nocapture`)
//! and asserts the published runtime budget with generous headroom. The
//! criteria tie together the four independent routes to the range statistics
//! plus the Monte Carlo and market layers, so a regression anywhere in the
//! crate shows up here by name.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rangewalk::asymptotics::{mean_range_asymptotic, var_range_asymptotic};
use rangewalk::combinatorics::{stirling_factorial, ApproxOrder};
use rangewalk::exact_range::{
    brute_force_distribution, exact_mean_range_prefix, exact_range_distribution,
    lemma_counting_check, new_site_probability,
};
use rangewalk::market::{
    analyze_days, pi_estimate, synth_days, volatility_from_range, RatioMode, SynthConfig, Window,
};
use rangewalk::montecarlo::estimate_range_moments;
use rangewalk::scalar::{format_fixed, rational_to_f64};
use rangewalk::series::big_delta_series;
use rangewalk::{Rational, WalkModel};

fn finish(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "{name} took {elapsed:?}, budget {budget:?}"
    );
    println!("PASS {name} ({elapsed:.2?})");
}

fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

#[test]
fn criterion_01_exact_means_match_the_reference_table() {
    let started = Instant::now();
    let means = exact_mean_range_prefix(&WalkModel::Simple, 7).unwrap();
    let expected = [
        rat(1, 1),
        rat(2, 1),
        rat(5, 2),
        rat(3, 1),
        rat(27, 8),
        rat(15, 4),
        rat(65, 16),
        rat(35, 8),
    ];
    assert_eq!(means, expected);
    let decimals = [
        "1.0000", "2.0000", "2.5000", "3.0000", "3.3750", "3.7500", "4.0625", "4.3750",
    ];
    for (mean, text) in means.iter().zip(decimals) {
        assert_eq!(format_fixed(rational_to_f64(mean), 4), text);
    }
    finish("criterion-01 exact-means", started, Duration::from_secs(1));
}

#[test]
fn criterion_02_approximation_and_error_columns_match() {
    let started = Instant::now();
    let rows = rangewalk::asymptotics::error_table(7).unwrap();
    let approx = [
        "0.0000", "1.5958", "2.2568", "2.7640", "3.1915", "3.5682", "3.9088", "4.2220",
    ];
    // The n=1 error renders as 0.4042: the absolute difference 2 - sqrt(8/pi)
    // is 0.40417, and the 20.21 percent cell confirms the rounding.
    let error = [
        "1.0000", "0.4042", "0.2432", "0.2360", "0.1835", "0.1818", "0.1537", "0.1530",
    ];
    let pct = [
        "100.00", "20.21", "9.73", "7.87", "5.44", "4.85", "3.78", "3.50",
    ];
    assert_eq!(rows.len(), 8);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.n, i as u32);
        assert_eq!(format_fixed(row.approx, 4), approx[i], "approx at n={i}");
        assert_eq!(format_fixed(row.error, 4), error[i], "error at n={i}");
        assert_eq!(format_fixed(row.pct_error, 2), pct[i], "pct at n={i}");
    }
    finish("criterion-02 error-table", started, Duration::from_secs(1));
}

#[test]
fn criterion_03_forty_step_values() {
    let started = Instant::now();
    let exact = rational_to_f64(
        &rangewalk::exact_range::exact_mean_range(&WalkModel::Simple, 40).unwrap(),
    );
    assert!((exact - 10.16).abs() <= 0.005, "exact mean {exact}");
    let leading = mean_range_asymptotic(40, ApproxOrder::Leading).unwrap();
    assert!((leading - 10.09).abs() <= 0.005, "leading {leading}");
    let var = var_range_asymptotic(40).unwrap();
    assert!((var - 8.724).abs() <= 0.001, "variance {var}");
    finish("criterion-03 forty-step", started, Duration::from_secs(1));
}

#[test]
fn criterion_04_dp_enumeration_and_series_agree() {
    let started = Instant::now();
    for n in 0..=20u32 {
        let dp = exact_range_distribution(&WalkModel::Simple, n).unwrap();
        let bf = brute_force_distribution(&WalkModel::Simple, n).unwrap();
        assert_eq!(dp, bf, "simple walk distributions at n={n}");
    }
    for alpha in ["1/4", "1/2", "3/4"] {
        let model = WalkModel::persistent_from_str(alpha).unwrap();
        for n in 0..=16u32 {
            let dp = exact_range_distribution(&model, n).unwrap();
            let bf = brute_force_distribution(&model, n).unwrap();
            assert_eq!(dp, bf, "persistent alpha={alpha} distributions at n={n}");
        }
    }
    let series = big_delta_series(128).unwrap();
    let means = exact_mean_range_prefix(&WalkModel::Simple, 128).unwrap();
    for (n, mean) in means.iter().enumerate() {
        assert_eq!(series.coeff(n), Some(mean), "series coefficient at n={n}");
    }
    finish("criterion-04 oracle-triangle", started, Duration::from_secs(30));
}

#[test]
fn criterion_05_counting_lemma_and_telescoping() {
    let started = Instant::now();
    for k in 0..=11u32 {
        let (walks, paths) = lemma_counting_check(k).unwrap();
        assert_eq!(walks, paths, "counting pair at k={k}");
    }
    let means = exact_mean_range_prefix(&WalkModel::Simple, 128).unwrap();
    for n in 1..=128usize {
        let increment = &means[n] - &means[n - 1];
        assert_eq!(
            increment,
            new_site_probability(n as u32).to_rational(),
            "new-site increment at n={n}"
        );
    }
    finish("criterion-05 lemma-suite", started, Duration::from_secs(10));
}

#[test]
fn criterion_06_monte_carlo_simple_walk_moments() {
    let started = Instant::now();
    let n = 10_000u32;
    let report = estimate_range_moments(&WalkModel::Simple, n, 100_000, 42).unwrap();
    let mean_scaled = report.mean_range / (n as f64).sqrt();
    assert!(
        (mean_scaled / 1.59577 - 1.0).abs() < 0.01,
        "scaled mean {mean_scaled}"
    );
    let var_scaled = report.var_range / n as f64;
    assert!(
        (var_scaled / 0.21814 - 1.0).abs() < 0.05,
        "scaled variance {var_scaled}"
    );
    finish("criterion-06 monte-carlo-simple", started, Duration::from_secs(60));
}

#[test]
fn criterion_07_monte_carlo_persistent_walk_mean() {
    let started = Instant::now();
    let n = 10_000u32;
    let alpha = 0.75f64;
    let model = WalkModel::persistent_from_str("3/4").unwrap();
    let report = estimate_range_moments(&model, n, 100_000, 42).unwrap();
    let predicted = (8.0 * n as f64 * alpha / (PI * (1.0 - alpha))).sqrt();
    assert!(
        (report.mean_range / predicted - 1.0).abs() < 0.03,
        "persistent mean {} vs predicted {predicted}",
        report.mean_range
    );
    finish("criterion-07 monte-carlo-persistent", started, Duration::from_secs(90));
}

#[test]
fn criterion_08_correction_terms_beat_the_leading_order() {
    let started = Instant::now();
    let stirling = stirling_factorial(10, ApproxOrder::SecondCorrection).unwrap();
    assert!(
        (stirling / 3_628_800.0 - 1.0).abs() < 1e-5,
        "stirling 10! as {stirling}"
    );
    let means = exact_mean_range_prefix(&WalkModel::Simple, 128).unwrap();
    for n in 4..=128u32 {
        let exact = rational_to_f64(&means[n as usize]);
        let leading = mean_range_asymptotic(n, ApproxOrder::Leading).unwrap();
        let second = mean_range_asymptotic(n, ApproxOrder::SecondCorrection).unwrap();
        assert!(
            (second - exact).abs() < (leading - exact).abs(),
            "second correction not closer at n={n}"
        );
    }
    let exact = rational_to_f64(&means[128]);
    let leading = mean_range_asymptotic(128, ApproxOrder::Leading).unwrap();
    let scaled_gap = 128.0 * (exact / leading - 1.0);
    assert!(
        (0.2..0.3).contains(&scaled_gap),
        "scaled correction {scaled_gap}"
    );
    finish("criterion-08 corrections", started, Duration::from_secs(5));
}

#[test]
fn criterion_09_synthetic_market_recovers_pi() {
    let started = Instant::now();
    let config = SynthConfig {
        days: 10_000,
        steps_per_day: 23_400,
        tick: 0.01,
        start_price: 1000.0,
        seed: 1,
        model: WalkModel::Simple,
    };
    let days = synth_days(&config).unwrap();
    let full = analyze_days(&days, Window::All, RatioMode::SquaredMean).unwrap();
    assert_eq!(full.len(), 1);
    let pi_full = full[0].pi_estimate;
    assert!(
        (0.98 * PI..=1.02 * PI).contains(&pi_full),
        "full-sample estimate {pi_full}"
    );
    let monthly = analyze_days(&days, Window::Days(21), RatioMode::SquaredMean).unwrap();
    let mut estimates: Vec<f64> = monthly.iter().map(|r| r.pi_estimate).collect();
    estimates.sort_by(f64::total_cmp);
    let median = estimates[estimates.len() / 2];
    assert!(
        (median / PI - 1.0).abs() < 0.05,
        "monthly median {median}"
    );
    finish("criterion-09 market-pi", started, Duration::from_secs(120));
}

#[test]
fn criterion_10_volatility_and_pi_estimate_invert() {
    let started = Instant::now();
    // A deterministic spread of magnitudes; any nonzero ranges must do.
    let mut state = 0x2545_F491_4F6C_DD1Du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for scale in [1e-9, 1e-3, 1.0, 1e4, 1e9] {
        let ranges: Vec<f64> = (0..64)
            .map(|_| scale * (1.0 + (next() % 1_000_000) as f64 / 1_000.0))
            .collect();
        let vols = volatility_from_range(&ranges, 1).unwrap();
        for value in pi_estimate(&vols, &ranges, 1).unwrap() {
            assert!(
                (value / PI - 1.0).abs() <= 4.0 * f64::EPSILON,
                "recovered {value} at scale {scale}"
            );
        }
        // For wider windows the identity holds against the smoothed ranges,
        // since the forecast is built from SMA(R) rather than R itself.
        for window in [2usize, 5, 21, 64] {
            let vols = volatility_from_range(&ranges, window).unwrap();
            let smoothed = rangewalk::market::sma(&ranges, window).unwrap();
            for value in pi_estimate(&vols, &smoothed, 1).unwrap() {
                assert!(
                    (value / PI - 1.0).abs() <= 4.0 * f64::EPSILON,
                    "recovered {value} at window {window}, scale {scale}"
                );
            }
        }
    }
    finish("criterion-10 pi-inverse", started, Duration::from_secs(1));
}
