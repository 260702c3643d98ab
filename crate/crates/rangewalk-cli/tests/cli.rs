//! End-to-end tests of the `rangewalk` binary: output shape, exit codes,
//! and the synth -> analyze round trip through real files.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rangewalk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn assert_code(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        stdout_of(output),
        stderr_of(output)
    );
}

#[test]
fn table_matches_the_pinned_rows() {
    let output = run(&["table"]);
    assert_code(&output, 0);
    let text = stdout_of(&output);
    for needle in [
        "n       exact      approx       error    error%",
        "1      2.0000      1.5958      0.4042     20.21",
        "4      3.3750      3.1915      0.1835      5.44",
        "7      4.3750      4.2220      0.1530      3.50",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
    }
}

#[test]
fn table_csv_has_the_same_numbers() {
    let output = run(&["table", "--format", "csv", "--max-n", "2"]);
    assert_code(&output, 0);
    let text = stdout_of(&output);
    assert_eq!(
        text,
        "n,exact,approx,error,pct_error\n\
         0,1.0000,0.0000,1.0000,100.00\n\
         1,2.0000,1.5958,0.4042,20.21\n\
         2,2.5000,2.2568,0.2432,9.73\n"
    );
}

#[test]
fn exact_zero_horizon_is_the_point_mass() {
    let output = run(&["exact", "--n", "0"]);
    assert_code(&output, 0);
    let text = stdout_of(&output);
    assert!(text.contains("mean: 1 (1)"));
    assert!(text.contains("variance: 0 (0)"));
}

#[test]
fn exact_json_carries_rational_and_float_forms() {
    let output = run(&["exact", "--n", "4", "--format", "json"]);
    assert_code(&output, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&output)).expect("json");
    assert_eq!(doc["mean"], "27/8");
    assert_eq!(doc["meanFloat"], 3.375);
    assert_eq!(doc["variance"], "47/64");
    assert_eq!(doc["model"]["kind"], "simple");
}

#[test]
fn exact_distribution_csv_sums_to_one() {
    let output = run(&["exact", "--n", "6", "--dist", "--format", "csv"]);
    assert_code(&output, 0);
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,probability,float"));
    let total: f64 = lines
        .map(|line| line.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12, "total mass {total}");
}

#[test]
fn usage_errors_exit_one() {
    assert_code(&run(&["exact"]), 1);
    assert_code(&run(&["bogus"]), 1);
    assert_code(&run(&["approx", "--n", "4", "--order", "9"]), 1);
    assert_code(&run(&["series", "--which", "DELTA", "--terms", "3"]), 1);
    assert_code(&run(&["market", "analyze"]), 1);
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_code(&help, 0);
    let text = stdout_of(&help);
    for name in ["exact", "approx", "table", "series", "simulate", "market", "check"] {
        assert!(text.contains(name), "help does not mention {name}");
    }
    assert_code(&run(&["--version"]), 0);
    assert_code(&run(&["market", "--help"]), 0);
}

#[test]
fn data_errors_exit_two() {
    let too_large = run(&["exact", "--n", "600"]);
    assert_code(&too_large, 2);
    assert!(stderr_of(&too_large).starts_with("error:"));

    let bad_alpha = run(&["exact", "--n", "4", "--alpha", "5/4"]);
    assert_code(&bad_alpha, 2);

    let missing_file = run(&["market", "analyze", "--daily", "/does/not/exist.csv"]);
    assert_code(&missing_file, 2);
    assert!(stderr_of(&missing_file).contains("/does/not/exist.csv"));
}

#[test]
fn series_names_are_case_sensitive() {
    let little = run(&["series", "--which", "delta", "--terms", "4"]);
    let big = run(&["series", "--which", "Delta", "--terms", "4"]);
    assert_code(&little, 0);
    assert_code(&big, 0);
    let little = stdout_of(&little);
    let big = stdout_of(&big);
    assert_ne!(little, big);
    assert!(little.contains("1,1,1"), "new-site series starts 1,1:\n{little}");
    assert!(big.contains("1,2,2"), "mean-range series starts 1,2:\n{big}");
}

#[test]
fn simulate_report_is_shard_invariant() {
    let one = run(&["simulate", "--n", "200", "--reps", "2000", "--seed", "3"]);
    let eight = run(&[
        "simulate", "--n", "200", "--reps", "2000", "--seed", "3", "--shards", "8",
    ]);
    assert_code(&one, 0);
    assert_code(&eight, 0);
    assert_eq!(stdout_of(&one), stdout_of(&eight));
    assert!(stderr_of(&one).contains("elapsed:"));
}

#[test]
fn simulate_json_preserves_field_order() {
    let output = run(&["simulate", "--n", "10", "--reps", "10", "--seed", "1"]);
    assert_code(&output, 0);
    let text = stdout_of(&output);
    let order = ["model", "horizon", "replications", "meanRange", "varRange", "stdErrorOfMean", "seeds"];
    let mut last = 0;
    for key in order {
        let pos = text.find(&format!("\"{key}\"")).unwrap_or_else(|| panic!("{key} missing"));
        assert!(pos > last || key == "model", "{key} out of order in {text}");
        last = pos;
    }
    assert!(!text.contains("elapsed"));
}

#[test]
fn check_passes_cleanly() {
    let output = run(&["check"]);
    assert_code(&output, 0);
    let text = stdout_of(&output);
    assert!(text.contains("all 8 checks passed"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

fn read_to_string(path: &Path) -> String {
    std::fs::read_to_string(path).expect("file readable")
}

#[test]
fn synth_then_analyze_recovers_pi() {
    let dir = tempfile::tempdir().expect("tempdir");
    let days = dir.path().join("days.csv");
    let days_arg = days.to_str().unwrap();
    let synth = run(&[
        "market", "synth", "--days", "80", "--steps", "1600", "--tick", "0.01",
        "--seed", "11", "--out", days_arg,
    ]);
    assert_code(&synth, 0);

    let text = read_to_string(&days);
    assert!(text.starts_with("date,open,high,low,close,realized_var\n"));
    assert_eq!(text.lines().count(), 81);
    assert!(text.contains("2000-01-01,"));

    let analyze = run(&[
        "market", "analyze", "--daily", days_arg, "--window", "all", "--format", "csv",
    ]);
    assert_code(&analyze, 0);
    let report = stdout_of(&analyze);
    let row = report.lines().nth(1).expect("one report row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "80");
    let pi_estimate: f64 = fields[4].parse().expect("piEstimate parses");
    assert!(
        (pi_estimate - std::f64::consts::PI).abs() < 0.25 * std::f64::consts::PI,
        "pi estimate {pi_estimate} too far from pi"
    );
}

#[test]
fn tick_data_fills_missing_variance() {
    let dir = tempfile::tempdir().expect("tempdir");
    let days = dir.path().join("days.csv");
    let ticks = dir.path().join("ticks.csv");
    let bare = dir.path().join("bare.csv");
    let synth = run(&[
        "market", "synth", "--days", "12", "--steps", "300", "--tick", "0.02",
        "--seed", "4", "--out", days.to_str().unwrap(), "--ticks-out", ticks.to_str().unwrap(),
    ]);
    assert_code(&synth, 0);

    // Strip the realized_var column so analyze has to rebuild it from ticks.
    let stripped: String = read_to_string(&days)
        .lines()
        .map(|line| {
            let mut fields = line.split(',');
            let head: Vec<&str> = fields.by_ref().take(5).collect();
            head.join(",") + "\n"
        })
        .collect();
    std::fs::write(&bare, stripped).expect("write bare csv");

    let direct = run(&[
        "market", "analyze", "--daily", days.to_str().unwrap(),
        "--window", "all", "--format", "csv",
    ]);
    let filled = run(&[
        "market", "analyze", "--daily", bare.to_str().unwrap(),
        "--ticks", ticks.to_str().unwrap(), "--window", "all", "--format", "csv",
    ]);
    assert_code(&direct, 0);
    assert_code(&filled, 0);

    let value = |output: &Output, field: usize| -> f64 {
        stdout_of(output)
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(field)
            .unwrap()
            .parse()
            .unwrap()
    };
    let direct_pi = value(&direct, 4);
    let filled_pi = value(&filled, 4);
    assert!(
        (direct_pi - filled_pi).abs() < 1e-9 * direct_pi.abs(),
        "direct {direct_pi} vs tick-filled {filled_pi}"
    );

    let without_ticks = run(&[
        "market", "analyze", "--daily", bare.to_str().unwrap(),
        "--window", "all", "--format", "csv",
    ]);
    assert_code(&without_ticks, 2);
    assert!(stderr_of(&without_ticks).contains("realized variance missing"));
}

#[test]
fn synth_is_deterministic_across_runs() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let output = run(&[
            "market", "synth", "--days", "5", "--steps", "50", "--seed", "99",
            "--out", out.to_str().unwrap(),
        ]);
        assert_code(&output, 0);
    }
    assert_eq!(read_to_string(&a), read_to_string(&b));
}

#[test]
fn persistent_alpha_flows_through_simulate() {
    let output = run(&[
        "simulate", "--n", "100", "--reps", "400", "--seed", "2",
        "--alpha", "3/4", "--format", "csv",
    ]);
    assert_code(&output, 0);
    let text = stdout_of(&output);
    assert!(text.starts_with("model,horizon,replications,meanRange,varRange,stdErrorOfMean,seeds"));
    assert!(text.contains("persistent(alpha=3/4),100,400,"));
}
