//! Large-horizon approximations for the walk range and their error table.
//!
//! The expected number of distinct sites grows like a square root,
//!
//! ```text
//! E(Delta_n) = sqrt(8n/pi) (1 + 1/(4n) - 1/(32n^2) + ...)
//! ```
//!
//! and the variance settles onto a straight line through the origin.  The
//! error table compares the leading term against the exact means row by
//! row, which is the honest way to see how fast the approximation becomes
//! usable.

use crate::combinatorics::ApproxOrder;
use crate::exact_range::exact_mean_range_prefix;
use crate::scalar::{format_fixed, rational_to_f64};
use crate::{Error, Result, WalkModel};

/// Slope of the large-n variance line, Var(Delta_n) ~ VAR_RANGE_SLOPE * n.
pub const VAR_RANGE_SLOPE: f64 = 0.2181;

/// Expected range of the simple walk after `n` steps, truncated after the
/// requested number of correction terms.
pub fn mean_range_asymptotic(n: u32, order: ApproxOrder) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroHorizon);
    }
    let n = f64::from(n);
    let leading = (8.0 * n / std::f64::consts::PI).sqrt();
    let correction = match order {
        ApproxOrder::Leading => 1.0,
        ApproxOrder::FirstCorrection => 1.0 + 1.0 / (4.0 * n),
        ApproxOrder::SecondCorrection => 1.0 + 1.0 / (4.0 * n) - 1.0 / (32.0 * n * n),
    };
    Ok(leading * correction)
}

/// Large-n variance of the range, Var(Delta_n) ~ 0.2181 n.
pub fn var_range_asymptotic(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroHorizon);
    }
    Ok(VAR_RANGE_SLOPE * f64::from(n))
}

/// Leading-order expected range of the persistent walk,
/// E(Delta_n) ~ sqrt(8 n alpha / (pi (1 - alpha))).
///
/// Persistence rescales the diffusion constant by alpha/(1 - alpha); at
/// alpha = 1/2 this collapses to the simple-walk leading term.
pub fn persistent_mean_asymptotic(n: u32, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroHorizon);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange);
    }
    let n = f64::from(n);
    Ok((8.0 * n * alpha / (std::f64::consts::PI * (1.0 - alpha))).sqrt())
}

/// One row of the exact-versus-leading-order comparison table.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorTableRow {
    pub n: u32,
    pub exact: f64,
    pub approx: f64,
    pub error: f64,
    pub pct_error: f64,
}

/// Exact means against the leading-order approximation for horizons
/// `0..=max_n`.  The horizon-0 row keeps the convention that the
/// approximation vanishes there, so its error is the full exact value.
pub fn error_table(max_n: u32) -> Result<Vec<ErrorTableRow>> {
    let means = exact_mean_range_prefix(&WalkModel::Simple, max_n)?;
    let rows = means
        .iter()
        .enumerate()
        .map(|(n, mean)| {
            let n = n as u32;
            let exact = rational_to_f64(mean);
            let approx = if n == 0 {
                0.0
            } else {
                (8.0 * f64::from(n) / std::f64::consts::PI).sqrt()
            };
            let error = exact - approx;
            ErrorTableRow {
                n,
                exact,
                approx,
                error,
                pct_error: 100.0 * error / exact,
            }
        })
        .collect();
    Ok(rows)
}

/// Plain-text rendering of the error table with fixed-width columns.
pub fn render_error_table(rows: &[ErrorTableRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>4}  {:>10}  {:>10}  {:>10}  {:>8}\n",
        "n", "exact", "approx", "error", "error%"
    ));
    for row in rows {
        out.push_str(&format!(
            "{:>4}  {:>10}  {:>10}  {:>10}  {:>8}\n",
            row.n,
            format_fixed(row.exact, 4),
            format_fixed(row.approx, 4),
            format_fixed(row.error, 4),
            format_fixed(row.pct_error, 2),
        ));
    }
    out
}

/// CSV rendering of the error table, same rounding as the text form.
pub fn error_table_csv(rows: &[ErrorTableRow]) -> String {
    let mut out = String::from("n,exact,approx,error,pct_error\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n,
            format_fixed(row.exact, 4),
            format_fixed(row.approx, 4),
            format_fixed(row.error, 4),
            format_fixed(row.pct_error, 2),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_range::exact_mean_range;

    #[test]
    fn leading_term_examples() {
        let m1 = mean_range_asymptotic(1, ApproxOrder::Leading).unwrap();
        assert!((m1 - (8.0 / std::f64::consts::PI).sqrt()).abs() < 1e-15);
        let m40 = mean_range_asymptotic(40, ApproxOrder::Leading).unwrap();
        assert!((m40 - 10.0925).abs() < 5e-5);
    }

    #[test]
    fn corrections_close_in_on_the_exact_mean() {
        // The residual left after the second correction oscillates in sign
        // with the parity of n, so the second term is only guaranteed to
        // tighten things on even horizons; both corrections always beat the
        // bare leading term.
        let exact: Vec<f64> = exact_mean_range_prefix(&WalkModel::Simple, 128)
            .unwrap()
            .iter()
            .map(rational_to_f64)
            .collect();
        for n in 4..=128u32 {
            let target = exact[n as usize];
            let e0 = (mean_range_asymptotic(n, ApproxOrder::Leading).unwrap() - target).abs();
            let e1 =
                (mean_range_asymptotic(n, ApproxOrder::FirstCorrection).unwrap() - target).abs();
            let e2 =
                (mean_range_asymptotic(n, ApproxOrder::SecondCorrection).unwrap() - target).abs();
            assert!(e1 < e0, "first correction regressed at n = {n}");
            assert!(e2 < e0, "second correction regressed at n = {n}");
            if n % 2 == 0 {
                assert!(e2 < e1, "second correction regressed at even n = {n}");
            }
        }
    }

    #[test]
    fn second_order_mean_at_horizon_forty() {
        let exact = rational_to_f64(&exact_mean_range(&WalkModel::Simple, 40).unwrap());
        let approx = mean_range_asymptotic(40, ApproxOrder::SecondCorrection).unwrap();
        assert!((exact - approx).abs() < 1e-3, "{exact} vs {approx}");
    }

    #[test]
    fn relative_gap_scales_like_a_quarter_over_n() {
        let exact = rational_to_f64(&exact_mean_range(&WalkModel::Simple, 128).unwrap());
        let leading = mean_range_asymptotic(128, ApproxOrder::Leading).unwrap();
        let scaled = 128.0 * (exact / leading - 1.0);
        assert!(scaled > 0.2 && scaled < 0.3, "scaled gap {scaled}");
    }

    #[test]
    fn variance_line_examples() {
        assert!((var_range_asymptotic(40).unwrap() - 8.724).abs() < 1e-12);
        let slope = var_range_asymptotic(10_000).unwrap() / 10_000.0;
        assert!((slope - VAR_RANGE_SLOPE).abs() < 1e-15);
    }

    #[test]
    fn persistent_mean_reduces_to_simple_at_half() {
        for n in [1u32, 7, 100, 4096] {
            let simple = mean_range_asymptotic(n, ApproxOrder::Leading).unwrap();
            let persistent = persistent_mean_asymptotic(n, 0.5).unwrap();
            assert!((simple - persistent).abs() <= 1e-12 * simple);
        }
    }

    #[test]
    fn persistence_rescales_the_mean_by_root_three_at_three_quarters() {
        let simple = mean_range_asymptotic(10_000, ApproxOrder::Leading).unwrap();
        let persistent = persistent_mean_asymptotic(10_000, 0.75).unwrap();
        assert!((persistent / simple - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(mean_range_asymptotic(0, ApproxOrder::Leading).is_err());
        assert!(var_range_asymptotic(0).is_err());
        assert!(persistent_mean_asymptotic(0, 0.5).is_err());
        assert!(persistent_mean_asymptotic(10, 0.0).is_err());
        assert!(persistent_mean_asymptotic(10, 1.0).is_err());
    }

    #[test]
    fn table_matches_hand_rounded_values() {
        let rows = error_table(7).unwrap();
        assert_eq!(rows.len(), 8);
        let cell = |v: f64, d: usize| format_fixed(v, d);
        let got: Vec<[String; 4]> = rows
            .iter()
            .map(|r| {
                [
                    cell(r.exact, 4),
                    cell(r.approx, 4),
                    cell(r.error, 4),
                    cell(r.pct_error, 2),
                ]
            })
            .collect();
        let want = [
            ["1.0000", "0.0000", "1.0000", "100.00"],
            ["2.0000", "1.5958", "0.4042", "20.21"],
            ["2.5000", "2.2568", "0.2432", "9.73"],
            ["3.0000", "2.7640", "0.2360", "7.87"],
            ["3.3750", "3.1915", "0.1835", "5.44"],
            ["3.7500", "3.5682", "0.1818", "4.85"],
            ["4.0625", "3.9088", "0.1537", "3.78"],
            ["4.3750", "4.2220", "0.1530", "3.50"],
        ];
        for (n, (g, w)) in got.iter().zip(&want).enumerate() {
            assert_eq!(g, w, "row {n}");
        }
    }

    #[test]
    fn csv_table_round_trips_the_same_strings() {
        let rows = error_table(3).unwrap();
        let csv = error_table_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n,exact,approx,error,pct_error");
        assert_eq!(lines.next().unwrap(), "0,1.0000,0.0000,1.0000,100.00");
        assert_eq!(lines.next().unwrap(), "1,2.0000,1.5958,0.4042,20.21");
        assert_eq!(lines.next().unwrap(), "2,2.5000,2.2568,0.2432,9.73");
        assert_eq!(lines.next().unwrap(), "3,3.0000,2.7640,0.2360,7.87");
        assert!(lines.next().is_none());
    }

    #[test]
    fn rendered_table_keeps_columns_aligned() {
        let rows = error_table(7).unwrap();
        let text = render_error_table(&rows);
        let widths: Vec<usize> = text.lines().map(str::len).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
        assert!(text.contains("0.4042"));
    }

    #[test]
    fn percentage_error_shrinks_with_the_horizon() {
        let rows = error_table(64).unwrap();
        for pair in rows[1..].windows(2) {
            assert!(
                pair[1].pct_error < pair[0].pct_error,
                "n = {} did not improve",
                pair[1].n
            );
        }
    }
}
