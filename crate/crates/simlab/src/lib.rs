//! Experiment driver for UDAS grant-free multiple access: set construction
//! and checking, seeded Monte-Carlo runs and theory tables, all emitted as
//! CSV.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod runner;

pub use config::{ExperimentConfig, Kind};
pub use error::{Result, SimError};
pub use output::Table;

use udas_core::udas::{enumerate_sum_patterns, validate_udas, UdasSet, DEFAULT_PAPR_BOUND, DEFAULT_POWER_TOL};
use udas_core::binomial;

/// One line per active subset and symbol: mean sum-pattern power and the
/// largest real / imaginary sums. `tau` and `mu` restrict the listing.
pub fn sum_pattern_table(set: &UdasSet, tau: Option<usize>, mu: Option<usize>) -> Result<Table> {
    let mut table = Table::new(&["tau", "mu", "rows", "symbol", "lambda", "kappa_re", "kappa_im", "lambda_sum"]);
    let taus: Vec<usize> = match tau {
        Some(t) => vec![t],
        None => (1..=set.t()).collect(),
    };
    for tau in taus {
        let mus: Vec<usize> = match mu {
            Some(m) => vec![m],
            None => (1..=binomial(set.t(), tau) as usize).collect(),
        };
        for mu in mus {
            let sp = enumerate_sum_patterns(set, tau, mu)?;
            let rows: Vec<String> = sp.active_rows.iter().map(|r| (r + 1).to_string()).collect();
            for l in 0..set.l() {
                table.push(vec![
                    tau.to_string(),
                    mu.to_string(),
                    rows.join(" "),
                    (l + 1).to_string(),
                    sp.lambda[l].to_string(),
                    sp.kappa_re[l].to_string(),
                    sp.kappa_im[l].to_string(),
                    sp.lambda_sum.to_string(),
                ]);
            }
        }
    }
    Ok(table)
}

/// Human-readable report and overall verdict.
pub fn validation_text(set: &UdasSet, power_tol: Option<f64>, papr_bound: Option<f64>) -> Result<(String, bool)> {
    let report = validate_udas(
        set,
        power_tol.unwrap_or(DEFAULT_POWER_TOL),
        papr_bound.unwrap_or(DEFAULT_PAPR_BOUND),
    )?;
    let verdict = |ok: bool| if ok { "ok" } else { "FAILED" };
    let mut out = format!(
        "T = {}, L = {}, P_avg = {}\ncondition 1: {}\ncondition 2-3: {}\ncondition 4: {}\npapr: {} (max {:.4})\n",
        set.t(),
        set.l(),
        set.p_avg(),
        verdict(report.condition1_ok),
        verdict(report.condition2_3_ok),
        verdict(report.power_ok),
        verdict(report.papr_ok),
        report.papr_max,
    );
    for v in &report.violations {
        out.push_str(&format!("  {v}\n"));
    }
    out.push_str(if report.is_valid() { "valid\n" } else { "invalid\n" });
    Ok((out, report.is_valid()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use udas_core::udas::build_cyclic;
    use udas_core::Amp;

    #[test]
    fn sum_pattern_listing() {
        let set = build_cyclic(&[Amp::new(1, 0), Amp::new(0, 1), Amp::new(2, 0), Amp::new(0, 2)]).unwrap();
        let all = sum_pattern_table(&set, None, None).unwrap();
        assert_eq!(all.rows.len(), 15 * 4);
        let one = sum_pattern_table(&set, Some(2), Some(1)).unwrap();
        assert_eq!(one.rows[0], ["2", "1", "1 2", "1", "5", "1", "2", "20"]);
    }

    #[test]
    fn report_lists_violations() {
        let bad = UdasSet::adhoc(vec![vec![Amp::new(1, 0)], vec![Amp::new(1, 0)]]).unwrap();
        let (text, ok) = validation_text(&bad, None, None).unwrap();
        assert!(!ok);
        assert!(text.contains("rows 0 and 1 repeat an element at symbol 0"));
        assert!(text.ends_with("invalid\n"));
    }
}
