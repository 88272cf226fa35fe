//! Brute-force check of the uniquely-decodable conditions.
//!
//! Conditions 2 and 3 (distinct sum-pattern vectors, one-to-one mapping back
//! to the users' bits) are certified per symbol: if every column's `2^T`
//! signed sums are pairwise distinct then every sum-pattern *vector* is
//! distinct as well, and each column can be inverted on its own.

use super::{format_amp, UdasSet};
use crate::{Amp, Error, Result};

/// Largest `T` for which the `2^T` per-symbol enumeration is attempted.
pub const MAX_BRUTE_FORCE_ROWS: usize = 24;

/// One failed condition, located as precisely as possible.
///
/// Sign patterns are bit masks over rows: bit `t` set means row `t` is sent
/// with a `+` sign.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Condition 1: two rows share an element at a symbol.
    DuplicateElement { symbol: usize, rows: (usize, usize) },
    /// Conditions 2–3: two sign patterns give the same sum at a symbol.
    SumCollision {
        symbol: usize,
        patterns: (u32, u32),
        sum: Amp,
    },
    /// Condition 4: a row's power deviates from the set average.
    PowerImbalance { row: usize, deviation: f64 },
    /// Peak-to-average amplitude ratio above the configured bound.
    PeakToAverage { row: usize, ratio: f64 },
}

impl Violation {
    /// Condition label: `"1"`, `"2-3"`, `"4"` or `"papr"`.
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::DuplicateElement { .. } => "1",
            Violation::SumCollision { .. } => "2-3",
            Violation::PowerImbalance { .. } => "4",
            Violation::PeakToAverage { .. } => "papr",
        }
    }

    pub fn symbol(&self) -> Option<usize> {
        match self {
            Violation::DuplicateElement { symbol, .. } | Violation::SumCollision { symbol, .. } => {
                Some(*symbol)
            }
            _ => None,
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DuplicateElement { symbol, rows } => write!(
                f,
                "condition 1: rows {} and {} repeat an element at symbol {symbol}",
                rows.0, rows.1
            ),
            Violation::SumCollision {
                symbol,
                patterns,
                sum,
            } => write!(
                f,
                "condition 2-3: sign patterns {:#b} and {:#b} both sum to {} at symbol {symbol}",
                patterns.0,
                patterns.1,
                format_amp(*sum)
            ),
            Violation::PowerImbalance { row, deviation } => {
                write!(f, "condition 4: row {row} power deviates by {deviation}")
            }
            Violation::PeakToAverage { row, ratio } => {
                write!(f, "papr: row {row} peak-to-average amplitude ratio {ratio}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub condition1_ok: bool,
    pub condition2_3_ok: bool,
    pub power_ok: bool,
    pub papr_ok: bool,
    pub violations: Vec<Violation>,
    pub papr_max: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.condition1_ok && self.condition2_3_ok && self.power_ok && self.papr_ok
    }
}

/// Checks conditions 1–4 and the PAPR bound.
pub fn validate_udas(set: &UdasSet, power_tol: f64, papr_bound: f64) -> Result<ValidationReport> {
    let t = set.t();
    if t > MAX_BRUTE_FORCE_ROWS {
        return Err(Error::Capacity(format!(
            "T = {t} exceeds the brute-force limit of {MAX_BRUTE_FORCE_ROWS} rows"
        )));
    }
    let mut violations = Vec::new();

    for l in 0..set.l() {
        for a in 0..t {
            for b in a + 1..t {
                if set.element(a, l) == set.element(b, l) {
                    violations.push(Violation::DuplicateElement {
                        symbol: l,
                        rows: (a, b),
                    });
                }
            }
        }
    }
    let condition1_ok = violations.is_empty();

    let mut sums = vec![Amp::new(0, 0); 1 << t];
    let mut order: Vec<u32> = (0..1u32 << t).collect();
    let mut condition2_3_ok = true;
    for l in 0..set.l() {
        let column: Vec<Amp> = (0..t).map(|r| set.element(r, l)).collect();
        signed_sums(&column, &mut sums);
        order.sort_unstable_by_key(|&m| (sums[m as usize].re, sums[m as usize].im, m));
        let mut first: Option<(u32, u32)> = None;
        for pair in order.windows(2) {
            let (x, y) = (pair[0], pair[1]);
            if sums[x as usize] == sums[y as usize] {
                let candidate = (x.min(y), x.max(y));
                first = Some(first.map_or(candidate, |f| f.min(candidate)));
            }
        }
        if let Some(patterns) = first {
            condition2_3_ok = false;
            violations.push(Violation::SumCollision {
                symbol: l,
                patterns,
                sum: sums[patterns.0 as usize],
            });
        }
    }

    let p_avg = set.p_avg();
    let mut power_ok = true;
    for (row, p) in set.per_row_power().into_iter().enumerate() {
        let deviation = p - p_avg;
        if deviation.abs() > power_tol {
            power_ok = false;
            violations.push(Violation::PowerImbalance { row, deviation });
        }
    }

    let mut papr_ok = true;
    let mut papr_max = 0.0f64;
    for row in 0..t {
        let peak = set
            .row(row)
            .iter()
            .map(|a| (a.norm_sqr() as f64).sqrt())
            .fold(0.0, f64::max);
        let ratio = if p_avg > 0.0 { peak / p_avg.sqrt() } else { f64::INFINITY };
        papr_max = papr_max.max(ratio);
        if ratio > papr_bound {
            papr_ok = false;
            violations.push(Violation::PeakToAverage { row, ratio });
        }
    }

    Ok(ValidationReport {
        condition1_ok,
        condition2_3_ok,
        power_ok,
        papr_ok,
        violations,
        papr_max,
    })
}

/// `sums[mask] = Σ_t (±1) column[t]`, `+` where bit `t` of `mask` is set.
fn signed_sums(column: &[Amp], sums: &mut [Amp]) {
    sums[0] = -column.iter().sum::<Amp>();
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + column[low] * 2;
    }
}
