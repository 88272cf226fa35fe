use super::UdasSet;
use crate::{combination_rows, Amp, Error, Result};

/// Superposition catalog of one active subset `(tau, mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumPatternTable {
    pub tau: usize,
    /// 1-based lexicographic combination index.
    pub mu: usize,
    pub active_rows: Vec<usize>,
    /// `omega[l][mask]`: signed sum at symbol `l`, where bit `ν` of `mask`
    /// set means active user `ν` (the `ν`-th entry of `active_rows`) sends `+`.
    pub omega: Vec<Vec<Amp>>,
    /// Mean sum-pattern power per symbol, `Σ_ν |e_{t_ν,l}|²`.
    pub lambda: Vec<f64>,
    pub kappa_re: Vec<i64>,
    pub kappa_im: Vec<i64>,
    pub lambda_sum: f64,
}

impl SumPatternTable {
    /// Distinct members of `omega[l]`, sorted by (re, im).
    pub fn omega_set(&self, l: usize) -> Vec<Amp> {
        let mut v = self.omega[l].clone();
        v.sort_by_key(|a| (a.re, a.im));
        v.dedup();
        v
    }
}

pub fn enumerate_sum_patterns(set: &UdasSet, tau: usize, mu: usize) -> Result<SumPatternTable> {
    let active_rows = combination_rows(set.t(), tau, mu)?;
    if tau > 30 {
        return Err(Error::Capacity(format!("2^{tau} sign patterns per symbol")));
    }
    let mut omega = Vec::with_capacity(set.l());
    let mut lambda = Vec::with_capacity(set.l());
    let mut kappa_re = Vec::with_capacity(set.l());
    let mut kappa_im = Vec::with_capacity(set.l());
    for l in 0..set.l() {
        let elems: Vec<Amp> = active_rows.iter().map(|&t| set.element(t, l)).collect();
        let sums: Vec<Amp> = (0u32..1 << tau)
            .map(|mask| {
                elems
                    .iter()
                    .enumerate()
                    .map(|(nu, &e)| if mask >> nu & 1 == 1 { e } else { -e })
                    .sum()
            })
            .collect();
        kappa_re.push(sums.iter().map(|w| w.re).max().unwrap_or(0));
        kappa_im.push(sums.iter().map(|w| w.im).max().unwrap_or(0));
        lambda.push(elems.iter().map(|e| e.norm_sqr()).sum::<i64>() as f64);
        omega.push(sums);
    }
    let lambda_sum = lambda.iter().sum();
    Ok(SumPatternTable {
        tau,
        mu,
        active_rows,
        omega,
        lambda,
        kappa_re,
        kappa_im,
        lambda_sum,
    })
}

/// `τ · L · P_avg`, the total sum-pattern power of any `τ`-subset of a set
/// with equal row powers.
pub fn lambda_sum(set: &UdasSet, tau: usize) -> Result<f64> {
    if tau == 0 || tau > set.t() {
        return Err(Error::Parameter(format!("tau = {tau} outside [1, {}]", set.t())));
    }
    Ok(tau as f64 * set.l() as f64 * set.p_avg())
}
