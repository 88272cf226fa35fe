use super::SumPatternCatalog;
use crate::phy::{ModSpec, ReceivedFrame};
use crate::udas::UdasSet;
use crate::{binomial, Error, Result};

/// Work limit (candidate evaluations) for [`map_oracle`].
pub const MAX_ORACLE_WORK: u64 = 1 << 26;

/// Jointly most probable user count, combination and bits.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDecision {
    pub tau: usize,
    pub mu: usize,
    /// `bits[ν][m]`: the `N` frame bits of active user `ν`, row `m`.
    pub bits: Vec<Vec<Vec<u8>>>,
    /// `‖y − w‖²` of the winning hypothesis.
    pub distance: f64,
}

/// Exhaustive maximisation of `P_τ · exp(−‖y − w‖² / N0)` over `τ`, `μ` and
/// every user's bits.
///
/// `priors[τ − 1]` is the probability of `τ` active users. Rows are
/// independent given `(τ, μ)`, so each row is maximised on its own; with
/// `row_parity` only bit patterns whose sign bits have even parity per user
/// and row are admitted (found exactly by dynamic programming over the
/// running parity vector). With `N0 = 0` the smallest distance wins and the
/// prior only breaks ties.
pub fn map_oracle(
    y: &ReceivedFrame,
    set: &UdasSet,
    spec: ModSpec,
    priors: &[f64],
    row_parity: bool,
) -> Result<MapDecision> {
    let t = set.t();
    if priors.len() != t || y.symbols() != set.l() || y.dims() != spec.dims() {
        return Err(Error::Size("priors, set and frame disagree in shape".into()));
    }
    let per_row = (y.rows() * y.symbols()) as u64;
    let work: u64 = (1..=t)
        .map(|tau| {
            let cands = (spec.mod_order() as u64).saturating_pow(tau as u32);
            binomial(t, tau)
                .saturating_mul(per_row)
                .saturating_mul(cands)
                .saturating_mul(1 << tau)
        })
        .fold(0u64, u64::saturating_add);
    if work > MAX_ORACLE_WORK {
        return Err(Error::Capacity(format!(
            "exhaustive search needs {work} evaluations (limit {MAX_ORACLE_WORK})"
        )));
    }
    let n0 = y.n0;
    let score = |prior: f64, d: f64| -> (f64, f64) {
        if n0 > 0.0 {
            (prior.ln() - d / n0, 0.0)
        } else {
            (-d, prior.ln())
        }
    };
    let mut best: Option<((f64, f64), MapDecision)> = None;
    for tau in 1..=t {
        if !(priors[tau - 1] > 0.0) {
            continue;
        }
        for mu in 1..=binomial(t, tau) as usize {
            let catalog = SumPatternCatalog::new(set, tau, mu, spec)?;
            let mut distance = 0.0;
            let mut choices = Vec::with_capacity(y.rows());
            for m in 0..y.rows() {
                let (d, ks) = best_row(y, &catalog, m, row_parity);
                distance += d;
                choices.push(ks);
            }
            let s = score(priors[tau - 1], distance);
            if best.as_ref().is_none_or(|(b, _)| s > *b) {
                let bits = labels_to_bits(&catalog, &choices);
                best = Some((
                    s,
                    MapDecision {
                        tau,
                        mu,
                        bits,
                        distance,
                    },
                ));
            }
        }
    }
    best.map(|(_, d)| d)
        .ok_or_else(|| Error::Parameter("all priors are zero".into()))
}

/// Smallest row distance and the candidate chosen at each symbol.
fn best_row(y: &ReceivedFrame, catalog: &SumPatternCatalog, m: usize, row_parity: bool) -> (f64, Vec<usize>) {
    let symbols = y.symbols();
    let tau = catalog.tau;
    let states = if row_parity { 1usize << tau } else { 1 };
    let sign_vector = |k: usize| -> usize {
        (0..tau).fold(0, |acc, nu| acc | (catalog.user_symbol(k, nu) & 1) << nu)
    };
    let mut cost = vec![f64::INFINITY; states];
    cost[0] = 0.0;
    // back[l][state] = (previous state, candidate)
    let mut back = vec![vec![(0usize, 0usize); states]; symbols];
    let mut dist = Vec::new();
    for (l, back_l) in back.iter_mut().enumerate() {
        catalog.distances(l, y.symbol(m, l), &mut dist);
        let mut next = vec![f64::INFINITY; states];
        for (state, &c) in cost.iter().enumerate() {
            if c == f64::INFINITY {
                continue;
            }
            for (k, &d) in dist.iter().enumerate() {
                let to = if row_parity { state ^ sign_vector(k) } else { 0 };
                if c + d < next[to] {
                    next[to] = c + d;
                    back_l[to] = (state, k);
                }
            }
        }
        cost = next;
    }
    let mut ks = vec![0; symbols];
    let mut state = 0;
    for l in (0..symbols).rev() {
        let (prev, k) = back[l][state];
        ks[l] = k;
        state = prev;
    }
    (cost[0], ks)
}

fn labels_to_bits(catalog: &SumPatternCatalog, choices: &[Vec<usize>]) -> Vec<Vec<Vec<u8>>> {
    let mb = catalog.spec().bits_per_symbol();
    (0..catalog.tau)
        .map(|nu| {
            choices
                .iter()
                .map(|ks| {
                    ks.iter()
                        .flat_map(|&k| {
                            let sym = catalog.user_symbol(k, nu);
                            (0..mb).map(move |b| (sym >> (mb - 1 - b) & 1) as u8)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}
