use crate::phy::ModSpec;
use crate::receiver::SumPatternCatalog;
use crate::udas::UdasSet;
use crate::{binomial, Error, Result};
use std::collections::BTreeMap;

/// One noiseless frame energy `s²` and its probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaAtom {
    pub energy: u64,
    pub weight: f64,
}

impl SaAtom {
    /// Root energy `s`, the noncentrality of the received energy statistic.
    pub fn s(&self) -> f64 {
        (self.energy as f64).sqrt()
    }
}

/// Distribution of the noiseless frame energy `Σ |w|²` over `M` rows when
/// `τ` users are active, with the user combination uniform over all
/// `C(T, τ)` choices and every symbol uniform over its `𝓜` values.
#[derive(Debug, Clone, PartialEq)]
pub struct SaDistribution {
    pub tau: usize,
    pub rows: usize,
    pub symbols: usize,
    pub dims: usize,
    /// Ascending in energy, all weights positive.
    pub atoms: Vec<SaAtom>,
}

impl SaDistribution {
    /// Real degrees of freedom of the received frame, `2·L·M·𝓜₁`.
    pub fn dofs(&self) -> usize {
        2 * self.symbols * self.rows * self.dims
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn mean_energy(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight * a.energy as f64).sum()
    }
}

/// Builds the frame-energy mixture from the sum-pattern catalogs.
///
/// Each symbol's energy distribution is read off its catalog, the row
/// distribution is their convolution over `L` symbols, the frame
/// distribution the `M`-fold convolution of the row, and the combinations
/// are averaged with equal weight.
pub fn sa_distribution(set: &UdasSet, tau: usize, rows: usize, spec: ModSpec) -> Result<SaDistribution> {
    if tau == 0 || tau > set.t() {
        return Err(Error::Parameter(format!("tau = {tau} outside [1, {}]", set.t())));
    }
    if rows == 0 {
        return Err(Error::Parameter("at least one frame row is needed".into()));
    }
    let combos = binomial(set.t(), tau) as usize;
    let mut frame_total: Vec<f64> = Vec::new();
    for mu in 1..=combos {
        let catalog = SumPatternCatalog::new(set, tau, mu, spec)?;
        let mut row = vec![1.0];
        for l in 0..set.l() {
            row = convolve_sparse(&row, &symbol_energies(&catalog, l));
        }
        let row_atoms: Vec<(usize, f64)> = row.iter().copied().enumerate().filter(|&(_, w)| w > 0.0).collect();
        let mut frame = vec![1.0];
        for _ in 0..rows {
            frame = convolve_sparse(&frame, &row_atoms);
        }
        if frame_total.len() < frame.len() {
            frame_total.resize(frame.len(), 0.0);
        }
        for (acc, w) in frame_total.iter_mut().zip(&frame) {
            *acc += w / combos as f64;
        }
    }
    let atoms = frame_total
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w > 0.0)
        .map(|(e, &w)| SaAtom {
            energy: e as u64,
            weight: w,
        })
        .collect();
    Ok(SaDistribution {
        tau,
        rows,
        symbols: set.l(),
        dims: spec.dims(),
        atoms,
    })
}

/// Energy distribution of symbol `l` over the equiprobable candidates.
fn symbol_energies(catalog: &SumPatternCatalog, l: usize) -> Vec<(usize, f64)> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for k in 0..catalog.count() {
        let e: f64 = catalog.value(l, k).iter().map(|v| v.norm_sqr()).sum();
        *counts.entry(e.round() as usize).or_default() += 1;
    }
    let n = catalog.count() as f64;
    counts.into_iter().map(|(e, c)| (e, c as f64 / n)).collect()
}

fn convolve_sparse(dense: &[f64], sparse: &[(usize, f64)]) -> Vec<f64> {
    let top = sparse.iter().map(|&(e, _)| e).max().unwrap_or(0);
    let mut out = vec![0.0; dense.len() + top];
    for (i, &a) in dense.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for &(e, b) in sparse {
            out[i + e] += a * b;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::udas::fixtures::{block6, cyclic4};
    use proptest::prelude::*;
    use statrs::distribution::{Binomial, Discrete};

    type Mixture = BTreeMap<u64, f64>;

    fn binom_pmf(n: usize, k: usize) -> f64 {
        Binomial::new(0.5, n as u64).unwrap().pmf(k as u64)
    }

    fn as_map(d: &SaDistribution) -> Mixture {
        d.atoms.iter().map(|a| (a.energy, a.weight)).collect()
    }

    /// Closed-form mixtures of the 4×4 cyclic set at `M` rows (`LM` terms).
    fn closed_form(tau: usize, m: usize) -> Mixture {
        let lm = 4 * m;
        let mut mix = Mixture::new();
        let mut add = |e: usize, w: f64| *mix.entry(e as u64).or_default() += w;
        match tau {
            1 => add(10 * m, 1.0),
            2 => {
                add(20 * m, 2.0 / 3.0);
                for k in 0..=lm {
                    add(9 * k + lm - k, binom_pmf(lm, k) / 3.0);
                }
            }
            3 => {
                for k in 0..=lm {
                    add(9 * k + lm - k + 10 * m, binom_pmf(lm, k));
                }
            }
            4 => {
                let nf = 2 * lm;
                for k in 0..=nf {
                    add(9 * k + nf - k, binom_pmf(nf, k));
                }
            }
            _ => unreachable!(),
        }
        mix
    }

    #[test]
    fn reproduces_closed_form_cases() {
        let set = cyclic4();
        let spec = ModSpec::new(2).unwrap();
        for m in [1, 3, 7, 20] {
            for tau in 1..=4 {
                let got = as_map(&sa_distribution(&set, tau, m, spec).unwrap());
                let want = closed_form(tau, m);
                assert_eq!(got.keys().collect::<Vec<_>>(), want.keys().collect::<Vec<_>>(), "τ={tau} M={m}");
                for (e, w) in &want {
                    assert!((got[e] / w - 1.0).abs() < 1e-10, "τ={tau} M={m} s²={e}: {} vs {w}", got[e]);
                }
            }
        }
    }

    #[test]
    fn single_user_is_deterministic() {
        let d = sa_distribution(&block6(), 1, 9, ModSpec::new(2).unwrap()).unwrap();
        assert_eq!(d.atoms.len(), 1);
        assert_eq!(d.atoms[0].energy, 6 * 9 * 7);
        assert_eq!(d.dofs(), 2 * 6 * 9);
    }

    #[test]
    fn rejects_bad_arguments() {
        let spec = ModSpec::new(2).unwrap();
        assert!(sa_distribution(&cyclic4(), 0, 3, spec).is_err());
        assert!(sa_distribution(&cyclic4(), 5, 3, spec).is_err());
        assert!(sa_distribution(&cyclic4(), 2, 0, spec).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn normalised_with_expected_mean(tau in 1usize..=4, m in 1usize..40, order in prop::sample::select(vec![2usize, 4, 8])) {
            let set = cyclic4();
            let d = sa_distribution(&set, tau, m, ModSpec::new(order).unwrap()).unwrap();
            prop_assert!((d.total_weight() - 1.0).abs() < 1e-12);
            let want = (tau * m * set.l()) as f64 * set.p_avg();
            prop_assert!((d.mean_energy() / want - 1.0).abs() < 1e-10);
            prop_assert!(d.atoms.windows(2).all(|w| w[0].energy < w[1].energy));
        }
    }
}
