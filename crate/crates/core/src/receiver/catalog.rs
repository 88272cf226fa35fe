use crate::phy::ModSpec;
use crate::udas::UdasSet;
use crate::{combination_rows, Cplx, Error, Result};

/// Largest number of joint candidates per symbol a catalog may hold.
pub const MAX_CANDIDATES: usize = 1 << 20;

/// Every joint (location, sign) assignment of the active users at each
/// symbol, with its noiseless received vector.
///
/// Candidate `k` gives user `ν` (the `ν`-th active row) the symbol label
/// `(k / 𝓜^ν) mod 𝓜`, whose binary form is the user's location bits
/// followed by its sign bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SumPatternCatalog {
    pub tau: usize,
    pub mu: usize,
    pub active_rows: Vec<usize>,
    spec: ModSpec,
    count: usize,
    /// `values[l][k·dims + i]`
    values: Vec<Vec<Cplx>>,
}

impl SumPatternCatalog {
    pub fn new(set: &UdasSet, tau: usize, mu: usize, spec: ModSpec) -> Result<SumPatternCatalog> {
        let active_rows = combination_rows(set.t(), tau, mu)?;
        let order = spec.mod_order();
        let count = (0..tau)
            .try_fold(1usize, |acc, _| acc.checked_mul(order))
            .filter(|&c| c <= MAX_CANDIDATES)
            .ok_or_else(|| Error::Capacity(format!("{order}^{tau} candidates per symbol")))?;
        let dims = spec.dims();
        let values = (0..set.l())
            .map(|l| {
                let elems: Vec<Cplx> = active_rows
                    .iter()
                    .map(|&t| {
                        let e = set.element(t, l);
                        Cplx::new(e.re as f64, e.im as f64)
                    })
                    .collect();
                let mut table = vec![Cplx::new(0.0, 0.0); count * dims];
                for k in 0..count {
                    let mut rest = k;
                    for e in &elems {
                        let sym = rest % order;
                        rest /= order;
                        let sign = if sym & 1 == 1 { 1.0 } else { -1.0 };
                        table[k * dims + (sym >> 1)] += e * sign;
                    }
                }
                table
            })
            .collect();
        Ok(SumPatternCatalog {
            tau,
            mu,
            active_rows,
            spec,
            count,
            values,
        })
    }

    pub fn spec(&self) -> ModSpec {
        self.spec
    }

    /// Candidates per symbol, `𝓜^τ`.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn symbols(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, l: usize, k: usize) -> &[Cplx] {
        let d = self.spec.dims();
        &self.values[l][k * d..(k + 1) * d]
    }

    /// Symbol label of user `nu` in candidate `k`.
    pub fn user_symbol(&self, k: usize, nu: usize) -> usize {
        k / self.spec.mod_order().pow(nu as u32) % self.spec.mod_order()
    }

    /// Candidate index for per-user labels.
    pub fn index_of(&self, labels: &[usize]) -> usize {
        labels
            .iter()
            .rev()
            .fold(0, |acc, &s| acc * self.spec.mod_order() + s)
    }

    /// Squared distances from `y` to every candidate of symbol `l`.
    pub fn distances(&self, l: usize, y: &[Cplx], out: &mut Vec<f64>) {
        let d = self.spec.dims();
        out.clear();
        out.extend(self.values[l].chunks_exact(d).map(|c| {
            c.iter()
                .zip(y)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
        }));
    }
}
