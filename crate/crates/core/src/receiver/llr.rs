use super::mud::check_geometry;
use super::SumPatternCatalog;
use crate::coding::deinterleave;
use crate::phy::ReceivedFrame;
use crate::{Error, Result};

/// Magnitude limit applied to every LLR.
pub const LLR_CLAMP: f64 = 30.0;

/// Per-user bit LLRs, `log P(0)/P(1)`, in frame layout.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameLlrs {
    rows: usize,
    n: usize,
    /// `per_user[ν][m·N + n]`
    pub per_user: Vec<Vec<f64>>,
}

impl FrameLlrs {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, nu: usize, m: usize, bit: usize) -> f64 {
        self.per_user[nu][m * self.n + bit]
    }

    /// The first `n1` LLRs of user `nu` in codeword order.
    pub fn codeword_llrs(&self, nu: usize, n1: usize) -> Result<Vec<f64>> {
        let rows: Vec<Vec<f64>> = self.per_user[nu].chunks(self.n).map(<[f64]>::to_vec).collect();
        deinterleave(&rows, n1)
    }
}

/// Marginalises the Gaussian candidate likelihoods `exp(−‖y − θ‖²/N0)` onto
/// every bit of every active user.
pub fn llr_init(y: &ReceivedFrame, catalog: &SumPatternCatalog, n0: f64) -> Result<FrameLlrs> {
    check_geometry(y, catalog)?;
    if !(n0 > 0.0) {
        return Err(Error::Parameter(format!("noise level {n0} must be positive")));
    }
    let spec = catalog.spec();
    let (rows, symbols, tau) = (y.rows(), y.symbols(), catalog.tau);
    let mb = spec.bits_per_symbol();
    let n = symbols * mb;
    let mut per_user = vec![vec![0.0; rows * n]; tau];
    let mut dist = Vec::with_capacity(catalog.count());
    // mass[(ν·mb + b)·2 + value]
    let mut mass = vec![0.0f64; tau * mb * 2];
    for m in 0..rows {
        for l in 0..symbols {
            catalog.distances(l, y.symbol(m, l), &mut dist);
            let nearest = dist.iter().copied().fold(f64::INFINITY, f64::min);
            mass.fill(0.0);
            for (k, &d) in dist.iter().enumerate() {
                let w = (-(d - nearest) / n0).exp();
                if w == 0.0 {
                    continue;
                }
                for nu in 0..tau {
                    let sym = catalog.user_symbol(k, nu);
                    for b in 0..mb {
                        let bit = sym >> (mb - 1 - b) & 1;
                        mass[(nu * mb + b) * 2 + bit] += w;
                    }
                }
            }
            for (nu, llrs) in per_user.iter_mut().enumerate() {
                for b in 0..mb {
                    let p0 = mass[(nu * mb + b) * 2];
                    let p1 = mass[(nu * mb + b) * 2 + 1];
                    llrs[m * n + l * mb + b] = (p0.ln() - p1.ln()).clamp(-LLR_CLAMP, LLR_CLAMP);
                }
            }
        }
    }
    Ok(FrameLlrs {
        rows,
        n,
        per_user,
    })
}
