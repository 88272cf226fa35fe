use super::SumPatternCatalog;
use crate::phy::ReceivedFrame;
use crate::{Error, Result};

/// Hard multiuser detection output.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub tau_hat: usize,
    pub mu_hat: usize,
    /// `per_user_bits[ν][m]`: the `N` frame bits of active user `ν`, row `m`.
    pub per_user_bits: Vec<Vec<Vec<u8>>>,
    /// Candidate index chosen at each `(m, l)`, row-major.
    pub sum_pattern_decisions: Vec<usize>,
    /// Number of sign flips made to restore row parities.
    pub spc_repairs: usize,
}

pub(crate) fn check_geometry(y: &ReceivedFrame, catalog: &SumPatternCatalog) -> Result<()> {
    if y.symbols() != catalog.symbols() || y.dims() != catalog.spec().dims() {
        return Err(Error::Size(format!(
            "frame has {} symbols of {} coordinates, catalog expects {} of {}",
            y.symbols(),
            y.dims(),
            catalog.symbols(),
            catalog.spec().dims()
        )));
    }
    Ok(())
}

/// Nearest-candidate detection per symbol, then per user and row a single
/// sign flip at the least reliable symbol when the row parity fails.
///
/// The reliability of user `ν`'s sign at a symbol is the distance increase
/// from the chosen candidate to the same candidate with that sign flipped.
pub fn mud_hard(y: &ReceivedFrame, catalog: &SumPatternCatalog) -> Result<DetectionResult> {
    check_geometry(y, catalog)?;
    let spec = catalog.spec();
    let (rows, symbols, tau) = (y.rows(), y.symbols(), catalog.tau);
    let mb = spec.bits_per_symbol();
    let mut decisions = vec![0usize; rows * symbols];
    let mut per_user_bits = vec![vec![vec![0u8; symbols * mb]; rows]; tau];
    let mut spc_repairs = 0;
    let mut dist = Vec::with_capacity(catalog.count());
    let mut margins = vec![0.0f64; tau * symbols];
    for m in 0..rows {
        for l in 0..symbols {
            catalog.distances(l, y.symbol(m, l), &mut dist);
            let mut best = 0;
            for (k, &d) in dist.iter().enumerate() {
                if d < dist[best] {
                    best = k;
                }
            }
            decisions[m * symbols + l] = best;
            for nu in 0..tau {
                let flipped = best ^ sign_mask(catalog, nu);
                margins[nu * symbols + l] = dist[flipped] - dist[best];
            }
        }
        for nu in 0..tau {
            let parity = (0..symbols).fold(0, |acc, l| {
                acc ^ catalog.user_symbol(decisions[m * symbols + l], nu) & 1
            });
            if parity == 1 {
                let l = (0..symbols)
                    .min_by(|&a, &b| margins[nu * symbols + a].total_cmp(&margins[nu * symbols + b]))
                    .expect("at least one symbol");
                decisions[m * symbols + l] ^= sign_mask(catalog, nu);
                spc_repairs += 1;
            }
        }
        for l in 0..symbols {
            let k = decisions[m * symbols + l];
            for (nu, bits) in per_user_bits.iter_mut().enumerate() {
                let sym = catalog.user_symbol(k, nu);
                for b in 0..mb {
                    bits[m][l * mb + b] = (sym >> (mb - 1 - b) & 1) as u8;
                }
            }
        }
    }
    Ok(DetectionResult {
        tau_hat: tau,
        mu_hat: catalog.mu,
        per_user_bits,
        sum_pattern_decisions: decisions,
        spc_repairs,
    })
}

/// XOR mask that toggles user `nu`'s sign bit in a candidate index.
fn sign_mask(catalog: &SumPatternCatalog, nu: usize) -> usize {
    catalog.spec().mod_order().pow(nu as u32)
}
