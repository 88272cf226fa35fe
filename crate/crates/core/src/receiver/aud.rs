use crate::phy::ReceivedFrame;
use crate::udas::UdasSet;
use crate::{binomial, combination_rows, Result};

/// Frame-level features used for active user detection.
#[derive(Debug, Clone, PartialEq)]
pub struct AudStatistics {
    /// Per-symbol power averaged over rows, summed over coordinates.
    pub gamma: Vec<f64>,
    pub gamma_sum: f64,
    /// `Σ_i max_m Re y[m][l][i]`
    pub zeta_re: Vec<f64>,
    pub zeta_im: Vec<f64>,
}

pub fn compute_aud_statistics(y: &ReceivedFrame) -> AudStatistics {
    let (rows, symbols, dims) = (y.rows(), y.symbols(), y.dims());
    let mut gamma = vec![0.0; symbols];
    let mut max_re = vec![f64::NEG_INFINITY; symbols * dims];
    let mut max_im = vec![f64::NEG_INFINITY; symbols * dims];
    for m in 0..rows {
        for l in 0..symbols {
            for (i, z) in y.symbol(m, l).iter().enumerate() {
                gamma[l] += z.norm_sqr();
                max_re[l * dims + i] = max_re[l * dims + i].max(z.re);
                max_im[l * dims + i] = max_im[l * dims + i].max(z.im);
            }
        }
    }
    let rows_f = rows.max(1) as f64;
    gamma.iter_mut().for_each(|g| *g /= rows_f);
    let fold = |v: &[f64]| -> Vec<f64> {
        if rows == 0 {
            return vec![0.0; symbols];
        }
        v.chunks(dims.max(1)).map(|c| c.iter().sum()).collect()
    };
    AudStatistics {
        gamma_sum: gamma.iter().sum(),
        zeta_re: fold(&max_re),
        zeta_im: fold(&max_im),
        gamma,
    }
}

/// Signature tables for every `(τ, μ)` of one UDAS set.
#[derive(Debug, Clone)]
pub struct SofAud {
    dims: usize,
    /// `L · P_avg`
    row_energy: f64,
    symbols: usize,
    /// `kappa[τ−1][μ−1]`: per-symbol `(κ_re, κ_im)`.
    kappa: Vec<Vec<Vec<(f64, f64)>>>,
}

impl SofAud {
    /// Precomputes `κ` for all combinations. The largest real part of
    /// `Σ ±e` is `Σ |Re e|` (each sign chosen independently), and likewise
    /// for the imaginary part.
    pub fn new(set: &UdasSet, dims: usize) -> Result<SofAud> {
        let t = set.t();
        let kappa = (1..=t)
            .map(|tau| {
                (1..=binomial(t, tau) as usize)
                    .map(|mu| {
                        let rows = combination_rows(t, tau, mu)?;
                        Ok((0..set.l())
                            .map(|l| {
                                rows.iter().fold((0.0, 0.0), |(re, im), &r| {
                                    let e = set.element(r, l);
                                    (re + e.re.abs() as f64, im + e.im.abs() as f64)
                                })
                            })
                            .collect())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SofAud {
            dims,
            row_energy: set.l() as f64 * set.p_avg(),
            symbols: set.l(),
            kappa,
        })
    }

    pub fn max_users(&self) -> usize {
        self.kappa.len()
    }

    /// Expected `γ_sum` with `tau` active users.
    pub fn expected_gamma_sum(&self, tau: usize, n0: f64) -> f64 {
        tau as f64 * self.row_energy + (self.symbols * self.dims) as f64 * n0
    }

    pub fn kappa(&self, tau: usize, mu: usize) -> &[(f64, f64)] {
        &self.kappa[tau - 1][mu - 1]
    }

    /// `(τ̂, μ̂)`: nearest expected power, then the combination whose maxima
    /// (scaled by the number of coordinates) best match `ζ`. Ties go to the
    /// smaller index.
    pub fn detect(&self, stats: &AudStatistics, n0: f64) -> (usize, usize) {
        let tau = argmin((1..=self.max_users()).map(|tau| {
            (stats.gamma_sum - self.expected_gamma_sum(tau, n0)).abs()
        })) + 1;
        let scale = self.dims as f64;
        let mu = argmin(self.kappa[tau - 1].iter().map(|kap| {
            kap.iter()
                .zip(stats.zeta_re.iter().zip(&stats.zeta_im))
                .map(|(&(kr, ki), (&zr, &zi))| (zr - scale * kr).abs() + (zi - scale * ki).abs())
                .sum::<f64>()
        })) + 1;
        (tau, mu)
    }
}

pub fn sof_aud(stats: &AudStatistics, set: &UdasSet, n0: f64, dims: usize) -> Result<(usize, usize)> {
    Ok(SofAud::new(set, dims)?.detect(stats, n0))
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy::FrameGeometry;
    use crate::udas::{build_cyclic, enumerate_sum_patterns};
    use crate::{Amp, Cplx};

    fn cyclic4() -> UdasSet {
        build_cyclic(&[Amp::new(1, 0), Amp::new(0, 1), Amp::new(2, 0), Amp::new(0, 2)]).unwrap()
    }

    fn c(z: Amp) -> Cplx {
        Cplx::new(z.re as f64, z.im as f64)
    }

    /// Noiseless frame with `rows` rows, user `ν` sending sign bit
    /// `masks[m] >> ν` at every symbol of row `m`.
    fn frame(set: &UdasSet, tau: usize, mu: usize, masks: &[u32]) -> ReceivedFrame {
        let table = enumerate_sum_patterns(set, tau, mu).unwrap();
        let samples = masks
            .iter()
            .flat_map(|&mask| (0..set.l()).map(move |l| (l, mask)))
            .map(|(l, mask)| c(table.omega[l][mask as usize]))
            .collect();
        let g = FrameGeometry {
            rows: masks.len(),
            symbols: set.l(),
            dims: 1,
        };
        ReceivedFrame::new(g, samples, 0.0).unwrap()
    }

    #[test]
    fn single_user_powers() {
        let set = cyclic4();
        let stats = compute_aud_statistics(&frame(&set, 1, 1, &[0, 1, 1]));
        assert_eq!(stats.gamma, vec![1.0, 1.0, 4.0, 4.0]);
        assert_eq!(stats.gamma_sum, 10.0);
        assert_eq!(stats.zeta_re, vec![1.0, 0.0, 2.0, 0.0]);
        assert_eq!(stats.zeta_im, vec![0.0, 1.0, 0.0, 2.0]);
    }

    #[test]
    fn zero_frame() {
        let g = FrameGeometry {
            rows: 3,
            symbols: 2,
            dims: 2,
        };
        let stats = compute_aud_statistics(&ReceivedFrame::new(g, vec![Cplx::new(0.0, 0.0); 12], 0.0).unwrap());
        assert_eq!(stats.gamma_sum, 0.0);
        assert_eq!(stats.zeta_re, vec![0.0, 0.0]);
    }

    #[test]
    fn orthogonal_pair_has_constant_power() {
        let set = cyclic4();
        for mask in 0..4 {
            let stats = compute_aud_statistics(&frame(&set, 2, 1, &[mask]));
            assert_eq!(stats.gamma_sum, 20.0);
        }
    }

    #[test]
    fn kappa_matches_enumeration() {
        let set = cyclic4();
        let aud = SofAud::new(&set, 1).unwrap();
        for tau in 1..=4 {
            for mu in 1..=binomial(4, tau) as usize {
                let table = enumerate_sum_patterns(&set, tau, mu).unwrap();
                for l in 0..4 {
                    let (re, im) = aud.kappa(tau, mu)[l];
                    assert_eq!((re as i64, im as i64), (table.kappa_re[l], table.kappa_im[l]));
                }
            }
        }
    }

    #[test]
    fn maxima_separate_equal_power_pairs() {
        let set = cyclic4();
        let aud = SofAud::new(&set, 1).unwrap();
        // All four sign patterns present, so every maximum is reached.
        for mu in [2, 5] {
            let stats = compute_aud_statistics(&frame(&set, 2, mu, &[0, 1, 2, 3]));
            assert_eq!(aud.detect(&stats, 0.0), (2, mu));
        }
    }

    #[test]
    fn exact_mean_and_ties() {
        let set = cyclic4();
        let aud = SofAud::new(&set, 1).unwrap();
        let stats = AudStatistics {
            gamma: vec![7.5; 4],
            gamma_sum: 30.0,
            zeta_re: vec![0.0; 4],
            zeta_im: vec![0.0; 4],
        };
        assert_eq!(aud.detect(&stats, 0.0).0, 3);
        // Halfway between τ = 1 and τ = 2 resolves to the smaller count.
        let half = AudStatistics {
            gamma_sum: 15.0,
            ..stats.clone()
        };
        assert_eq!(aud.detect(&half, 0.0), (1, 1));
        // Noise shifts every mean by L·N0.
        let noisy = AudStatistics {
            gamma_sum: 30.0 + 4.0 * 0.5,
            ..stats
        };
        assert_eq!(aud.detect(&noisy, 0.5).0, 3);
        assert_eq!(sof_aud(&noisy, &set, 0.5, 1).unwrap().0, 3);
    }
}
