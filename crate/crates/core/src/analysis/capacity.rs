use crate::phy::ModSpec;
use crate::receiver::SumPatternCatalog;
use crate::udas::UdasSet;
use crate::{Cplx, Error, Result};
use gauss_quad::hermite::GaussHermite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::num::NonZeroUsize;

/// How the capacity expectation over the noise is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitySettings {
    /// Gauss–Hermite nodes per axis for one complex dimension.
    pub hermite_nodes: usize,
    /// Initial Monte-Carlo sample count for several dimensions; doubled
    /// until the standard error meets `tolerance`.
    pub mc_samples: usize,
    pub mc_max_samples: usize,
    pub seed: u64,
    /// Target standard error of the ergodic capacity, in bits.
    pub tolerance: f64,
}

impl Default for CapacitySettings {
    fn default() -> Self {
        CapacitySettings {
            hermite_nodes: 48,
            mc_samples: 1 << 12,
            mc_max_samples: 1 << 22,
            seed: 1,
            tolerance: 1e-3,
        }
    }
}

/// Ergodic capacity and its estimated standard error (0 for quadrature).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate {
    pub bits: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub ebn0_db: f64,
    pub n0: f64,
    pub capacity: f64,
    pub std_error: f64,
}

/// Ergodic sum capacity of one user combination over an Eb/N0 grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityGrid {
    pub tau: usize,
    pub mu: usize,
    pub spec: ModSpec,
    pub rate: f64,
    pub settings: CapacitySettings,
    pub points: Vec<CapacityPoint>,
}

impl CapacityGrid {
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| {
            let slack = 3.0 * (w[0].std_error + w[1].std_error);
            w[1].capacity + slack >= w[0].capacity
        })
    }
}

/// Sum-pattern constellations of the `τ` users of combination `μ`, one per
/// symbol, each listing all `𝓜^τ` equiprobable joint inputs.
struct Constellations {
    dims: usize,
    count: usize,
    points: Vec<Vec<Cplx>>,
}

impl Constellations {
    fn new(set: &UdasSet, tau: usize, mu: usize, spec: ModSpec) -> Result<Constellations> {
        let catalog = SumPatternCatalog::new(set, tau, mu, spec)?;
        let points = (0..set.l())
            .map(|l| (0..catalog.count()).flat_map(|k| catalog.value(l, k).to_vec()).collect())
            .collect();
        Ok(Constellations {
            dims: spec.dims(),
            count: catalog.count(),
            points,
        })
    }

    fn point(&self, l: usize, k: usize) -> &[Cplx] {
        &self.points[l][k * self.dims..(k + 1) * self.dims]
    }

    /// `log2 Σ_k exp(−(‖w_i − w_k + z‖² − ‖z‖²)/N0)`
    fn log_sum(&self, l: usize, i: usize, z: &[Cplx], n0: f64) -> f64 {
        let wi = self.point(l, i);
        let mut exps = Vec::with_capacity(self.count);
        let mut top = f64::NEG_INFINITY;
        for k in 0..self.count {
            let wk = self.point(l, k);
            let mut e = 0.0;
            for d in 0..self.dims {
                let shifted = wi[d] - wk[d] + z[d];
                e -= shifted.norm_sqr() - z[d].norm_sqr();
            }
            let e = e / n0;
            top = top.max(e);
            exps.push(e);
        }
        (top + exps.iter().map(|e| (e - top).exp()).sum::<f64>().ln()) / std::f64::consts::LN_2
    }

    /// Entropy of the noiseless sum pattern at symbol `l`, the capacity limit
    /// as the noise vanishes.
    fn noiseless_entropy(&self, l: usize) -> f64 {
        let mut seen: Vec<(&[Cplx], usize)> = Vec::new();
        for k in 0..self.count {
            let p = self.point(l, k);
            match seen.iter_mut().find(|(q, _)| *q == p) {
                Some((_, c)) => *c += 1,
                None => seen.push((p, 1)),
            }
        }
        let n = self.count as f64;
        -seen.iter().map(|&(_, c)| c as f64 / n * (c as f64 / n).log2()).sum::<f64>()
    }
}

/// Mutual information between all users' inputs and the adder-channel
/// output, averaged over the `L` symbols, for uniform inputs.
pub fn ergodic_capacity(
    set: &UdasSet,
    tau: usize,
    mu: usize,
    spec: ModSpec,
    n0: f64,
    settings: &CapacitySettings,
) -> Result<CapacityEstimate> {
    let cons = Constellations::new(set, tau, mu, spec)?;
    capacity_at(&cons, n0, settings, hermite_rule(settings)?.as_ref())
}

fn hermite_rule(settings: &CapacitySettings) -> Result<Option<GaussHermite>> {
    let nodes = NonZeroUsize::new(settings.hermite_nodes)
        .ok_or_else(|| Error::Parameter("Gauss-Hermite rule needs at least one node".into()))?;
    Ok(Some(GaussHermite::new(nodes)))
}

fn capacity_at(
    cons: &Constellations,
    n0: f64,
    settings: &CapacitySettings,
    rule: Option<&GaussHermite>,
) -> Result<CapacityEstimate> {
    if !(n0 > 0.0) || !n0.is_finite() {
        return Err(Error::Parameter(format!("noise level {n0} must be positive and finite")));
    }
    let symbols = cons.points.len();
    let k_bits = (cons.count as f64).log2();
    let mut bits = 0.0;
    let mut var = 0.0;
    for l in 0..symbols {
        let (mean_log, v) = match (cons.dims, rule) {
            (1, Some(rule)) => (hermite_expectation(cons, l, n0, rule), 0.0),
            _ => monte_carlo_expectation(cons, l, n0, settings)?,
        };
        bits += k_bits - mean_log;
        var += v;
    }
    let s = symbols as f64;
    Ok(CapacityEstimate {
        bits: (bits / s).max(0.0),
        std_error: var.sqrt() / s,
    })
}

/// `(1/K) Σ_i E_z[log_sum]` with `z = √N0 (x + iy)` on the product rule.
fn hermite_expectation(cons: &Constellations, l: usize, n0: f64, rule: &GaussHermite) -> f64 {
    let scale = n0.sqrt();
    let pairs = rule.as_node_weight_pairs();
    let mut total = 0.0;
    for i in 0..cons.count {
        for &(x, wx) in pairs {
            for &(y, wy) in pairs {
                let z = [Cplx::new(scale * x, scale * y)];
                total += wx * wy * cons.log_sum(l, i, &z, n0);
            }
        }
    }
    total / (std::f64::consts::PI * cons.count as f64)
}

/// Monte-Carlo version for several dimensions: inputs cycle through all `K`
/// values and the noise is drawn from the channel itself. Returns the mean
/// and the variance of that mean.
fn monte_carlo_expectation(
    cons: &Constellations,
    l: usize,
    n0: f64,
    settings: &CapacitySettings,
) -> Result<(f64, f64)> {
    let per_dim = (0.5 * n0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    rng.set_stream(l as u64);
    let target = settings.tolerance * settings.tolerance;
    let (mut sum, mut sum_sq, mut n) = (0.0, 0.0, 0usize);
    let mut goal = settings.mc_samples.max(cons.count);
    let mut z = vec![Cplx::new(0.0, 0.0); cons.dims];
    loop {
        while n < goal {
            for v in z.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *v = Cplx::new(per_dim * re, per_dim * im);
            }
            let x = cons.log_sum(l, n % cons.count, &z, n0);
            sum += x;
            sum_sq += x * x;
            n += 1;
        }
        let mean = sum / n as f64;
        let var = ((sum_sq / n as f64 - mean * mean).max(0.0)) / n as f64;
        if var <= target {
            return Ok((mean, var));
        }
        if goal >= settings.mc_max_samples {
            return Err(Error::Tolerance(format!(
                "capacity standard error {:.2e} after {n} samples exceeds {:.1e}",
                var.sqrt(),
                settings.tolerance
            )));
        }
        goal = (goal * 2).min(settings.mc_max_samples);
    }
}

/// `N0` at which one information bit carries `ebn0_db`, given `P_avg` per
/// user symbol and `rate · log2 𝓜` bits per symbol.
fn noise_for(ebn0_db: f64, rate: f64, spec: ModSpec, p_avg: f64) -> f64 {
    p_avg / (rate * spec.mod_order().ilog2() as f64 * 10f64.powf(ebn0_db / 10.0))
}

/// Capacity of combination `(τ, μ)` at each `Eb/N0` of the grid, with the
/// energy per bit tied to the code rate `rate`.
pub fn capacity_curve(
    set: &UdasSet,
    tau: usize,
    mu: usize,
    spec: ModSpec,
    rate: f64,
    ebn0_grid: &[f64],
    settings: &CapacitySettings,
) -> Result<CapacityGrid> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Parameter(format!("code rate {rate} outside (0, 1]")));
    }
    let cons = Constellations::new(set, tau, mu, spec)?;
    let rule = hermite_rule(settings)?;
    let points = ebn0_grid
        .iter()
        .map(|&db| {
            let n0 = noise_for(db, rate, spec, set.p_avg());
            let est = capacity_at(&cons, n0, settings, rule.as_ref())?;
            Ok(CapacityPoint {
                ebn0_db: db,
                n0,
                capacity: est.bits,
                std_error: est.std_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CapacityGrid {
        tau,
        mu,
        spec,
        rate,
        settings: *settings,
        points,
    })
}

/// Smallest `Eb/N0` (dB) at which `τ` users at code rate `rate` fit within
/// the ergodic capacity, i.e. the root of `C̄ = rate · log2 𝓜 · τ`.
///
/// The root is bracketed in `ln N0` and bisected until the bracket is below
/// 10⁻⁴ dB wide.
pub fn shannon_limit(
    rate: f64,
    set: &UdasSet,
    tau: usize,
    mu: usize,
    spec: ModSpec,
    settings: &CapacitySettings,
) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Parameter(format!("code rate {rate} outside (0, 1]")));
    }
    let cons = Constellations::new(set, tau, mu, spec)?;
    let rule = hermite_rule(settings)?;
    let bits_per_symbol = spec.mod_order().ilog2() as f64;
    let target = rate * bits_per_symbol * tau as f64;
    let ceiling = (0..set.l()).map(|l| cons.noiseless_entropy(l)).sum::<f64>() / set.l() as f64;
    if target >= ceiling - 1e-9 {
        return Err(Error::Unreachable(format!(
            "sum rate {target:.4} bits/symbol is not below the noiseless capacity {ceiling:.4}"
        )));
    }
    let excess = |ln_n0: f64| -> Result<f64> {
        Ok(capacity_at(&cons, ln_n0.exp(), settings, rule.as_ref())?.bits - target)
    };
    let (mut lo, mut hi) = (-2.0f64, 2.0f64);
    while excess(lo)? <= 0.0 {
        lo -= 4.0;
        if lo < -60.0 {
            return Err(Error::Unreachable(format!("sum rate {target:.4} not reached at any noise level")));
        }
    }
    while excess(hi)? > 0.0 {
        hi += 4.0;
        if hi > 60.0 {
            return Err(Error::Unreachable(format!("capacity stays above {target:.4} at every noise level")));
        }
    }
    let db_per_neper = 10.0 / std::f64::consts::LN_10;
    while (hi - lo) * db_per_neper > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n0 = (0.5 * (lo + hi)).exp();
    Ok(10.0 * (set.p_avg() / (rate * bits_per_symbol * n0)).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::udas::build_cyclic;
    use crate::udas::fixtures::{a, cyclic4};

    fn spec(order: usize) -> ModSpec {
        ModSpec::new(order).unwrap()
    }

    /// Brute-force two-dimensional Riemann sum of the same expectation.
    fn riemann_capacity(points: &[Cplx], n0: f64) -> f64 {
        let k = points.len();
        let sd = (0.5 * n0).sqrt();
        let span = 9.0 * sd;
        let steps = 300;
        let h = 2.0 * span / steps as f64;
        let mut total = 0.0;
        for &wi in points {
            for a in 0..steps {
                for b in 0..steps {
                    let z = Cplx::new(-span + (a as f64 + 0.5) * h, -span + (b as f64 + 0.5) * h);
                    let dens = (-z.norm_sqr() / n0).exp() / (std::f64::consts::PI * n0);
                    let s: f64 = points.iter().map(|&wk| (-((wi - wk + z).norm_sqr() - z.norm_sqr()) / n0).exp()).sum();
                    total += dens * h * h * s.log2();
                }
            }
        }
        (k as f64).log2() - total / k as f64
    }

    #[test]
    fn hermite_agrees_with_riemann_sum() {
        let set = cyclic4();
        let cons = Constellations::new(&set, 2, 1, spec(2)).unwrap();
        let rule = GaussHermite::new(NonZeroUsize::new(48).unwrap());
        for n0 in [0.3, 1.0, 4.0] {
            let want: f64 = (0..4)
                .map(|l| {
                    let pts: Vec<Cplx> = (0..cons.count).map(|k| cons.point(l, k)[0]).collect();
                    riemann_capacity(&pts, n0)
                })
                .sum::<f64>()
                / 4.0;
            let got = capacity_at(&cons, n0, &CapacitySettings::default(), Some(&rule)).unwrap();
            assert!((got.bits - want).abs() < 1e-4, "N0={n0}: {} vs {want}", got.bits);
        }
    }

    #[test]
    fn limits_in_noise() {
        let set = cyclic4();
        let s = CapacitySettings::default();
        let clean = ergodic_capacity(&set, 2, 1, spec(2), 1e-3, &s).unwrap().bits;
        assert!((clean - 2.0).abs() < 1e-6);
        let noisy = ergodic_capacity(&set, 2, 1, spec(2), 1e4, &s).unwrap().bits;
        assert!(noisy < 1e-3);
    }

    #[test]
    fn single_antipodal_user() {
        // One user sending ±1: the binary-input Gaussian channel capacity.
        let set = build_cyclic(&[a(1, 0)]).unwrap();
        let c = ergodic_capacity(&set, 1, 1, spec(2), 2.0, &CapacitySettings::default()).unwrap();
        // BPSK with Es/N0 = 0.5 (real noise variance 1): 0.4859 bits
        assert!((c.bits - 0.4859).abs() < 1e-3, "{}", c.bits);
    }

    #[test]
    fn curve_is_monotone() {
        let set = cyclic4();
        let grid: Vec<f64> = (-10..=12).map(|d| d as f64).collect();
        for (tau, order) in [(2, 2), (3, 2), (2, 4)] {
            let s = CapacitySettings {
                tolerance: 3e-3,
                ..CapacitySettings::default()
            };
            let curve = capacity_curve(&set, tau, 1, spec(order), 0.5, &grid, &s).unwrap();
            assert!(curve.is_monotone(), "τ={tau} 𝓜={order}");
            let top = tau as f64 * (order as f64).log2();
            assert!(curve.points.iter().all(|p| p.capacity >= 0.0 && p.capacity <= top + 1e-9));
        }
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let set = cyclic4();
        let s = CapacitySettings {
            tolerance: 5e-3,
            ..CapacitySettings::default()
        };
        let x = ergodic_capacity(&set, 2, 3, spec(4), 1.0, &s).unwrap();
        let y = ergodic_capacity(&set, 2, 3, spec(4), 1.0, &s).unwrap();
        assert_eq!(x, y);
        assert!(x.std_error > 0.0 && x.std_error <= 5e-3);
    }

    #[test]
    fn limit_inverts_the_curve() {
        let set = cyclic4();
        let s = CapacitySettings::default();
        let db = shannon_limit(0.4, &set, 2, 1, spec(2), &s).unwrap();
        let curve = capacity_curve(&set, 2, 1, spec(2), 0.4, &[db], &s).unwrap();
        assert!((curve.points[0].capacity - 0.8).abs() < 1e-4);
        assert!(matches!(shannon_limit(1.0, &set, 2, 1, spec(2), &s), Err(Error::Unreachable(_))));
    }
}
