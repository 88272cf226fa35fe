use super::chi2::{chi2_moments, ln_pdf};
use super::quadrature::{integrate_peaked, Integral};
use super::sa::{sa_distribution, SaDistribution};
use crate::phy::ModSpec;
use crate::udas::UdasSet;
use crate::{Error, Result};

/// Atoms lighter than this are left out of the error integrals.
pub const MIN_ATOM_WEIGHT: f64 = 1e-16;

/// Tails are integrated out to this many standard deviations of an atom.
const TAIL_SPAN: f64 = 60.0;

/// Per-atom absolute tolerance of a tail integral.
const TAIL_TOL: f64 = 1e-14;

/// Mixture model of the received frame energy `γ_s = Σ |y|²` under each
/// user count, with the energy detector's decision intervals.
#[derive(Debug, Clone)]
pub struct AuerModel {
    pub n0: f64,
    pub rows: usize,
    symbols: usize,
    dims: usize,
    p_avg: f64,
    /// `mixtures[τ − 1]`
    mixtures: Vec<SaDistribution>,
    /// `thresholds[τ − 1]` separates `τ` from `τ + 1`.
    thresholds: Vec<f64>,
}

impl AuerModel {
    pub fn new(set: &UdasSet, rows: usize, n0: f64, spec: ModSpec) -> Result<AuerModel> {
        if !(n0 >= 0.0) || !n0.is_finite() {
            return Err(Error::Parameter(format!("noise level {n0} must be finite and non-negative")));
        }
        let mixtures = (1..=set.t())
            .map(|tau| sa_distribution(set, tau, rows, spec))
            .collect::<Result<Vec<_>>>()?;
        let mut model = AuerModel {
            n0,
            rows,
            symbols: set.l(),
            dims: spec.dims(),
            p_avg: set.p_avg(),
            mixtures,
            thresholds: Vec::new(),
        };
        model.thresholds = (1..set.t())
            .map(|tau| 0.5 * (model.mean(tau) + model.mean(tau + 1)))
            .collect();
        Ok(model)
    }

    pub fn max_users(&self) -> usize {
        self.mixtures.len()
    }

    pub fn dofs(&self) -> usize {
        2 * self.symbols * self.rows * self.dims
    }

    pub fn mixture(&self, tau: usize) -> &SaDistribution {
        &self.mixtures[tau - 1]
    }

    /// Conditional mean of `γ_s`: `M·(τ·L·P_avg + L·𝓜₁·N0)`.
    pub fn mean(&self, tau: usize) -> f64 {
        let l = self.symbols as f64;
        self.rows as f64 * (tau as f64 * l * self.p_avg + l * self.dims as f64 * self.n0)
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Decision interval `[lo, hi)` of `τ`.
    pub fn region(&self, tau: usize) -> (f64, f64) {
        let lo = if tau == 1 { 0.0 } else { self.thresholds[tau - 2] };
        let hi = self.thresholds.get(tau - 1).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    /// Mixture density of `γ_s` given `τ` users (`N0 > 0`).
    pub fn pdf(&self, tau: usize, gamma: f64) -> f64 {
        let dofs = self.dofs() as f64;
        self.mixture(tau)
            .atoms
            .iter()
            .map(|a| a.weight * ln_pdf(gamma, a.s(), dofs, self.n0).exp())
            .sum()
    }

    /// Probability mass of the `τ` mixture on `[a, b]`.
    pub fn mass(&self, tau: usize, a: f64, b: f64) -> Integral {
        let mut total = Integral::default();
        for atom in &self.mixture(tau).atoms {
            let part = self.atom_mass(atom.s(), a, b);
            total += Integral {
                value: atom.weight * part.value,
                error: atom.weight * part.error,
            };
        }
        total
    }

    /// `Pr[γ_s ∉ D_τ | τ]`.
    pub fn error_given(&self, tau: usize) -> Integral {
        let (lo, hi) = self.region(tau);
        let mut total = Integral::default();
        for atom in &self.mixture(tau).atoms {
            let energy = atom.energy as f64;
            if self.n0 == 0.0 {
                if energy < lo || energy >= hi {
                    total.value += atom.weight;
                }
                continue;
            }
            if atom.weight < MIN_ATOM_WEIGHT {
                total.error += atom.weight;
                continue;
            }
            let mut tails = self.atom_mass(atom.s(), 0.0, lo);
            tails += self.atom_mass(atom.s(), hi, f64::INFINITY);
            total += Integral {
                value: atom.weight * tails.value,
                error: atom.weight * tails.error,
            };
        }
        total
    }

    fn atom_mass(&self, s: f64, a: f64, b: f64) -> Integral {
        let (mean, var) = chi2_moments(s, self.dofs(), self.n0);
        let sd = var.sqrt();
        let a = a.max(mean - TAIL_SPAN * sd).max(0.0);
        let b = b.min(mean + TAIL_SPAN * sd);
        let dofs = self.dofs() as f64;
        let n0 = self.n0;
        integrate_peaked(|g| ln_pdf(g, s, dofs, n0).exp(), a, b, mean, sd, TAIL_TOL)
    }
}

/// Active-user error rate of the energy detector.
#[derive(Debug, Clone, PartialEq)]
pub struct AuerTheory {
    /// `Σ_τ P_τ · Pr[τ̂ ≠ τ | τ]`
    pub total: f64,
    /// `per_tau[τ − 1] = Pr[τ̂ ≠ τ | τ]`
    pub per_tau: Vec<f64>,
    /// Bound on the integration error of `total`.
    pub error: f64,
}

/// Evaluates the AUER for frames of `rows` rows at noise level `n0`.
///
/// `priors[τ − 1]` is the probability of `τ` active users.
pub fn auer_theory(set: &UdasSet, rows: usize, n0: f64, priors: &[f64], spec: ModSpec) -> Result<AuerTheory> {
    if priors.len() != set.t() || priors.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::Parameter(format!("{} non-negative priors expected", set.t())));
    }
    let sum: f64 = priors.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!("priors sum to {sum}, not 1")));
    }
    let model = AuerModel::new(set, rows, n0, spec)?;
    auer_from_model(&model, priors)
}

/// [`auer_theory`] on a prebuilt model.
pub fn auer_from_model(model: &AuerModel, priors: &[f64]) -> Result<AuerTheory> {
    let mut per_tau = Vec::with_capacity(priors.len());
    let (mut total, mut error) = (0.0, 0.0);
    for (i, &p) in priors.iter().enumerate() {
        let term = model.error_given(i + 1);
        per_tau.push(term.value);
        total += p * term.value;
        error += p * term.error;
    }
    if error > 1e-10_f64.max(1e-4 * total) {
        return Err(Error::Tolerance(format!(
            "AUER {total:.3e} reached only ±{error:.1e}"
        )));
    }
    Ok(AuerTheory {
        total,
        per_tau,
        error,
    })
}
