use crate::analysis::bessel::ln_bessel_i;
use crate::{Error, Result};
use statrs::function::gamma::ln_gamma;

/// Density of the energy `γ` of `dofs` real Gaussian components, each of
/// variance `N0/2`, whose means have total energy `s²`.
///
/// `f(γ) = (1/N0) (γ/s²)^((dofs−2)/4) exp(−(s²+γ)/N0) I_(dofs/2−1)(2s√γ/N0)`,
/// which reduces to the central form when `s = 0`. Far tails give 0.
pub fn noncentral_chi2_pdf(gamma: f64, s: f64, dofs: usize, n0: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !(s >= 0.0) || !(n0 > 0.0) || dofs == 0 || !n0.is_finite() {
        return Err(Error::Parameter(format!(
            "density needs γ ≥ 0, s ≥ 0, N0 > 0 and dofs ≥ 1 (got {gamma}, {s}, {n0}, {dofs})"
        )));
    }
    Ok(ln_pdf(gamma, s, dofs as f64, n0).exp())
}

/// Log density behind [`noncentral_chi2_pdf`]; arguments are not checked.
pub(crate) fn ln_pdf(gamma: f64, s: f64, dofs: f64, n0: f64) -> f64 {
    let nu = 0.5 * dofs - 1.0;
    if gamma <= 0.0 {
        return if nu < 0.0 {
            f64::INFINITY
        } else if nu == 0.0 {
            -n0.ln() - s * s / n0
        } else {
            f64::NEG_INFINITY
        };
    }
    if s == 0.0 {
        return nu * gamma.ln() - gamma / n0 - (nu + 1.0) * n0.ln() - ln_gamma(nu + 1.0);
    }
    let root = gamma.sqrt();
    -n0.ln() + nu * (root.ln() - s.ln()) - (s - root) * (s - root) / n0
        + (ln_bessel_i(nu, 2.0 * s * root / n0) - 2.0 * s * root / n0)
}

/// Mean and variance of the density above.
pub fn chi2_moments(s: f64, dofs: usize, n0: f64) -> (f64, f64) {
    let half = 0.5 * n0;
    let f = dofs as f64;
    (s * s + f * half, 2.0 * f * half * half + 4.0 * half * s * s)
}
