use statrs::function::gamma::ln_gamma;

/// `ln I_ν(x)` for `ν > −1`, `x ≥ 0`.
///
/// Sums the power series `Σ (x/2)^(ν+2t) / (t! Γ(ν+t+1))` outward from its
/// largest term, with every term scaled by that term, so neither large
/// orders nor large arguments overflow.
pub fn ln_bessel_i(nu: f64, x: f64) -> f64 {
    debug_assert!(nu > -1.0 && x >= 0.0);
    if x == 0.0 {
        return if nu == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let half = 0.5 * x;
    let q = half * half;
    // term(t+1)/term(t) = q / ((t+1)(ν+t+1)) crosses 1 here
    let peak = ((nu * nu + x * x).sqrt() - nu - 1.0).max(0.0) * 0.5;
    let peak = peak.floor();
    let ln_peak = (nu + 2.0 * peak) * half.ln() - ln_gamma(peak + 1.0) - ln_gamma(nu + peak + 1.0);
    const CUTOFF: f64 = 1e-18;
    let mut sum = 1.0;
    let mut r = 1.0;
    let mut t = peak;
    loop {
        r *= q / ((t + 1.0) * (nu + t + 1.0));
        t += 1.0;
        sum += r;
        if r < CUTOFF * sum {
            break;
        }
    }
    r = 1.0;
    t = peak;
    while t > 0.0 {
        r *= t * (nu + t) / q;
        t -= 1.0;
        sum += r;
        if r < CUTOFF * sum {
            break;
        }
    }
    ln_peak + sum.ln()
}
