/// Value and error bound of a numerical integral.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

impl std::ops::AddAssign for Integral {
    fn add_assign(&mut self, rhs: Integral) {
        self.value += rhs.value;
        self.error += rhs.error;
    }
}

/// Integrates a unimodal `f` over `[a, b]` when its mass sits near `center`
/// with spread `width`.
///
/// The range is cut into `width`-sized panels aligned on `center`. A panel
/// whose peak value times length is below `abs_tol / 1000` is dropped and
/// that bound added to the error; the rest are integrated by
/// double-exponential quadrature.
pub fn integrate_peaked<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, center: f64, width: f64, abs_tol: f64) -> Integral {
    let mut total = Integral::default();
    if !(b > a) {
        return total;
    }
    let first = ((a - center) / width).floor();
    let last = ((b - center) / width).ceil();
    let panels = (last - first).max(1.0);
    let per_panel = abs_tol / panels;
    let mut k = first;
    while k < last {
        let lo = (center + k * width).max(a);
        let hi = (center + (k + 1.0) * width).min(b);
        k += 1.0;
        if !(hi > lo) {
            continue;
        }
        let peak = f(lo).max(f(hi)).max(f(center.clamp(lo, hi)));
        let bound = peak * (hi - lo);
        if bound < abs_tol * 1e-3 {
            total.error += bound;
            continue;
        }
        let out = quadrature::integrate(&f, lo, hi, per_panel);
        total += Integral {
            value: out.integral,
            error: out.error_estimate,
        };
    }
    total
}
