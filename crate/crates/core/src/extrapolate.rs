//! Richardson extrapolation of grid-biased estimates to zero step size.

/// Result of extrapolating `E(h) = E₀ + C h^q` from three step sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Richardson {
    pub value: f64,
    pub stderr: f64,
    /// Estimated (or assumed) convergence order `q`; `None` on fallback.
    pub order: Option<f64>,
    /// Level differences were not resolved above noise; `value` is the
    /// finest-level estimate with its stderr inflated by the last difference.
    pub noise_dominates: bool,
}

/// Range the estimated order is clamped to.
pub const ORDER_RANGE: (f64, f64) = (0.2, 4.0);

fn quad_form(g: &[f64; 3], cov: &[[f64; 3]; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += g[i] * cov[i][j] * g[j];
        }
    }
    s.max(0.0)
}

/// Extrapolates estimates at `h, h/2, h/4` (coarse to fine) with covariance
/// `cov` between the three level estimates.
///
/// With `d₁ = E₁ − E₂`, `d₂ = E₂ − E₃` the order is `q = log₂(d₁/d₂)` and
/// `E₀ = E₃ − d₂²/(d₁ − d₂)`; the error is propagated by the delta method.
/// When either difference is within two standard errors of zero or the two
/// differences disagree in sign, the finest estimate is returned instead.
pub fn richardson_extrapolate(values: [f64; 3], cov: [[f64; 3]; 3]) -> Richardson {
    let [e1, e2, e3] = values;
    let (d1, d2) = (e1 - e2, e2 - e3);
    let var_d1 = quad_form(&[1.0, -1.0, 0.0], &cov);
    let var_d2 = quad_form(&[0.0, 1.0, -1.0], &cov);
    let finest_var = cov[2][2].max(0.0);
    let resolved = d1.abs() > 2.0 * var_d1.sqrt()
        && d2.abs() > 2.0 * var_d2.sqrt()
        && d1 * d2 > 0.0
        && d1.abs() > d2.abs();
    if !resolved {
        return Richardson {
            value: e3,
            stderr: (finest_var + d2 * d2).sqrt(),
            order: None,
            noise_dominates: true,
        };
    }
    let q = (d1 / d2).log2();
    if q < ORDER_RANGE.0 || q > ORDER_RANGE.1 {
        let q = q.clamp(ORDER_RANGE.0, ORDER_RANGE.1);
        let mut r = with_order(values, cov, q);
        r.order = Some(q);
        return r;
    }
    let den = d1 - d2;
    let value = e3 - d2 * d2 / den;
    let a = d2 / den;
    let grad = [a * a, -2.0 * a - 2.0 * a * a, 1.0 + 2.0 * a + a * a];
    Richardson {
        value,
        stderr: quad_form(&grad, &cov).sqrt(),
        order: Some(q),
        noise_dominates: false,
    }
}

/// Extrapolation with a known order from the two finest levels:
/// `E₀ = E₃ − (E₂ − E₃)/(2^q − 1)`.
pub fn with_order(values: [f64; 3], cov: [[f64; 3]; 3], q: f64) -> Richardson {
    let k = 1.0 / (2f64.powf(q) - 1.0);
    let grad = [0.0, -k, 1.0 + k];
    Richardson {
        value: values[2] - k * (values[1] - values[2]),
        stderr: quad_form(&grad, &cov).sqrt(),
        order: Some(q),
        noise_dominates: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZERO: [[f64; 3]; 3] = [[0.0; 3]; 3];

    #[test]
    fn linear_model_is_exact() {
        let h = [0.1, 0.05, 0.025];
        let r = richardson_extrapolate(h.map(|h| 1.0 + h), ZERO);
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!((r.order.unwrap() - 1.0).abs() < 1e-12);
        assert!(!r.noise_dominates);
    }

    #[test]
    fn square_root_model() {
        let h: [f64; 3] = [0.1, 0.05, 0.025];
        let r = richardson_extrapolate(h.map(|h| 1.0 + h.sqrt()), ZERO);
        assert!((r.value - 1.0).abs() < 1e-10);
        assert!((r.order.unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn noisy_differences_fall_back() {
        let var = 1e-4;
        let cov = [[var, 0.0, 0.0], [0.0, var, 0.0], [0.0, 0.0, var]];
        let r = richardson_extrapolate([0.500, 0.495, 0.497], cov);
        assert!(r.noise_dominates);
        assert_eq!(r.value, 0.497);
        assert!(r.stderr >= var.sqrt());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let v = [0.7, 0.62, 0.58];
        let den = (v[0] - v[1]) - (v[1] - v[2]);
        let a = (v[1] - v[2]) / den;
        let grad = [a * a, -2.0 * a - 2.0 * a * a, 1.0 + 2.0 * a + a * a];
        for i in 0..3 {
            let (mut up, mut down) = (v, v);
            up[i] += 1e-6;
            down[i] -= 1e-6;
            let fd = (richardson_extrapolate(up, ZERO).value - richardson_extrapolate(down, ZERO).value) / 2e-6;
            assert!((fd - grad[i]).abs() < 1e-5, "component {i}: {fd} vs {}", grad[i]);
        }
        assert!((grad.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_order() {
        let h: [f64; 3] = [0.1, 0.05, 0.025];
        let r = with_order(h.map(|h| 2.0 + 3.0 * h.powf(0.7)), ZERO, 0.7);
        assert!((r.value - 2.0).abs() < 1e-12);
    }
}
