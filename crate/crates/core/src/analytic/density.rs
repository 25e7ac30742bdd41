use std::f64::consts::PI;

use super::quad::{integrate_with_breaks, Quad, QuadratureConfig};
use crate::error::{Error, Result};

pub(crate) fn check_alpha_t(alpha: f64, t: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::DomainError(format!("α = {alpha} must lie in (0, 2)")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::DomainError(format!("t = {t} must be positive")));
    }
    Ok(())
}

/// Cutoff `ξ_max` with `t ξ_max^α = cutoff`.
pub(crate) fn xi_max(alpha: f64, t: f64, cfg: &QuadratureConfig) -> f64 {
    (cfg.tail_cutoff / t).powf(1.0 / alpha)
}

const MAX_PANELS: usize = 100_000;

/// `p(t,x) = (1/π) ∫₀^∞ e^{−tξ^α} cos(ξx) dξ`, the transition density of the
/// one-dimensional symmetric α-stable process.
///
/// The integral is truncated where the envelope falls below `e^{−cutoff}` and
/// split at the zeros of `cos(ξx)` shifted by half a period, so each panel is
/// one oscillation.
pub fn stable_density_1d(alpha: f64, t: f64, x: f64, cfg: &QuadratureConfig) -> Result<Quad> {
    check_alpha_t(alpha, t)?;
    cfg.validate()?;
    let top = xi_max(alpha, t, cfg);
    let mut points = vec![0.0];
    let x = x.abs();
    if x > 0.0 {
        let step = PI / x;
        let n = ((top / step) as usize).min(MAX_PANELS);
        let step = top / (n.max(1) as f64);
        points.extend((1..n).map(|k| k as f64 * step));
    }
    points.push(top);
    let f = |xi: f64| (-t * xi.powf(alpha)).exp() * (xi * x).cos();
    let q = integrate_with_breaks(f, &points, cfg)?;
    Ok(Quad {
        value: q.value / PI,
        error: q.error / PI + (-cfg.tail_cutoff).exp() / PI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::levy::levy_constant;
    use crate::analytic::gamma::gamma;
    use crate::analytic::quad::integrate;

    fn cauchy(t: f64, x: f64) -> f64 {
        t / (PI * (t * t + x * x))
    }

    #[test]
    fn cauchy_closed_form() {
        let cfg = QuadratureConfig::default();
        let p = stable_density_1d(1.0, 1.0, 0.0, &cfg).unwrap().value;
        assert!((p - 1.0 / PI).abs() < 1e-9);
        let p = stable_density_1d(1.0, 0.5, 1.0, &cfg).unwrap().value;
        assert!((p - cauchy(0.5, 1.0)).abs() < 1e-9);
        assert!((p - 0.1273240).abs() < 1e-7);
    }

    #[test]
    fn gaussian_limit_shape() {
        // α near 2: e^{−tξ²} inverts to a Gaussian with variance 2t.
        let cfg = QuadratureConfig::default();
        let p = stable_density_1d(1.999999, 0.5, 0.3, &cfg).unwrap().value;
        let g = (-0.09f64 / 2.0).exp() / (2.0 * PI).sqrt();
        assert!((p - g).abs() < 1e-5);
    }

    #[test]
    fn heavy_tail_constant() {
        let cfg = QuadratureConfig::default();
        let (a, x) = (0.7, 50.0);
        let p = stable_density_1d(a, 1.0, x, &cfg).unwrap().value;
        let c = levy_constant(a, 1).unwrap();
        // Large-x series p = (1/π) Σ (−1)^{n+1} Γ(nα+1)/n! sin(nπα/2) t^n x^{−nα−1};
        // its first term is c x^{−1−α}, the second still carries 4% at x = 50.
        let series: f64 = (1..=4)
            .map(|n| {
                let n = n as f64;
                let sign = if n as u32 % 2 == 1 { 1.0 } else { -1.0 };
                sign * gamma(n * a + 1.0) / gamma(n + 1.0) * (n * PI * a / 2.0).sin() * x.powf(-n * a - 1.0) / PI
            })
            .sum();
        assert!((p / series - 1.0).abs() < 1e-3, "{p} vs {series}");
        let ratio = p * x.powf(1.0 + a) / c;
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn integrates_to_one() {
        let cfg = QuadratureConfig::default();
        let (a, t, l) = (1.5, 1.0, 400.0);
        let inner = QuadratureConfig { abs_tol: 1e-9, rel_tol: 1e-8, ..cfg };
        let mass = integrate(
            |x| stable_density_1d(a, t, x, &cfg).unwrap().value,
            0.0,
            l,
            &inner,
        )
        .unwrap()
        .value
            * 2.0;
        // Two tails from the envelope c t x^{−1−α}.
        let tail = 2.0 * levy_constant(a, 1).unwrap() * t * l.powf(-a) / a;
        assert!((mass + tail - 1.0).abs() < 1e-6, "mass {mass} tail {tail}");
    }

    #[test]
    fn rejects_bad_parameters() {
        let cfg = QuadratureConfig::default();
        assert!(stable_density_1d(2.0, 1.0, 0.0, &cfg).is_err());
        assert!(stable_density_1d(1.0, 0.0, 0.0, &cfg).is_err());
    }
}
