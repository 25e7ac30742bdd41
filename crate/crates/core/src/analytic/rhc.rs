use std::f64::consts::PI;

use super::density::check_alpha_t;
use super::quad::{integrate, integrate_with_breaks, Quad, QuadratureConfig};
use crate::error::Result;

/// Where the oscillatory part of the Fourier integral is cut; the neglected
/// remainder is below `4/B³`.
const OSC_PERIODS: usize = 3200;

/// `2(1 − cos ξ)/ξ²` without cancellation near 0.
fn fejer(xi: f64) -> f64 {
    if xi == 0.0 {
        return 1.0;
    }
    let s = (0.5 * xi).sin();
    4.0 * s * s / (xi * xi)
}

/// Deficit `1 − H_{(0,1)}(t)` of the regular heat content of the unit interval.
///
/// With `|𝟙̂_{(0,1)}(ξ)|² = 2(1 − cos ξ)/ξ²`,
/// `1 − H = (1/π) ∫₀^∞ (1 − e^{−tξ^α}) 2(1 − cos ξ)/ξ² dξ`, which avoids the
/// cancellation of `1 − H` for small `t`. The oscillatory part is integrated
/// period by period up to `B = 2π·3200`; beyond `B` the non-oscillatory part
/// `2/ξ²` is integrated on a log scale.
pub fn rhc_interval_deficit(alpha: f64, t: f64, cfg: &QuadratureConfig) -> Result<Quad> {
    check_alpha_t(alpha, t)?;
    cfg.validate()?;
    let weight = |xi: f64| -(-t * xi.powf(alpha)).exp_m1();
    let b = 2.0 * PI * OSC_PERIODS as f64;
    let mut points: Vec<f64> = (0..=OSC_PERIODS).map(|k| 2.0 * PI * k as f64).collect();
    // Resolve the onset of the weight when it falls inside the oscillatory range.
    let onset = t.powf(-1.0 / alpha);
    if onset < b {
        points.push(onset);
        points.sort_by(f64::total_cmp);
    }
    let near = integrate_with_breaks(|xi| weight(xi) * fejer(xi), &points, cfg)?;
    // ξ = B e^s, dξ = ξ ds.
    let s_onset = (onset / b).ln();
    let s_end = 60.0f64.max(s_onset + 60.0);
    let pts: Vec<f64> = if s_onset > 0.0 { vec![0.0, s_onset, s_end] } else { vec![0.0, s_end] };
    let far = integrate_with_breaks(
        |s| {
            let xi = b * s.exp();
            weight(xi) * 2.0 / xi
        },
        &pts,
        cfg,
    )?;
    let truncation = 4.0 / (b * b * b);
    Ok(Quad {
        value: (near.value + far.value) / PI,
        error: (near.error + far.error + truncation) / PI,
    })
}

/// Regular heat content `H_{(0,1)}(t) = ∫₀¹ P_x(X_t ∈ (0,1)) dx`.
pub fn rhc_interval_oracle(alpha: f64, t: f64, cfg: &QuadratureConfig) -> Result<Quad> {
    let d = rhc_interval_deficit(alpha, t, cfg)?;
    Ok(Quad {
        value: 1.0 - d.value,
        error: d.error,
    })
}

/// Closed form at `α = 1`: `(2/π)(arctan(1/t) − (t/2) ln(1 + 1/t²))`.
pub fn rhc_interval_cauchy(t: f64) -> f64 {
    (2.0 / PI) * ((1.0 / t).atan() - 0.5 * t * (1.0 / (t * t)).ln_1p())
}

/// `H_{(0,1)}(t) = ∫_{−1}^{1}(1−|u|) p(t,u) du = 2∫₀¹ (1−u) p(t,u) du` by
/// quadrature over the density. Slow; used as a cross-check.
pub fn rhc_interval_by_density(alpha: f64, t: f64, cfg: &QuadratureConfig) -> Result<Quad> {
    use super::density::stable_density_1d;
    let outer = QuadratureConfig {
        abs_tol: cfg.abs_tol * 10.0,
        rel_tol: cfg.rel_tol * 10.0,
        ..*cfg
    };
    let p = |u: f64| stable_density_1d(alpha, t, u, cfg).map(|q| q.value).unwrap_or(f64::NAN);
    let q = integrate(|u| 2.0 * (1.0 - u) * p(u), 0.0, 1.0, &outer)?;
    Ok(q)
}
