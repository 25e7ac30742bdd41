//! The renewal structure of a self-similar drum: weights `r_j^b`, shifts
//! `α ln(1/r_j)`, the constant `C₁` and the log-periodic amplitude.

use serde::Serialize;

use super::{ForcingFunction, PeriodicSampler, RenewalEquation};
use crate::error::{Error, Result};
use crate::geometry::solve_dimension;

/// `Σ_j r_j^b ln(1/r_j^α)`.
pub fn mean_shift_denominator(ratios: &[f64], b: f64, alpha: f64) -> f64 {
    ratios.iter().map(|r| r.powf(b) * alpha * (1.0 / r).ln()).sum()
}

/// The drum's renewal equation (coinciding shifts merged) and its dimension `b`.
pub fn drum_equation(ratios: &[f64], d: usize, alpha: f64) -> Result<(RenewalEquation, f64)> {
    let b = solve_dimension(ratios, d)?;
    let weights = ratios.iter().map(|r| r.powf(b)).collect();
    let shifts = ratios.iter().map(|r| alpha * (1.0 / r).ln()).collect();
    Ok((RenewalEquation::merged(weights, shifts)?, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C1Result {
    pub value: f64,
    /// `∫_0^∞ ℛ(u) u^{−1} du`.
    pub integral: f64,
    pub denominator: f64,
    /// Share of the integral supplied by the fitted exponential tails.
    pub tail_share: f64,
}

/// Decay rate of `|y|` from the two outermost samples, per unit of `z`.
fn end_rate(z: [f64; 2], y: [f64; 2]) -> Option<f64> {
    if y[0] == 0.0 {
        return Some(f64::INFINITY);
    }
    if y[0] * y[1] <= 0.0 {
        return None;
    }
    let rate = (y[1].abs() / y[0].abs()).ln() / (z[1] - z[0]).abs();
    (rate > 0.0).then_some(rate)
}

/// `C₁ = ∫_0^∞ ℛ(u) u^{−1} du / Σ_j r_j^b ln(1/r_j^α)` from samples `(u_k, ℛ(u_k))`.
///
/// With `z = −ln u` the integral is `∫ ℛ(e^{−z}) dz`; it is taken by the
/// trapezoidal rule over the samples plus exponential tails fitted to the two
/// outermost samples at each end.
pub fn c1_constant(samples: &[(f64, f64)], ratios: &[f64], d: usize, alpha: f64) -> Result<C1Result> {
    if samples.len() < 4 {
        return Err(Error::InsufficientRange(format!("need at least 4 samples, got {}", samples.len())));
    }
    if let Some((u, _)) = samples.iter().find(|(u, r)| !(*u > 0.0) || !r.is_finite()) {
        return Err(Error::DomainError(format!("bad sample at u = {u}")));
    }
    let b = solve_dimension(ratios, d)?;
    let denominator = mean_shift_denominator(ratios, b, alpha);
    let mut pts: Vec<(f64, f64)> = samples.iter().map(|(u, r)| (-u.ln(), *r)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let body: f64 = pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    let n = pts.len();
    let mut tails = 0.0;
    for (outer, inner) in [(pts[0], pts[1]), (pts[n - 1], pts[n - 2])] {
        let rate = end_rate([outer.0, inner.0], [outer.1, inner.1]).ok_or_else(|| {
            Error::InsufficientRange(format!("samples do not decay towards z = {:.3}", outer.0))
        })?;
        tails += outer.1 / rate;
    }
    let integral = body + tails;
    if integral == 0.0 {
        return Ok(C1Result {
            value: 0.0,
            integral,
            denominator,
            tail_share: 0.0,
        });
    }
    let tail_share = (tails / integral).abs();
    if tail_share > 0.05 {
        return Err(Error::InsufficientRange(format!(
            "fitted tails carry {:.1}% of the integral; extend the u-range",
            100.0 * tail_share
        )));
    }
    Ok(C1Result {
        value: integral / denominator,
        integral,
        denominator,
        tail_share,
    })
}

/// `f(z) = (αρ / Σ_j r_j^b ln(1/r_j^α)) Σ_{n∈ℤ} ℛ(e^{−(z − nαρ)})`, periodic
/// with period `αρ`. `profile` is `z ↦ ℛ(e^{−z})` with its decay certificate.
pub fn amplitude_function(
    profile: &ForcingFunction,
    rho: f64,
    alpha: f64,
    ratios: &[f64],
    d: usize,
) -> Result<PeriodicSampler> {
    if !(rho > 0.0) {
        return Err(Error::DomainError(format!("span must be positive, got {rho}")));
    }
    let b = solve_dimension(ratios, d)?;
    let den = mean_shift_denominator(ratios, b, alpha);
    PeriodicSampler::new(profile, alpha * rho, alpha * rho / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::renewal::{asymptote_arithmetic, detect_arithmetic};

    const CANTOR: [f64; 2] = [1.0 / 3.0, 1.0 / 3.0];

    #[test]
    fn cantor_denominator() {
        let b = 2f64.ln() / 3f64.ln();
        for alpha in [0.3, 1.5] {
            assert!((mean_shift_denominator(&CANTOR, b, alpha) - alpha * 3f64.ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn c1_of_a_synthetic_profile() {
        let alpha = 1.5;
        let samples: Vec<(f64, f64)> = (-400..=400)
            .map(|k| {
                let z = k as f64 * 0.05;
                ((-z).exp(), (-z.abs()).exp())
            })
            .collect();
        let c1 = c1_constant(&samples, &CANTOR, 1, alpha).unwrap();
        assert!((c1.value - 2.0 / (alpha * 3f64.ln())).abs() < 1e-3 * c1.value);
        assert!(c1.tail_share < 1e-7);
        let zero: Vec<(f64, f64)> = samples.iter().map(|(u, _)| (*u, 0.0)).collect();
        assert_eq!(c1_constant(&zero, &CANTOR, 1, alpha).unwrap().value, 0.0);
    }

    #[test]
    fn c1_refuses_a_short_range() {
        let samples: Vec<(f64, f64)> = (-10..=10)
            .map(|k| {
                let z = k as f64 * 0.1;
                ((-z).exp(), (-z.abs()).exp())
            })
            .collect();
        assert!(matches!(
            c1_constant(&samples, &CANTOR, 1, 1.5),
            Err(Error::InsufficientRange(_))
        ));
    }

    #[test]
    fn amplitude_is_periodic_and_matches_the_lattice_limit() {
        let alpha = 1.5;
        let bump = ForcingFunction::bump(0.0, 0.4).unwrap();
        let rho = 3f64.ln();
        let f = amplitude_function(&bump, rho, alpha, &CANTOR, 1).unwrap();
        for z in [0.0, 0.37, 2.9] {
            assert!((f.eval(z) - f.eval(z + alpha * rho)).abs() < 1e-9);
        }
        let (eq, _) = drum_equation(&CANTOR, 1, alpha).unwrap();
        let span = detect_arithmetic(eq.shifts(), 1e-9).unwrap().span.unwrap();
        let lattice = asymptote_arithmetic(&eq, &bump, span).unwrap();
        assert!((f.eval(1.1) - lattice.eval(1.1)).abs() < 1e-12);
    }

    #[test]
    fn geometric_profile_stays_finite() {
        // ℛ(e^{−z}) = e^{−(1−b)z/α} for z > 0, cut off smoothly below 0.
        let (b, alpha) = (2f64.ln() / 3f64.ln(), 1.5);
        let rate = (1.0 - b) / alpha;
        let profile = ForcingFunction::new("geometric", 1.0, rate, move |z: f64| {
            if z >= 0.0 {
                (-rate * z).exp()
            } else {
                (-z * z).exp() * (rate * z).exp().min(1.0)
            }
        })
        .unwrap();
        let f = amplitude_function(&profile, 1.0, alpha, &CANTOR, 1).unwrap();
        assert!(f.eval(0.3).is_finite() && f.eval(0.3) > 0.0);
    }
}
