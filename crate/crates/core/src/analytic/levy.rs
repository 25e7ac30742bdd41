use std::f64::consts::PI;

use super::gamma::gamma;
use crate::error::{Error, Result};

fn check(alpha: f64, d: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::DomainError(format!("α = {alpha} must lie in (0, 2)")));
    }
    if d == 0 {
        return Err(Error::DomainError("dimension must be ≥ 1".into()));
    }
    Ok(())
}

/// Constant of the Lévy density `c(α,d)|x|^{−d−α}` of the isotropic α-stable
/// process with exponent `|ξ|^α`:
/// `c(α,d) = αΓ((d+α)/2) / (2^{1−α} π^{d/2} Γ(1−α/2))`.
pub fn levy_constant(alpha: f64, d: usize) -> Result<f64> {
    check(alpha, d)?;
    let d = d as f64;
    Ok(alpha * gamma((d + alpha) / 2.0)
        / (2f64.powf(1.0 - alpha) * PI.powf(d / 2.0) * gamma(1.0 - alpha / 2.0)))
}

/// The same constant in reflected form:
/// `A(α,d) = α 2^{α−1} π^{−1−d/2} sin(πα/2) Γ((d+α)/2) Γ(α/2)`.
pub fn levy_constant_alt(alpha: f64, d: usize) -> Result<f64> {
    check(alpha, d)?;
    let d = d as f64;
    Ok(alpha * 2f64.powf(alpha - 1.0) * PI.powf(-1.0 - d / 2.0) * (PI * alpha / 2.0).sin()
        * gamma((d + alpha) / 2.0)
        * gamma(alpha / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_constant() {
        assert!((levy_constant(1.0, 1).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((levy_constant_alt(1.0, 1).unwrap() - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn half_stable() {
        let want = 1.0 / (2.0 * (2.0 * PI).sqrt());
        assert!((levy_constant(0.5, 1).unwrap() - want).abs() < 1e-14);
        assert!((levy_constant(0.5, 1).unwrap() - 0.1994711).abs() < 1e-7);
        assert!((levy_constant_alt(0.5, 1).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn forms_agree() {
        for i in 1..=19 {
            let a = 0.1 * i as f64;
            for d in 1..=3 {
                let (c, alt) = (levy_constant(a, d).unwrap(), levy_constant_alt(a, d).unwrap());
                assert!((c - alt).abs() <= 1e-12, "α={a} d={d}: {c} vs {alt}");
            }
        }
    }

    #[test]
    fn excluded_indices() {
        assert!(levy_constant(2.0, 1).is_err());
        assert!(levy_constant_alt(0.0, 1).is_err());
    }
}
