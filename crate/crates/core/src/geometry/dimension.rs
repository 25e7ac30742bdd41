use crate::error::{Error, Result};

/// Checks the standing assumption `Σ r_j^d < 1 < Σ r_j^{d−1}`.
pub fn check_standing_inequality(ratios: &[f64], dim: usize) -> Result<()> {
    if ratios.is_empty() {
        return Err(Error::ConstraintViolated("no similitude ratios given".into()));
    }
    if dim == 0 {
        return Err(Error::ConstraintViolated("dimension must be ≥ 1".into()));
    }
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::ConstraintViolated(format!(
            "ratio {r} outside (0,1)"
        )));
    }
    let d = dim as f64;
    let upper = power_sum(ratios, d);
    if upper >= 1.0 {
        return Err(Error::ConstraintViolated(format!(
            "Σr^d = {upper} must be < 1 (d = {dim})"
        )));
    }
    let lower = power_sum(ratios, d - 1.0);
    if lower <= 1.0 {
        return Err(Error::ConstraintViolated(format!(
            "Σr^(d-1) = {lower} must be > 1 (d = {dim})"
        )));
    }
    Ok(())
}

pub(crate) fn power_sum(ratios: &[f64], b: f64) -> f64 {
    ratios.iter().map(|r| r.powf(b)).sum()
}

/// Unique `b ∈ (d−1, d)` with `Σ r_j^b = 1`, by bisection on the strictly
/// decreasing map `b ↦ Σ r_j^b`; equal ratios use `ln n / ln(1/r)` directly.
pub fn solve_dimension(ratios: &[f64], dim: usize) -> Result<f64> {
    check_standing_inequality(ratios, dim)?;
    if ratios.iter().all(|&r| r == ratios[0]) {
        return Ok((ratios.len() as f64).ln() / -ratios[0].ln());
    }
    let mut lo = dim as f64 - 1.0;
    let mut hi = dim as f64;
    // Σ r^lo > 1 > Σ r^hi throughout.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if power_sum(ratios, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rl, rh) = (
        (power_sum(ratios, lo) - 1.0).abs(),
        (power_sum(ratios, hi) - 1.0).abs(),
    );
    Ok(if rl <= rh { lo } else { hi })
}

/// `Σ_j r_j^b ln(1/r_j^α)`, the mean shift of the renewal equation for a drum.
pub fn mean_log_shift(ratios: &[f64], b: f64, alpha: f64) -> f64 {
    ratios
        .iter()
        .map(|r| r.powf(b) * alpha * (1.0 / r).ln())
        .sum()
}
