use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Bound on the truncation error.
    pub tail_bound: f64,
    /// The cruder bound `Σ_{k>K odd} 8/(k²π²)`, which ignores the decay factor.
    pub plain_tail_bound: f64,
}

/// `Σ_{k odd} 8/(k²π²) e^{−t(kπ)^α}` over the first `terms` odd `k`, the heat
/// content of the unit interval for Brownian motion with generator `Δ`
/// (Dirichlet eigenvalues `(kπ)²`), killed on exit and subordinated by the
/// `α/2`-stable subordinator.
///
/// Every omitted term has `k ≥ m = 2·terms + 1`, so the tail is at most
/// `e^{−t(mπ)^α} · (8/π²) · (1/m² + 1/(2m))`.
pub fn skbm_interval_series(alpha: f64, t: f64, terms: usize) -> Result<SeriesValue> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::DomainError(format!("α = {alpha} must lie in (0, 2)")));
    }
    if !(t >= 0.0) || terms == 0 {
        return Err(Error::DomainError("need t ≥ 0 and at least one term".into()));
    }
    let mut value = 0.0;
    // Smallest terms first.
    for i in (0..terms).rev() {
        let k = (2 * i + 1) as f64;
        value += 8.0 / (k * k * PI * PI) * (-t * (k * PI).powf(alpha)).exp();
    }
    let m = (2 * terms + 1) as f64;
    let odd_tail = 8.0 / (PI * PI) * (1.0 / (m * m) + 1.0 / (2.0 * m));
    Ok(SeriesValue {
        value,
        tail_bound: (-t * (m * PI).powf(alpha)).exp() * odd_tail,
        plain_tail_bound: odd_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_one_at_time_zero() {
        for terms in [1, 10, 1000, 100_000] {
            let s = skbm_interval_series(1.0, 0.0, terms).unwrap();
            assert!(s.value <= 1.0 && s.value + s.tail_bound >= 1.0, "{terms}");
        }
    }

    #[test]
    fn tiny_tail_at_small_time() {
        let s = skbm_interval_series(1.0, 0.01, 10_000).unwrap();
        assert!(s.tail_bound < 1e-9);
        assert!(s.value > 0.9 && s.value < 1.0);
        // Tail bound is rigorous: compare with a much longer sum.
        let long = skbm_interval_series(1.0, 0.01, 200_000).unwrap();
        assert!((long.value - s.value).abs() <= s.tail_bound + 1e-15);
    }

    #[test]
    fn decreasing_in_time() {
        let mut prev = f64::INFINITY;
        for t in [0.0, 1e-4, 1e-3, 1e-2, 0.1, 1.0] {
            let v = skbm_interval_series(1.3, t, 500).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
    }
}
