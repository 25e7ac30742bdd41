//! One-dimensional fractional perimeters
//! `Per^{(α)}(U) = c(α,1) ∫_U ∫_{Uᶜ} |x − y|^{−1−α} dy dx` for `α ∈ (0,1)`.

use super::levy::levy_constant;
use super::quad::gauss_legendre;
use crate::error::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError(format!(
            "fractional perimeter needs α ∈ (0,1), got {alpha}"
        )));
    }
    Ok(())
}

/// Perimeter of a finite union of intervals inside `[0,1]`, split by which part
/// of the complement the heat leaks into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterBreakdown {
    /// Interaction with `(−∞,0] ∪ [1,∞)`.
    pub exterior: f64,
    /// Interaction with the complement inside `[0,1]`.
    pub interior: f64,
    pub total: f64,
}

/// `Per^{(α)}((a,b)) = 2c(α,1)(b−a)^{1−α} / (α(1−α))`.
pub fn per_alpha_interval(a: f64, b: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(a < b) {
        return Err(Error::DomainError(format!("interval needs a < b, got ({a}, {b})")));
    }
    Ok(2.0 * levy_constant(alpha, 1)? * (b - a).powf(1.0 - alpha) / (alpha * (1.0 - alpha)))
}

/// `∫_a^b ∫_c^d (y − x)^{−1−α} dy dx` for `a < b ≤ c < d`.
///
/// Closed form `[(c−a)^{1−α} − (c−b)^{1−α} − (d−a)^{1−α} + (d−b)^{1−α}] / (α(1−α))`
/// when the intervals are close; for well-separated short intervals that form
/// cancels, and a tensor Gauss–Legendre rule is used instead.
pub fn pair_interaction(a: f64, b: f64, c: f64, d: f64, alpha: f64) -> f64 {
    let gap = c - b;
    let size = (b - a).max(d - c);
    if gap > 4.0 * size {
        let (x, w) = gl12();
        let (hx, mx) = (0.5 * (b - a), 0.5 * (a + b));
        let (hy, my) = (0.5 * (d - c), 0.5 * (c + d));
        let mut s = 0.0;
        for i in 0..x.len() {
            for j in 0..x.len() {
                let dist = (my + hy * x[j]) - (mx + hx * x[i]);
                s += w[i] * w[j] * dist.powf(-1.0 - alpha);
            }
        }
        return s * hx * hy;
    }
    let p = |v: f64| if v > 0.0 { v.powf(1.0 - alpha) } else { 0.0 };
    (p(c - a) - p(c - b) - p(d - a) + p(d - b)) / (alpha * (1.0 - alpha))
}

fn gl12() -> &'static (Vec<f64>, Vec<f64>) {
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(12))
}

/// Perimeter of a union of disjoint open intervals inside `(0,1)` by exact
/// pairwise summation; `O(n²)` in the number of gaps.
///
/// The complement is `(−∞,0] ∪ [1,∞)` together with the closed pieces of
/// `[0,1]` between consecutive gaps.
pub fn per_alpha_gap_union(gaps: &[(f64, f64)], alpha: f64) -> Result<PerimeterBreakdown> {
    check_alpha(alpha)?;
    if gaps.is_empty() {
        return Err(Error::DomainError("no gaps given".into()));
    }
    for &(a, b) in gaps {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::DomainError(format!("gap ({a}, {b}) not inside (0,1)")));
        }
    }
    if let Some(w) = gaps.windows(2).find(|w| w[0].1 > w[1].0) {
        return Err(Error::DomainError(format!(
            "gaps ({}, {}) and ({}, {}) overlap or are unsorted",
            w[0].0, w[0].1, w[1].0, w[1].1
        )));
    }
    let c = levy_constant(alpha, 1)?;
    let k = 1.0 / (alpha * (1.0 - alpha));
    let exterior: f64 = gaps
        .iter()
        .map(|&(a, b)| {
            let p = |v: f64| v.powf(1.0 - alpha);
            k * (p(b) - p(a) + p(1.0 - a) - p(1.0 - b))
        })
        .sum();
    let mut pieces = Vec::with_capacity(gaps.len() + 1);
    let mut left = 0.0;
    for &(a, b) in gaps {
        if a > left {
            pieces.push((left, a));
        }
        left = b;
    }
    if left < 1.0 {
        pieces.push((left, 1.0));
    }
    let mut interior = 0.0;
    for &(a, b) in gaps {
        for &(p, q) in &pieces {
            interior += if q <= a {
                pair_interaction(p, q, a, b, alpha)
            } else {
                pair_interaction(a, b, p, q, alpha)
            };
        }
    }
    Ok(PerimeterBreakdown {
        exterior: c * exterior,
        interior: c * interior,
        total: c * (exterior + interior),
    })
}

const MOMENTS: usize = 40;
/// Offsets at or beyond this use multipole expansions.
const FAR: f64 = 6.0;

/// Self-similar evaluation of `Per^{(α)}` of the Cantor gap union `U_K` (all gaps
/// of levels `1..=K`), valid for any `K`.
///
/// With `R_K = [0,1] ∖ U_K` (the `2^K` residual intervals),
/// `Φ_K(s) = ∫_{R_K}(x+s)^{−α}dx`, `P_K = ∫_{R_K}∫_{R_Kᶜ}|x−y|^{−1−α}` and
/// `W_K(s) = ∫_{R_K}∫_{R_K+s}|x−y|^{−1−α}`:
///
/// * exterior `= (2/α)(1/(1−α) − Φ_K(0))`
/// * interior `= P_K − (2/α)Φ_K(0)`
/// * `Φ_K(s) = 3^{α−1}[Φ_{K−1}(3s) + Φ_{K−1}(3s+2)]`
/// * `P_K = 2·3^{α−1}[P_{K−1} − W_{K−1}(2)]`
/// * `W_K(s) = 3^{α−1}[2W_{K−1}(3s) + W_{K−1}(3s+2) + W_{K−1}(3s−2)]`
///
/// both scaled by `c(α,1)`. Far offsets use expansions in the central moments
/// of `R_K`, which obey their own two-map recursion.
pub fn cantor_gap_perimeter(level: u32, alpha: f64) -> Result<PerimeterBreakdown> {
    check_alpha(alpha)?;
    let c = levy_constant(alpha, 1)?;
    let rec = CantorRecursion::new(level, alpha);
    let phi0 = rec.phi(level, 0.0);
    let mut p = 2.0 / (alpha * (1.0 - alpha));
    for k in 1..=level {
        p = 2.0 * rec.scale * (p - rec.w(k - 1, 2.0));
    }
    let exterior = (2.0 / alpha) * (1.0 / (1.0 - alpha) - phi0);
    let interior = p - (2.0 / alpha) * phi0;
    Ok(PerimeterBreakdown {
        exterior: c * exterior,
        interior: c * interior,
        total: c * (exterior + interior),
    })
}

struct CantorRecursion {
    alpha: f64,
    scale: f64,
    /// `moments[k][n] = ∫_{R_k} (x − 1/2)^n dx`.
    moments: Vec<[f64; MOMENTS]>,
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for j in 1..n {
        row[j] = row[j - 1] * (n - j + 1) as f64 / j as f64;
    }
    row
}

/// Generalised binomial coefficients `C(p, n)` for `n < MOMENTS`.
fn general_binomial(p: f64) -> [f64; MOMENTS] {
    let mut out = [0.0; MOMENTS];
    out[0] = 1.0;
    for n in 1..MOMENTS {
        out[n] = out[n - 1] * (p - (n - 1) as f64) / n as f64;
    }
    out
}

impl CantorRecursion {
    fn new(level: u32, alpha: f64) -> Self {
        let mut moments = Vec::with_capacity(level as usize + 1);
        let mut m = [0.0; MOMENTS];
        for (n, v) in m.iter_mut().enumerate() {
            if n % 2 == 0 {
                *v = 2.0 * 0.5f64.powi(n as i32 + 1) / (n + 1) as f64;
            }
        }
        moments.push(m);
        let rows: Vec<Vec<f64>> = (0..MOMENTS).map(binomial_row).collect();
        for _ in 0..level {
            let prev = *moments.last().unwrap();
            let mut next = [0.0; MOMENTS];
            for n in (0..MOMENTS).step_by(2) {
                // Odd moments vanish by symmetry; both maps contribute equally.
                let mut s = 0.0;
                for j in (0..=n).step_by(2) {
                    s += rows[n][j] * 3f64.powi(-(j as i32)) * prev[j] * 3f64.powi(-((n - j) as i32));
                }
                next[n] = 2.0 * s / 3.0;
            }
            moments.push(next);
        }
        CantorRecursion {
            alpha,
            scale: 3f64.powf(alpha - 1.0),
            moments,
        }
    }

    fn phi(&self, k: u32, s: f64) -> f64 {
        let a = self.alpha;
        if s >= FAR {
            let b = general_binomial(-a);
            let m = &self.moments[k as usize];
            let base = s + 0.5;
            return (0..MOMENTS)
                .step_by(2)
                .map(|n| b[n] * base.powf(-a - n as f64) * m[n])
                .sum();
        }
        if k == 0 {
            return ((1.0 + s).powf(1.0 - a) - s.powf(1.0 - a)) / (1.0 - a);
        }
        self.scale * (self.phi(k - 1, 3.0 * s) + self.phi(k - 1, 3.0 * s + 2.0))
    }

    fn w(&self, k: u32, s: f64) -> f64 {
        let a = self.alpha;
        if s >= FAR {
            let b = general_binomial(-1.0 - a);
            let m = &self.moments[k as usize];
            let mut total = 0.0;
            for n in (0..MOMENTS).step_by(2) {
                // ∫∫ (v − u)^n over R×R with both centred.
                let row = binomial_row(n);
                let mut e = 0.0;
                for j in (0..=n).step_by(2) {
                    e += row[j] * m[j] * m[n - j];
                }
                total += b[n] * s.powf(-1.0 - a - n as f64) * e;
            }
            return total;
        }
        if k == 0 {
            return pair_interaction(0.0, 1.0, s, s + 1.0, a);
        }
        self.scale
            * (2.0 * self.w(k - 1, 3.0 * s) + self.w(k - 1, 3.0 * s + 2.0) + self.w(k - 1, 3.0 * s - 2.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::quad::{integrate_with_breaks, QuadratureConfig};
    use crate::geometry::cantor;
    use std::f64::consts::PI;

    #[test]
    fn interval_values() {
        let p = per_alpha_interval(0.0, 1.0, 0.5).unwrap();
        assert!((p - 1.595769).abs() < 1e-6, "{p}");
        assert!((per_alpha_interval(5.0, 6.0, 0.5).unwrap() - p).abs() < 1e-14);
        let p2 = per_alpha_interval(0.0, 2.0, 0.5).unwrap();
        assert!((p2 - 2f64.sqrt() * p).abs() < 1e-13);
        assert!((p2 - 2.256758).abs() < 1e-6);
        assert!(per_alpha_interval(0.0, 1.0, 1.2).is_err());
    }

    #[test]
    fn single_gap_is_the_interval() {
        for a in [0.2, 0.5, 0.8] {
            let u = per_alpha_gap_union(&[(0.0, 1.0)], a).unwrap();
            assert!((u.total - per_alpha_interval(0.0, 1.0, a).unwrap()).abs() < 1e-13);
            assert_eq!(u.interior, 0.0);
        }
    }

    /// Inner integral over the complement in closed form, outer by adaptive quadrature.
    fn union_by_quadrature(gaps: &[(f64, f64)], alpha: f64) -> f64 {
        let inner = |x: f64| {
            // ∫_{Uᶜ} |x−y|^{−1−α} dy for x in a gap (a,b): sum over the complement pieces.
            let mut edges = vec![f64::NEG_INFINITY];
            for &(a, b) in gaps {
                edges.push(a);
                edges.push(b);
            }
            edges.push(f64::INFINITY);
            let mut s = 0.0;
            for piece in edges.chunks(2) {
                let (p, q) = (piece[0], piece[1]);
                let far = |v: f64| if v.is_infinite() { 0.0 } else { (v - x).abs().powf(-alpha) };
                s += if q <= x { far(q) - far(p) } else { far(p) - far(q) };
            }
            s / alpha
        };
        let cfg = QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            ..Default::default()
        };
        let total: f64 = gaps
            .iter()
            .map(|&(a, b)| {
                // x = a + (b−a)(1 − cos πu)/2 absorbs the endpoint singularities.
                let f = |u: f64| {
                    let x = a + 0.5 * (b - a) * (1.0 - (PI * u).cos());
                    let jac = 0.5 * (b - a) * PI * (PI * u).sin();
                    if x > a && x < b { inner(x) * jac } else { 0.0 }
                };
                integrate_with_breaks(f, &[0.0, 0.5, 1.0], &cfg).unwrap().value
            })
            .sum();
        levy_constant(alpha, 1).unwrap() * total
    }

    #[test]
    fn symmetric_gaps_match_quadrature() {
        let gaps = [(0.0, 0.4), (0.6, 1.0)];
        let exact = per_alpha_gap_union(&gaps, 0.5).unwrap().total;
        let quad = union_by_quadrature(&gaps, 0.5);
        assert!((exact - quad).abs() < 1e-8, "{exact} vs {quad}");
    }

    #[test]
    fn pair_formula_is_positive_and_consistent() {
        for (a, b, c, d) in [(0.0, 0.1, 0.2, 0.3), (0.0, 0.01, 0.9, 0.91), (0.0, 1.0, 1.0, 2.0)] {
            let v = pair_interaction(a, b, c, d, 0.3);
            assert!(v > 0.0);
            if c - b > 4.0 * (b - a).max(d - c) {
                let closed = ((c - a).powf(0.7) - (c - b).powf(0.7) - (d - a).powf(0.7) + (d - b).powf(0.7)) / (0.3 * 0.7);
                assert!((v - closed).abs() < 1e-9 * v.max(1e-12) + 1e-13);
            }
        }
    }

    #[test]
    fn fast_recursion_matches_pairwise() {
        for alpha in [0.3, 0.6] {
            for level in 1..=9 {
                let fast = cantor_gap_perimeter(level, alpha).unwrap();
                let slow = per_alpha_gap_union(&cantor::gaps(level), alpha).unwrap();
                assert!((fast.total - slow.total).abs() < 1e-10 * slow.total, "α={alpha} K={level}: {} vs {}", fast.total, slow.total);
                assert!((fast.exterior - slow.exterior).abs() < 1e-10 * slow.exterior);
            }
        }
    }

    #[test]
    fn exterior_part_increases_to_the_interval_value() {
        let alpha = 0.3;
        let target = per_alpha_interval(0.0, 1.0, alpha).unwrap();
        let mut prev = 0.0;
        for level in 1..=40 {
            let e = cantor_gap_perimeter(level, alpha).unwrap().exterior;
            assert!(e > prev && e < target);
            prev = e;
        }
        assert!(target - prev < 1e-6);
    }
}
