//! The renewal equation `f(z) = Σ_j c_j f(z − γ_j) + φ(z)` and its asymptotics.

mod drum;
mod solve;
mod span;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use drum::{amplitude_function, c1_constant, drum_equation, mean_shift_denominator, C1Result};
pub use solve::{
    apply_l, asymptote_arithmetic, asymptote_nonarithmetic, solve_series, PeriodicSampler, SeriesSolution,
};
pub use span::{detect_arithmetic, SpanResult, MAX_EUCLID_DEPTH};

/// Weights `c_j > 0` with `Σ c_j = 1` and distinct positive shifts `γ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenewalEquation {
    weights: Vec<f64>,
    shifts: Vec<f64>,
}

impl RenewalEquation {
    pub fn new(weights: Vec<f64>, shifts: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != shifts.len() {
            return Err(Error::DomainError(format!(
                "need matching non-empty weights and shifts, got {} and {}",
                weights.len(),
                shifts.len()
            )));
        }
        if let Some(c) = weights.iter().find(|c| !(**c > 0.0)) {
            return Err(Error::DomainError(format!("weights must be positive, got {c}")));
        }
        if let Some(g) = shifts.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
            return Err(Error::DomainError(format!("shifts must be positive, got {g}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::ConstraintViolated(format!("weights sum to {total}, not 1")));
        }
        for i in 0..shifts.len() {
            for j in 0..i {
                if (shifts[i] - shifts[j]).abs() <= 1e-12 {
                    return Err(Error::DomainError(format!(
                        "shifts {} and {} coincide; merge them first",
                        shifts[j], shifts[i]
                    )));
                }
            }
        }
        Ok(RenewalEquation { weights, shifts })
    }

    /// Like [`RenewalEquation::new`] but adds up the weights of coinciding shifts.
    pub fn merged(weights: Vec<f64>, shifts: Vec<f64>) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = shifts.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (g, c) in pairs {
            match out.last_mut() {
                Some(last) if (g - last.0).abs() <= 1e-12 => last.1 += c,
                _ => out.push((g, c)),
            }
        }
        let (shifts, weights) = out.into_iter().unzip();
        RenewalEquation::new(weights, shifts)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    /// `Σ c_j γ_j`.
    pub fn mean_shift(&self) -> f64 {
        self.weights.iter().zip(&self.shifts).map(|(c, g)| c * g).sum()
    }

    pub fn min_shift(&self) -> f64 {
        self.shifts.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for RenewalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .weights
            .iter()
            .zip(&self.shifts)
            .map(|(c, g)| format!("{c}·f(z−{g})"))
            .collect();
        write!(f, "f(z) = {} + φ(z)", terms.join(" + "))
    }
}

/// A forcing term `φ` with a decay certificate `|φ(z)| ≤ c₁ e^{−c₂|z|}`.
#[derive(Clone)]
pub struct ForcingFunction {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    c1: f64,
    c2: f64,
    name: String,
}

impl fmt::Debug for ForcingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ForcingFunction({}, c1={}, c2={})", self.name, self.c1, self.c2)
    }
}

impl ForcingFunction {
    /// Wraps `f` after checking `|f(z)| ≤ 1.01 c₁ e^{−c₂|z|}` on a grid of
    /// 4001 points covering `|z| ≤ 40/c₂`.
    pub fn new(name: impl Into<String>, c1: f64, c2: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !(c1 >= 0.0 && c2 > 0.0) {
            return Err(Error::DomainError(format!("decay certificate needs c1 ≥ 0, c2 > 0, got ({c1}, {c2})")));
        }
        let reach = 40.0 / c2;
        for i in 0..=4000 {
            let z = -reach + 2.0 * reach * i as f64 / 4000.0;
            let v = f(z);
            if !v.is_finite() || v.abs() > 1.01 * c1 * (-c2 * z.abs()).exp() + 1e-300 {
                return Err(Error::ConstraintViolated(format!(
                    "decay certificate ({c1}, {c2}) fails at z = {z}: |φ| = {}",
                    v.abs()
                )));
            }
        }
        Ok(ForcingFunction {
            f: Arc::new(f),
            c1,
            c2,
            name: name.into(),
        })
    }

    /// `e^{−|z|}`.
    pub fn exp_abs() -> Self {
        ForcingFunction::new("exp-abs", 1.0, 1.0, |z: f64| (-z.abs()).exp()).unwrap()
    }

    /// `sech z`.
    pub fn sech() -> Self {
        ForcingFunction::new("sech", 2.0, 1.0, |z: f64| 1.0 / z.cosh()).unwrap()
    }

    /// `e^{−z²/(2w²)}`, certified with rate 1.
    pub fn bump(center: f64, width: f64) -> Result<Self> {
        // e^{−(z−c)²/2w²} ≤ e^{w²/2 + |c|} e^{−|z|}.
        let c1 = (width * width / 2.0 + center.abs()).exp();
        ForcingFunction::new(format!("bump({center},{width})"), c1, 1.0, move |z: f64| {
            (-(z - center).powi(2) / (2.0 * width * width)).exp()
        })
    }

    /// `φ = g − Lg`, whose solution is `g` itself.
    pub fn manufactured(eq: &RenewalEquation, g: &ForcingFunction) -> Result<Self> {
        let c1 = g.c1 * (1.0 + eq.weights.iter().zip(&eq.shifts).map(|(c, s)| c * (g.c2 * s).exp()).sum::<f64>());
        let (gf, w, s) = (g.f.clone(), eq.weights.clone(), eq.shifts.clone());
        ForcingFunction::new(format!("{} − L{}", g.name, g.name), c1, g.c2, move |z| {
            gf(z) - w.iter().zip(&s).map(|(c, g)| c * gf(z - g)).sum::<f64>()
        })
    }

    pub fn eval(&self, z: f64) -> f64 {
        (self.f)(z)
    }

    pub fn certificate(&self) -> (f64, f64) {
        (self.c1, self.c2)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Distance `R` beyond which `c₁ e^{−c₂R} ≤ eps`.
    pub fn reach(&self, eps: f64) -> f64 {
        if self.c1 <= eps {
            0.0
        } else {
            (self.c1 / eps).ln() / self.c2
        }
    }
}

/// Uniform grid `z_i = start + i·step`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl ZGrid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0) || len < 2 {
            return Err(Error::DomainError("grid needs a positive step and at least 2 points".into()));
        }
        Ok(ZGrid { start, step, len })
    }

    /// Grid over `[lo, hi]` with spacing `span/64` for arithmetic shifts and
    /// `min γ_j / 64` otherwise.
    pub fn for_equation(eq: &RenewalEquation, span: &SpanResult, lo: f64, hi: f64) -> Result<Self> {
        let step = span.span.filter(|_| span.arithmetic).unwrap_or_else(|| eq.min_shift()) / 64.0;
        let len = ((hi - lo) / step).floor() as usize + 1;
        ZGrid::new(lo, step, len)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.point(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equation_validation() {
        assert!(RenewalEquation::new(vec![0.5, 0.5], vec![1.0, 2.0]).is_ok());
        assert!(matches!(
            RenewalEquation::new(vec![0.5, 0.6], vec![1.0, 2.0]),
            Err(Error::ConstraintViolated(_))
        ));
        assert!(RenewalEquation::new(vec![0.5, 0.5], vec![1.0, 1.0]).is_err());
        assert!(RenewalEquation::new(vec![1.0], vec![0.0]).is_err());
        let eq = RenewalEquation::merged(vec![0.5, 0.5], vec![1.5, 1.5]).unwrap();
        assert_eq!((eq.weights(), eq.shifts()), (&[1.0][..], &[1.5][..]));
    }

    #[test]
    fn certificates_are_checked() {
        assert!(ForcingFunction::new("bad", 1.0, 2.0, |z: f64| (-z.abs()).exp()).is_err());
        let eq = RenewalEquation::new(vec![0.3, 0.7], vec![0.5, 1.2]).unwrap();
        assert!(ForcingFunction::manufactured(&eq, &ForcingFunction::sech()).is_ok());
        assert!(ForcingFunction::bump(3.0, 0.5).is_ok());
    }

    #[test]
    fn grid_spacing_follows_the_span() {
        let eq = RenewalEquation::new(vec![0.5, 0.5], vec![2.0, 3.0]).unwrap();
        let span = detect_arithmetic(eq.shifts(), 1e-9).unwrap();
        let g = ZGrid::for_equation(&eq, &span, 0.0, 10.0).unwrap();
        assert_eq!(g.step, 1.0 / 64.0);
        assert_eq!(g.end(), 10.0);
    }
}
