//! Arithmetic / non-arithmetic classification of shift sets.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Euclid steps before a set is declared non-arithmetic.
pub const MAX_EUCLID_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanResult {
    pub arithmetic: bool,
    /// Largest `γ` with every shift an integer multiple of it.
    pub span: Option<f64>,
    /// `γ_j = m_j γ`, collectively coprime.
    pub multipliers: Vec<u64>,
    /// Euclid steps taken.
    pub steps: usize,
}

impl fmt::Display for SpanResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(g) if self.arithmetic => write!(f, "arithmetic, span {g}"),
            _ => write!(f, "non-arithmetic (depth-{MAX_EUCLID_DEPTH})"),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Real greatest common divisor by the Euclidean algorithm.
///
/// Remainders within `abs_tol` of 0 or of the divisor end the recursion.
/// A match is accepted only if every multiplier `m_j = γ_j/γ` is at most
/// `⌊tol^{−1/3}⌋`: any real is within `1/q²` of some `p/q`, so a terminating
/// Euclid run with large multipliers is a coincidence of the tolerance, not
/// evidence of a common lattice.
pub fn detect_arithmetic(shifts: &[f64], tol: f64) -> Result<SpanResult> {
    if shifts.is_empty() {
        return Err(Error::DomainError("no shifts given".into()));
    }
    if let Some(g) = shifts.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::DomainError(format!("shifts must be positive, got {g}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::DomainError(format!("tolerance must lie in (0,1), got {tol}")));
    }
    let max = shifts.iter().cloned().fold(0.0, f64::max);
    let abs_tol = tol * max;
    let non_arithmetic = |steps| SpanResult {
        arithmetic: false,
        span: None,
        multipliers: Vec::new(),
        steps,
    };
    let mut g = shifts[0];
    let mut steps = 0;
    for &s in &shifts[1..] {
        let (mut a, mut b) = (g.max(s), g.min(s));
        loop {
            steps += 1;
            if steps > MAX_EUCLID_DEPTH {
                return Ok(non_arithmetic(steps - 1));
            }
            let r = a - (a / b).floor() * b;
            if r <= abs_tol || b - r <= abs_tol {
                break;
            }
            a = b;
            b = r;
        }
        g = b;
    }
    let guard = tol.powf(-1.0 / 3.0).floor() as u64;
    let mut m: Vec<u64> = shifts.iter().map(|s| (s / g).round() as u64).collect();
    if m.iter().any(|&k| k == 0 || k > guard) {
        return Ok(non_arithmetic(steps));
    }
    let common = m.iter().fold(0, |acc, &k| gcd(acc, k));
    m.iter_mut().for_each(|k| *k /= common);
    // Least-squares span from the integer certificate.
    let num: f64 = shifts.iter().zip(&m).map(|(s, &k)| s * k as f64).sum();
    let den: f64 = m.iter().map(|&k| (k * k) as f64).sum();
    let span = num / den;
    if shifts.iter().zip(&m).any(|(s, &k)| (s - k as f64 * span).abs() > tol * s) {
        return Ok(non_arithmetic(steps));
    }
    Ok(SpanResult {
        arithmetic: true,
        span: Some(span),
        multipliers: m,
        steps,
    })
}
