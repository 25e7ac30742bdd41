//! Power-law fits of deficits, log-periodic extraction and rate comparison.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use super::plan::Estimator;
use super::records::RunRecord;
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::renewal::detect_arithmetic;

/// `deficit ≈ amplitude · t^exponent`, fitted on `ln deficit` against `ln t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub exponent: f64,
    pub exponent_stderr: f64,
    pub amplitude: f64,
    pub amplitude_stderr: f64,
    pub n_points: usize,
    /// Weighted residual sum of squares over `n − 2`.
    pub chi2_reduced: f64,
    /// `(ln t, ln deficit − fit)`.
    pub residuals: Vec<(f64, f64)>,
}

impl FitResult {
    /// 95% interval for the exponent.
    pub fn exponent_ci(&self) -> (f64, f64) {
        (self.exponent - 1.96 * self.exponent_stderr, self.exponent + 1.96 * self.exponent_stderr)
    }
}

/// Solves `A x = b` for small symmetric positive systems and also returns `A⁻¹`.
fn solve(mut a: Vec<Vec<f64>>, b: &[f64]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = b.len();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        rhs.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        rhs[col] /= p;
        for i in 0..n {
            if i != col {
                let f = a[i][col];
                for j in 0..n {
                    a[i][j] -= f * a[col][j];
                    inv[i][j] -= f * inv[col][j];
                }
                rhs[i] -= f * rhs[col];
            }
        }
    }
    Some((rhs, inv))
}

/// Weighted least squares for `y ≈ Σ_k β_k basis_k(x)`; returns `(β, cov, rss)`
/// where `cov = (XᵀWX)⁻¹` and `rss` is weighted.
fn wls(x: &[f64], y: &[f64], w: &[f64], basis: &dyn Fn(f64) -> Vec<f64>) -> Option<(Vec<f64>, Vec<Vec<f64>>, f64)> {
    let rows: Vec<Vec<f64>> = x.iter().map(|&xi| basis(xi)).collect();
    let k = rows[0].len();
    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    for ((r, &yi), &wi) in rows.iter().zip(y).zip(w) {
        for i in 0..k {
            xty[i] += wi * r[i] * yi;
            for j in 0..k {
                xtx[i][j] += wi * r[i] * r[j];
            }
        }
    }
    let (beta, cov) = solve(xtx, &xty)?;
    let rss = rows
        .iter()
        .zip(y)
        .zip(w)
        .map(|((r, &yi), &wi)| {
            let f: f64 = r.iter().zip(&beta).map(|(a, b)| a * b).sum();
            wi * (yi - f).powi(2)
        })
        .sum();
    Some((beta, cov, rss))
}

/// `(ln t, ln deficit, weight)` after the resolution checks.
struct LogSeries {
    x: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
    /// Weights are inverse variances; otherwise unit weights and the residual
    /// scatter sets the error.
    known_variance: bool,
}

fn log_series(points: &[(f64, f64, f64)]) -> Result<LogSeries> {
    if points.len() < 4 {
        return Err(Error::InsufficientRange(format!("need at least 4 points, got {}", points.len())));
    }
    for &(t, d, se) in points {
        if !(t > 0.0) {
            return Err(Error::DomainError(format!("time must be positive, got {t}")));
        }
        if !(d > 2.0 * se) || !(d > 0.0) {
            return Err(Error::DeficitNotResolved(format!(
                "deficit {d:e} at t = {t:e} is not above 2 stderr ({se:e})"
            )));
        }
    }
    let known_variance = points.iter().all(|p| p.2 > 0.0);
    Ok(LogSeries {
        x: points.iter().map(|p| p.0.ln()).collect(),
        y: points.iter().map(|p| p.1.ln()).collect(),
        w: points
            .iter()
            .map(|&(_, d, se)| if known_variance { (d / se).powi(2) } else { 1.0 })
            .collect(),
        known_variance,
    })
}

/// Fits `deficit = A t^θ` to `(t, deficit, stderr)` triples by weighted least
/// squares on the logs with weights `(stderr/deficit)^{−2}`.
///
/// If any stderr is zero the fit is unweighted and the exponent error comes
/// from the residual scatter.
pub fn fit_power_law(points: &[(f64, f64, f64)]) -> Result<FitResult> {
    let s = log_series(points)?;
    let n = s.x.len();
    let xbar = s.x.iter().sum::<f64>() / n as f64;
    let (beta, cov, rss) = wls(&s.x, &s.y, &s.w, &|x| vec![1.0, x - xbar])
        .ok_or_else(|| Error::InsufficientRange("all points share one t".into()))?;
    let chi2_reduced = if n > 2 { rss / (n - 2) as f64 } else { 0.0 };
    let scale = if s.known_variance { 1.0 } else { chi2_reduced };
    let intercept = beta[0] - beta[1] * xbar;
    // var(intercept) with x centred: var(β0) + x̄² var(β1) − 2 x̄ cov(β0, β1).
    let var_icpt = scale * (cov[0][0] + xbar * xbar * cov[1][1] - 2.0 * xbar * cov[0][1]);
    let amplitude = intercept.exp();
    Ok(FitResult {
        exponent: beta[1],
        exponent_stderr: (scale * cov[1][1]).sqrt(),
        amplitude,
        amplitude_stderr: amplitude * var_icpt.max(0.0).sqrt(),
        n_points: n,
        chi2_reduced,
        residuals: s.x.iter().zip(&s.y).map(|(x, y)| (*x, y - beta[0] - beta[1] * (x - xbar))).collect(),
    })
}

/// `(t, deficit, stderr)` of one record series; records without a value are skipped.
pub fn deficit_points(records: &[RunRecord]) -> Vec<(f64, f64, f64)> {
    records
        .iter()
        .filter_map(|r| Some((r.t, r.deficit()?, r.stderr()?)))
        .collect()
}

/// [`fit_power_law`] on the deficits of a single `(estimator, α)` record series.
pub fn fit_power_exponent(records: &[RunRecord]) -> Result<FitResult> {
    if let Some(r) = records.iter().find(|r| (r.estimator, r.alpha) != (records[0].estimator, records[0].alpha)) {
        return Err(Error::DomainError(format!(
            "records mix series: ({}, α={}) and ({}, α={})",
            records[0].estimator, records[0].alpha, r.estimator, r.alpha
        )));
    }
    fit_power_law(&deficit_points(records))
}

/// A sinusoid in `ln t` on top of the power law:
/// `ln deficit = a + θ ln t + A sin(2π ln t / P) + B cos(2π ln t / P)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogPeriodic {
    /// Best period in `ln t` within ±30% of the expected one.
    pub period: f64,
    /// `√(A² + B²)`, the relative modulation of the deficit.
    pub amplitude: f64,
    pub phase: f64,
    /// Exponent of the joint fit.
    pub exponent: f64,
    pub f_statistic: f64,
    /// Tail probability of `F(2, n − 4)` at the scanned optimum. The scan
    /// itself is not corrected for, so this is optimistic.
    pub p_value: f64,
}

impl LogPeriodic {
    pub fn significance(&self) -> f64 {
        1.0 - self.p_value
    }
}

/// Scans periods in `[0.7 P, 1.3 P]` for the sinusoid that most reduces the
/// weighted residual of the power-law fit.
pub fn log_periodic_extract(points: &[(f64, f64, f64)], expected_period: f64) -> Result<LogPeriodic> {
    if !(expected_period > 0.0) {
        return Err(Error::DomainError(format!("period must be positive, got {expected_period}")));
    }
    let s = log_series(points)?;
    let n = s.x.len();
    let (lo, hi) = s.x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let per_unit = (n - 1) as f64 / (hi - lo);
    if per_unit * expected_period < 8.0 {
        return Err(Error::GridTooCoarse(format!(
            "{:.1} points per expected period {expected_period:.4}; need 8",
            per_unit * expected_period
        )));
    }
    if hi - lo < expected_period || n < 6 {
        return Err(Error::InsufficientRange(format!(
            "ln t range {:.3} is shorter than one period {expected_period:.4}",
            hi - lo
        )));
    }
    let xbar = s.x.iter().sum::<f64>() / n as f64;
    let (_, _, rss0) = wls(&s.x, &s.y, &s.w, &|x| vec![1.0, x - xbar])
        .ok_or_else(|| Error::InsufficientRange("all points share one t".into()))?;
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    const SCAN: usize = 601;
    for k in 0..SCAN {
        let p = expected_period * (0.7 + 0.6 * k as f64 / (SCAN - 1) as f64);
        let w = 2.0 * PI / p;
        let Some((beta, _, rss)) = wls(&s.x, &s.y, &s.w, &|x| vec![1.0, x - xbar, (w * x).sin(), (w * x).cos()]) else {
            continue;
        };
        if best.as_ref().is_none_or(|b| rss < b.2) {
            best = Some((p, beta, rss));
        }
    }
    let (period, beta, rss1) = best.ok_or_else(|| Error::NoConvergence("period scan found no fit".into()))?;
    let m = (n - 4) as f64;
    let f_statistic = if rss1 > 0.0 { ((rss0 - rss1) / 2.0) / (rss1 / m) } else { f64::INFINITY };
    let p_value = if f_statistic.is_finite() {
        (1.0 + 2.0 * f_statistic.max(0.0) / m).powf(-m / 2.0)
    } else {
        0.0
    };
    Ok(LogPeriodic {
        period,
        amplitude: beta[2].hypot(beta[3]),
        phase: beta[3].atan2(beta[2]),
        exponent: beta[1],
        f_statistic,
        p_value,
    })
}

/// Predicted deficit exponent of an estimator on a domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub exponent: f64,
    /// The deficit carries an extra `ln(1/t)` factor, so the fitted slope
    /// falls slightly below `exponent`.
    pub log_correction: bool,
}

/// Predicted exponents: `(d−b)/α` or 1 for the spectral heat content on a
/// fractal, `1/α`, `t ln(1/t)` or `t` for the regional heat content and the
/// interaction defect, and the same smooth-boundary rates for SKBM on
/// non-fractal domains. `None` where no rate is known.
pub fn predicted_exponent(domain: &Domain, estimator: Estimator, alpha: f64) -> Option<Prediction> {
    let smooth = |a: f64| Prediction {
        exponent: if a > 1.0 { 1.0 / a } else { 1.0 },
        log_correction: a == 1.0,
    };
    match estimator {
        Estimator::Shc => {
            let gap = domain.boundary_dimension().map(|b| domain.dim() as f64 - b).unwrap_or(1.0);
            Some(Prediction {
                exponent: if alpha > gap { gap / alpha } else { 1.0 },
                log_correction: alpha == gap,
            })
        }
        Estimator::Rhc | Estimator::Defect => Some(smooth(alpha)),
        Estimator::Skbm => (!domain.is_fractal()).then(|| smooth(alpha)),
    }
}

/// Period in `ln t` of the oscillation a lattice drum can carry: the span of
/// the shifts `α ln(1/r_j)`. `None` for non-fractal or non-arithmetic drums.
pub fn log_period(domain: &Domain, alpha: f64) -> Option<f64> {
    let ratios = match domain {
        Domain::CantorComplement { .. } => vec![1.0 / 3.0; 2],
        Domain::GasketComplement { .. } => vec![0.5; 3],
        Domain::IfsDrum { spec, .. } => spec.ratios(),
        Domain::Image { inner, .. } => return log_period(inner, alpha),
        _ => return None,
    };
    let shifts: Vec<f64> = ratios.iter().map(|r| alpha * (1.0 / r).ln()).collect();
    let span = detect_arithmetic(&shifts, 1e-9).ok()?;
    span.arithmetic.then_some(span.span).flatten()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub estimator: Estimator,
    pub alpha: f64,
    pub exponent: f64,
    pub stderr: f64,
    pub predicted: Option<Prediction>,
    /// The prediction lies outside the 95% interval.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub domain: String,
    pub rows: Vec<RateRow>,
}

/// Sets fitted exponents against their predictions.
pub fn compare_rates(domain: &Domain, fits: &[(Estimator, f64, FitResult)]) -> RateReport {
    let rows = fits
        .iter()
        .map(|(est, alpha, fit)| {
            let predicted = predicted_exponent(domain, *est, *alpha);
            let (lo, hi) = fit.exponent_ci();
            RateRow {
                estimator: *est,
                alpha: *alpha,
                exponent: fit.exponent,
                stderr: fit.exponent_stderr,
                predicted,
                flagged: predicted.is_some_and(|p| p.exponent < lo || p.exponent > hi),
            }
        })
        .collect();
    RateReport { domain: domain.id(), rows }
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.domain)?;
        writeln!(f, "{:<8} {:>6} {:>10} {:>9} {:>10}  ", "est", "alpha", "exponent", "stderr", "predicted")?;
        for r in &self.rows {
            let pred = match r.predicted {
                Some(p) if p.log_correction => format!("{:.4}*", p.exponent),
                Some(p) => format!("{:.4}", p.exponent),
                None => "-".into(),
            };
            writeln!(
                f,
                "{:<8} {:>6} {:>10.4} {:>9.4} {:>10}  {}",
                r.estimator.name(),
                r.alpha,
                r.exponent,
                r.stderr,
                pred,
                if r.flagged { "OUTSIDE CI" } else { "" }
            )?;
        }
        if self.rows.iter().any(|r| r.predicted.is_some_and(|p| p.log_correction)) {
            writeln!(f, "* with a ln(1/t) factor")?;
        }
        Ok(())
    }
}
