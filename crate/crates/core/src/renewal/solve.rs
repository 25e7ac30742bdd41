//! Series solution of the renewal equation and the two limit regimes.

use super::{ForcingFunction, RenewalEquation, ZGrid};
use crate::analytic::{integrate_with_breaks, QuadratureConfig};
use crate::error::{Error, Result};

/// Largest admissible interpolation error estimate in [`apply_l`].
const INTERP_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 100_000;

/// `(Lf)(z_i) = Σ_j c_j f(z_i − γ_j)` for `f` tabulated on `grid`.
///
/// Off-grid values use cubic interpolation; points left of the grid take
/// `left` (the limit of `f` at −∞). Fails with `GridTooCoarse` when the next
/// Newton term of the interpolant exceeds `1e-8` anywhere.
pub fn apply_l(eq: &RenewalEquation, grid: &ZGrid, values: &[f64], left: f64) -> Result<Vec<f64>> {
    if values.len() != grid.len {
        return Err(Error::DomainError(format!("{} values for a grid of {}", values.len(), grid.len)));
    }
    if grid.len < 5 {
        return Err(Error::GridTooCoarse("need at least 5 grid points".into()));
    }
    let at = |k: i64| if k < 0 { left } else { values[(k as usize).min(grid.len - 1)] };
    let mut worst = 0.0f64;
    let mut out = vec![0.0; grid.len];
    for (i, o) in out.iter_mut().enumerate() {
        for (c, g) in eq.weights().iter().zip(eq.shifts()) {
            let u = i as f64 - g / grid.step;
            let k = u.round();
            let v = if (u - k).abs() <= 1e-9 {
                at(k as i64)
            } else {
                // Stencil k0..k0+3 around u, kept inside the right end of the grid.
                let k0 = (u.floor() as i64 - 1).min(grid.len as i64 - 5);
                let s = u - k0 as f64;
                let f: [f64; 5] = std::array::from_fn(|m| at(k0 + m as i64));
                let w = [
                    -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
                    s * (s - 2.0) * (s - 3.0) / 2.0,
                    -s * (s - 1.0) * (s - 3.0) / 2.0,
                    s * (s - 1.0) * (s - 2.0) / 6.0,
                ];
                let d4 = f[0] - 4.0 * f[1] + 6.0 * f[2] - 4.0 * f[3] + f[4];
                worst = worst.max((d4 * s * (s - 1.0) * (s - 2.0) * (s - 3.0) / 24.0).abs());
                (0..4).map(|m| w[m] * f[m]).sum()
            };
            *o += c * v;
        }
    }
    if worst > INTERP_TOL {
        return Err(Error::GridTooCoarse(format!(
            "interpolation error estimate {worst:e} exceeds {INTERP_TOL:e}; refine the grid"
        )));
    }
    Ok(out)
}

/// Solution of `f = Lf + φ` as the series `Σ_n L^n φ`.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub grid: ZGrid,
    pub values: Vec<f64>,
    /// Terms `L^n φ` summed.
    pub iterations: usize,
    /// `max_i |f − Lf − φ|(z_i)`.
    pub residual: f64,
    /// Certified bound on the omitted terms over the grid.
    pub tail_bound: f64,
    /// Lattice points `Σ k_j γ_j` with their weights, over all summed terms.
    atoms: Vec<(f64, f64)>,
    phi: ForcingFunction,
}

impl SeriesSolution {
    /// The partial sum at any `z`.
    pub fn eval(&self, z: f64) -> f64 {
        self.atoms.iter().map(|(p, w)| w * self.phi.eval(z - p)).sum()
    }

    pub fn atoms(&self) -> usize {
        self.atoms.len()
    }
}

/// Iterates `f_{k+1} = L f_k + φ` from `f_0 = 0` until the new term is below
/// `tol` on the grid and the decay certificate bounds all later terms by `tol`.
///
/// `L^n φ(z) = Σ w φ(z − p)` over the lattice points `p` of `n` shifts, so
/// each iterate is evaluated exactly (no interpolation); coinciding lattice
/// points are merged, and points far right of the grid are dropped with their
/// contribution added to `tail_bound`.
pub fn solve_series(eq: &RenewalEquation, phi: &ForcingFunction, grid: &ZGrid, tol: f64) -> Result<SeriesSolution> {
    if !(tol > 0.0) {
        return Err(Error::DomainError(format!("tolerance must be positive, got {tol}")));
    }
    let (c1, c2) = phi.certificate();
    let z_max = grid.end();
    let gmin = eq.min_shift();
    let geometric = 1.0 / (1.0 - (-c2 * gmin).exp());
    let cutoff = z_max + phi.reach(tol * 1e-6);
    let mut level: Vec<(f64, f64)> = vec![(0.0, 1.0)];
    let mut atoms = Vec::new();
    let mut values = vec![0.0; grid.len];
    let mut dropped = 0.0;
    let mut iterations = 0;
    let tail = loop {
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NoConvergence(format!("no convergence after {MAX_ITERATIONS} terms")));
        }
        let mut inc = 0.0f64;
        for (i, v) in values.iter_mut().enumerate() {
            let z = grid.point(i);
            let t: f64 = level.iter().map(|(p, w)| w * phi.eval(z - p)).sum();
            *v += t;
            inc = inc.max(t.abs());
        }
        iterations += 1;
        atoms.extend_from_slice(&level);
        let mut next: Vec<(f64, f64)> = Vec::with_capacity(level.len() * eq.shifts().len());
        for (p, w) in &level {
            for (c, g) in eq.weights().iter().zip(eq.shifts()) {
                next.push((p + g, w * c));
            }
        }
        next.sort_by(|a, b| a.0.total_cmp(&b.0));
        level.clear();
        for (p, w) in next {
            if p > cutoff {
                dropped += w;
                continue;
            }
            match level.last_mut() {
                Some(last) if (p - last.0).abs() <= 1e-12 * (1.0 + p) => last.1 += w,
                _ => level.push((p, w)),
            }
        }
        // Every later term lies right of the smallest remaining lattice point.
        let bound = match level.first() {
            Some((p, _)) if *p > z_max => c1 * (-c2 * (p - z_max)).exp() * geometric,
            Some(_) => f64::INFINITY,
            None => 0.0,
        };
        let bound = bound + dropped * tol * 1e-6 * geometric;
        if inc < tol && bound < tol {
            break bound;
        }
    };
    let sol = SeriesSolution {
        grid: *grid,
        values,
        iterations,
        residual: 0.0,
        tail_bound: tail,
        atoms,
        phi: phi.clone(),
    };
    let residual = grid
        .points()
        .zip(&sol.values)
        .map(|(z, f)| {
            let lf: f64 = eq.weights().iter().zip(eq.shifts()).map(|(c, g)| c * sol.eval(z - g)).sum();
            (f - lf - phi.eval(z)).abs()
        })
        .fold(0.0, f64::max);
    Ok(SeriesSolution { residual, ..sol })
}

fn integral(phi: &ForcingFunction) -> Result<f64> {
    let r = phi.reach(1e-15).max(1.0);
    let n = (2.0 * r).ceil() as usize;
    let points: Vec<f64> = (0..=n).map(|i| -r + 2.0 * r * i as f64 / n as f64).collect();
    let cfg = QuadratureConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        ..Default::default()
    };
    Ok(integrate_with_breaks(|z| phi.eval(z), &points, &cfg)?.value)
}

/// `lim_{z→∞} f(z) = (Σ c_j γ_j)^{−1} ∫ φ` for non-arithmetic shifts.
pub fn asymptote_nonarithmetic(eq: &RenewalEquation, phi: &ForcingFunction) -> Result<f64> {
    Ok(integral(phi)? / eq.mean_shift())
}

/// `z ↦ scale · Σ_{k∈ℤ} φ(z − kP)`, periodic with period `P`.
#[derive(Debug, Clone)]
pub struct PeriodicSampler {
    period: f64,
    scale: f64,
    reach: f64,
    phi: ForcingFunction,
}

impl PeriodicSampler {
    pub fn new(phi: &ForcingFunction, period: f64, scale: f64) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::DomainError(format!("period must be positive, got {period}")));
        }
        Ok(PeriodicSampler {
            period,
            scale,
            reach: phi.reach(1e-16),
            phi: phi.clone(),
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Certified bound on the omitted lattice terms.
    pub fn truncation_bound(&self) -> f64 {
        let (c1, c2) = self.phi.certificate();
        let q = (-c2 * self.period).exp();
        2.0 * self.scale.abs() * c1 * (-c2 * self.reach).exp() / (1.0 - q)
    }

    pub fn eval(&self, z: f64) -> f64 {
        // Reduce first so that z and z + P give the same sum.
        let z0 = z.rem_euclid(self.period);
        let lo = ((z0 - self.reach) / self.period).floor() as i64;
        let hi = ((z0 + self.reach) / self.period).ceil() as i64;
        self.scale * (lo..=hi).map(|k| self.phi.eval(z0 - k as f64 * self.period)).sum::<f64>()
    }

    /// Mean over one period by adaptive quadrature.
    pub fn mean(&self) -> Result<f64> {
        let cfg = QuadratureConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            ..Default::default()
        };
        let pts: Vec<f64> = (0..=16).map(|i| self.period * i as f64 / 16.0).collect();
        Ok(integrate_with_breaks(|z| self.eval(z), &pts, &cfg)?.value / self.period)
    }
}

/// `f(z) − (γ/Σ c_j γ_j) Σ_k φ(z − kγ) → 0` for arithmetic shifts with span `γ`.
pub fn asymptote_arithmetic(eq: &RenewalEquation, phi: &ForcingFunction, span: f64) -> Result<PeriodicSampler> {
    if let Some(g) = eq.shifts().iter().find(|g| ((*g / span) - (*g / span).round()).abs() > 1e-6) {
        return Err(Error::DomainError(format!("shift {g} is not a multiple of span {span}")));
    }
    PeriodicSampler::new(phi, span, span / eq.mean_shift())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::renewal::detect_arithmetic;

    #[test]
    fn l_preserves_constants_and_exponentials() {
        let eq = RenewalEquation::new(vec![0.25, 0.75], vec![0.5, 1.25]).unwrap();
        let grid = ZGrid::new(0.0, 0.25 / 64.0, 2000).unwrap();
        let ones = vec![1.0; grid.len];
        let l1 = apply_l(&eq, &grid, &ones, 1.0).unwrap();
        assert!(l1.iter().all(|v| (v - 1.0).abs() < 1e-14));
        // Off-grid shifts exercise the interpolant.
        let eq = RenewalEquation::new(vec![0.4, 0.6], vec![0.3, 0.77]).unwrap();
        let grid = ZGrid::new(-5.0, 0.005, 2000).unwrap();
        let f: Vec<f64> = grid.points().map(f64::exp).collect();
        let lf = apply_l(&eq, &grid, &f, 0.0).unwrap();
        let k: f64 = eq.weights().iter().zip(eq.shifts()).map(|(c, g)| c * (-g).exp()).sum();
        for (i, z) in grid.points().enumerate().skip(200) {
            assert!((lf[i] - k * z.exp()).abs() < 1e-9 * z.exp().max(1.0));
        }
    }

    #[test]
    fn single_shift_is_a_pure_translation() {
        let eq = RenewalEquation::new(vec![1.0], vec![0.5]).unwrap();
        let grid = ZGrid::new(0.0, 0.5 / 64.0, 500).unwrap();
        let f: Vec<f64> = grid.points().map(|z| z * z).collect();
        let lf = apply_l(&eq, &grid, &f, 0.0).unwrap();
        assert_eq!(lf[64..], f[..500 - 64]);
    }

    #[test]
    fn kinks_trip_the_interpolation_guard() {
        let eq = RenewalEquation::new(vec![0.5, 0.5], vec![2f64.ln(), 3f64.ln()]).unwrap();
        let grid = ZGrid::new(-5.0, 2f64.ln() / 64.0, 1000).unwrap();
        let f: Vec<f64> = grid.points().map(|z| (-z.abs()).exp()).collect();
        assert!(matches!(apply_l(&eq, &grid, &f, 0.0), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn manufactured_solution() {
        let eq = RenewalEquation::new(vec![0.3, 0.7], vec![0.9, 1.4]).unwrap();
        let phi = ForcingFunction::manufactured(&eq, &ForcingFunction::sech()).unwrap();
        let span = detect_arithmetic(eq.shifts(), 1e-9).unwrap();
        let grid = ZGrid::for_equation(&eq, &span, -10.0, 10.0).unwrap();
        let sol = solve_series(&eq, &phi, &grid, 1e-10).unwrap();
        let err = grid.points().zip(&sol.values).map(|(z, f)| (f - 1.0 / z.cosh()).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        assert!(sol.residual <= 2e-10);
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let eq = RenewalEquation::new(vec![1.0], vec![1.0]).unwrap();
        let zero = ForcingFunction::new("zero", 0.0, 1.0, |_| 0.0).unwrap();
        let grid = ZGrid::new(0.0, 1.0 / 64.0, 100).unwrap();
        let sol = solve_series(&eq, &zero, &grid, 1e-10).unwrap();
        assert!(sol.values.iter().all(|v| *v == 0.0));
        assert_eq!(asymptote_nonarithmetic(&eq, &zero).unwrap(), 0.0);
    }

    #[test]
    fn cantor_equation_is_a_direct_sum() {
        let alpha = 1.5;
        let g = alpha * 3f64.ln();
        let eq = RenewalEquation::merged(vec![0.5, 0.5], vec![g, g]).unwrap();
        let phi = ForcingFunction::exp_abs();
        let grid = ZGrid::new(-5.0, g / 64.0, 1500).unwrap();
        let sol = solve_series(&eq, &phi, &grid, 1e-12).unwrap();
        for (z, f) in grid.points().zip(&sol.values) {
            let direct: f64 = (0..200).map(|n| (-(z - n as f64 * g).abs()).exp()).sum();
            assert!((f - direct).abs() < 1e-8);
        }
    }

    #[test]
    fn non_arithmetic_limit() {
        let eq = RenewalEquation::new(vec![0.5, 0.5], vec![2f64.ln(), 3f64.ln()]).unwrap();
        let phi = ForcingFunction::exp_abs();
        let limit = asymptote_nonarithmetic(&eq, &phi).unwrap();
        assert!((limit - 4.0 / 6f64.ln()).abs() < 1e-10);
        let grid = ZGrid::new(-10.0, 2f64.ln() / 64.0, 2600).unwrap();
        let sol = solve_series(&eq, &phi, &grid, 1e-10).unwrap();
        assert!((sol.eval(30.0) - limit).abs() < 1e-3, "{}", sol.eval(30.0));
        // Left decay: fitted rate over the leftmost unit of z.
        let k = (1.0 / grid.step) as usize;
        let rate = (sol.values[k] / sol.values[0]).ln() / (k as f64 * grid.step);
        assert!((rate - 1.0).abs() < 1e-6, "{rate}");
    }

    #[test]
    fn arithmetic_sampler() {
        let g = 2f64.ln();
        let eq = RenewalEquation::new(vec![1.0], vec![g]).unwrap();
        let phi = ForcingFunction::exp_abs();
        let sampler = asymptote_arithmetic(&eq, &phi, g).unwrap();
        assert_eq!(sampler.eval(0.0), sampler.eval(g));
        for z in [0.1, 3.7, -2.2] {
            assert!((sampler.eval(z) - sampler.eval(z + g)).abs() < 1e-10);
        }
        let riemann = sampler.mean().unwrap();
        assert!((riemann - asymptote_nonarithmetic(&eq, &phi).unwrap()).abs() < 1e-8);
        let grid = ZGrid::new(0.0, g / 64.0, 64 * 40).unwrap();
        let sol = solve_series(&eq, &phi, &grid, 1e-12).unwrap();
        for k in 0..3 {
            let z = 20.0 + k as f64 * g;
            assert!((sol.eval(z) - sampler.eval(z)).abs() < 1e-3);
        }
        assert!(asymptote_arithmetic(&eq, &phi, 0.3).is_err());
    }
}
