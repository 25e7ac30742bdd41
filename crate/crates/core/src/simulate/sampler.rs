//! Exact draws of one-sided stable variables and isotropic stable increments.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Exp1, Open01, StandardNormal};

use super::StableParams;
use crate::error::{Error, Result};

/// One-sided `β`-stable law at unit time, `E[e^{−λS}] = e^{−λ^β}`.
///
/// Kanter's representation: with `U` uniform on `(0,1)` and `E` standard
/// exponential, `S = (A(U)/E)^{(1−β)/β}` where
/// `A(u) = sin(βπu)^{β/(1−β)} sin((1−β)πu) / sin(πu)^{1/(1−β)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedStable {
    beta: f64,
    c1: f64,
    c2: f64,
    outer: f64,
}

impl OneSidedStable {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::DomainError(format!("one-sided stable index must lie in (0,1), got {beta}")));
        }
        Ok(OneSidedStable {
            beta,
            c1: beta / (1.0 - beta),
            c2: 1.0 / (1.0 - beta),
            outer: (1.0 - beta) / beta,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// One draw of `S_1`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        let e: f64 = rng.sample(Exp1);
        let pu = PI * u;
        let ln_a = self.c1 * (self.beta * pu).sin().ln() + ((1.0 - self.beta) * pu).sin().ln()
            - self.c2 * pu.sin().ln();
        (self.outer * (ln_a - e.ln())).exp()
    }
}

/// `S_t` for the subordinator with `E[e^{−λS_t}] = e^{−tλ^β}`, via `S_t = t^{1/β} S_1`.
pub fn sample_one_sided_stable<R: Rng + ?Sized>(beta: f64, t: f64, rng: &mut R) -> Result<f64> {
    let law = OneSidedStable::new(beta)?;
    if !(t > 0.0) {
        return Err(Error::DomainError(format!("time must be positive, got {t}")));
    }
    Ok(t.powf(1.0 / beta) * law.sample(rng))
}

/// Isotropic `α`-stable increments `X_t = √(2 S_t) Z` with `S` the `α/2`
/// subordinator and `Z` standard Gaussian, so that `E[e^{iξ·X_t}] = e^{−t|ξ|^α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicStable {
    params: StableParams,
    sub: OneSidedStable,
}

impl IsotropicStable {
    pub fn new(params: StableParams) -> Self {
        let sub = OneSidedStable::new(params.alpha() / 2.0).expect("validated by StableParams");
        IsotropicStable { params, sub }
    }

    pub fn params(&self) -> StableParams {
        self.params
    }

    /// Writes one draw of `X_1` into `out` (length `d`).
    pub fn sample_unit<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let r = (2.0 * self.sub.sample(rng)).sqrt();
        for o in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *o = r * z;
        }
    }

    /// Writes one draw of `X_t` into `out`.
    pub fn sample<R: Rng + ?Sized>(&self, t: f64, rng: &mut R, out: &mut [f64]) {
        self.sample_unit(rng, out);
        let k = t.powf(1.0 / self.params.alpha());
        out.iter_mut().for_each(|o| *o *= k);
    }
}

pub fn sample_isotropic_stable<R: Rng + ?Sized>(params: StableParams, t: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(t > 0.0) {
        return Err(Error::DomainError(format!("time must be positive, got {t}")));
    }
    let mut out = vec![0.0; params.dim()];
    IsotropicStable::new(params).sample(t, rng, &mut out);
    Ok(out)
}
