//! Survival probabilities and heat-content estimators.

use rand::Rng;

use super::engine::{finish, run_units, walk};
use super::{config_digest, Estimate, IsotropicStable, McConfig, OneSidedStable, StableParams, StartPoints};
use crate::error::{Error, Result};
use crate::geometry::{cantor, Domain};

/// Largest number of grid levels a walk tracks.
const MAX_LEVELS: usize = 17;

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::DomainError(format!("time must be positive, got {t}")));
    }
    Ok(())
}

fn check_dims(domain: &Domain, params: StableParams) -> Result<()> {
    if domain.dim() != params.dim() {
        return Err(Error::DomainError(format!(
            "process dimension {} does not match domain dimension {}",
            params.dim(),
            domain.dim()
        )));
    }
    Ok(())
}

fn describe(kind: &str, domain: &Domain, params: StableParams, t: f64, cfg: &McConfig, depth: u32) -> String {
    let s = &cfg.scheme;
    format!(
        "{kind}|{}|alpha={}|d={}|t={t:e}|n={}|steps={}|levels={}|depth={depth}|seed={}|unit={}|points={:?}",
        domain.id(),
        params.alpha(),
        params.dim(),
        cfg.n,
        s.n_steps,
        s.richardson_levels,
        cfg.seeds.master_seed,
        cfg.unit_size,
        cfg.points,
    )
}

/// Spatial set-up shared by the integrated estimators: the point sequence and
/// the factor turning indicator means into heat contents.
struct Spatial {
    points: StartPoints,
    scale: f64,
}

impl Spatial {
    fn new(domain: &Domain, cfg: &McConfig) -> Result<Self> {
        let cell = domain.sampling_cell()?;
        let scale = if cell.fills_domain { domain.volume()? } else { cell.volume() };
        let points = StartPoints::new(cell, cfg.points, &mut cfg.seeds.shift_stream());
        Ok(Spatial { points, scale })
    }
}

/// Stable increments over `k` fine steps of length `h`.
struct StableSteps {
    law: IsotropicStable,
    h: f64,
    unit: f64,
}

impl StableSteps {
    fn new(params: StableParams, h: f64) -> Self {
        StableSteps {
            law: IsotropicStable::new(params),
            h,
            unit: h.powf(1.0 / params.alpha()),
        }
    }

    fn advance<R: Rng + ?Sized>(&self, rng: &mut R, pos: &mut [f64], k: u64, inc: &mut [f64]) {
        self.law.sample_unit(rng, inc);
        let s = if k == 1 {
            self.unit
        } else {
            (k as f64 * self.h).powf(1.0 / self.law.params().alpha())
        };
        pos.iter_mut().zip(inc.iter()).for_each(|(p, x)| *p += s * x);
    }
}

fn levels_of(cfg: &McConfig) -> Result<usize> {
    let w = cfg.scheme.richardson_levels as usize + 1;
    if w > MAX_LEVELS {
        return Err(Error::DomainError(format!("at most {} Richardson levels", MAX_LEVELS - 1)));
    }
    Ok(w)
}

fn path_depth(domain: &Domain, t: f64, alpha: f64, cfg: &McConfig) -> u32 {
    if !domain.is_fractal() {
        return 0;
    }
    cfg.scheme.membership_depth.unwrap_or_else(|| domain.resolve_depth(t, alpha)).clamp(1, cantor::MAX_DEPTH)
}

fn clamp_heat(mut est: Estimate, volume: f64) -> Estimate {
    est.value = est.value.clamp(0.0, volume);
    est
}

/// `P_x(τ_D > t)` from `cfg.n` grid-monitored paths started at `x`.
pub fn survival_prob(domain: &Domain, x: &[f64], params: StableParams, t: f64, cfg: &McConfig) -> Result<Estimate> {
    check_time(t)?;
    check_dims(domain, params)?;
    cfg.validate()?;
    let depth = path_depth(domain, t, params.alpha(), cfg);
    if x.len() != domain.dim() || !domain.contains(x, depth) {
        return Err(Error::DomainError(format!("starting point {x:?} is not in {}", domain.id())));
    }
    let w = levels_of(cfg)?;
    let n_fine = cfg.scheme.finest_steps();
    let steps = StableSteps::new(params, t / n_fine as f64);
    let d = params.dim();
    let tally = run_units(cfg, w, |rng, _, tally| {
        let (mut pos, mut inc) = ([0.0; 8], [0.0; 8]);
        pos[..d].copy_from_slice(x);
        let mut alive = [true; MAX_LEVELS];
        walk(
            &mut pos[..d],
            w as u32 - 1,
            n_fine,
            &mut alive[..w],
            |p, k| steps.advance(rng, p, k, &mut inc[..d]),
            |p, _| domain.contains(p, depth),
        );
        tally.add(&counts(&alive)[..w]);
    });
    let text = format!("{}|x={x:?}", describe("survival", domain, params, t, cfg, depth));
    Ok(clamp_heat(finish(&tally, 1.0, w >= 3, cfg, config_digest(&text), depth), 1.0))
}

fn counts(alive: &[bool]) -> [i64; MAX_LEVELS] {
    let mut out = [0; MAX_LEVELS];
    alive.iter().zip(out.iter_mut()).for_each(|(&a, o)| *o = a as i64);
    out
}

/// Spectral heat content `Q_D(t) = ∫_D P_x(τ_D > t) dx`, one grid-monitored
/// path per starting point.
pub fn shc(domain: &Domain, params: StableParams, t: f64, cfg: &McConfig) -> Result<Estimate> {
    check_time(t)?;
    check_dims(domain, params)?;
    cfg.validate()?;
    let depth = path_depth(domain, t, params.alpha(), cfg);
    let spatial = Spatial::new(domain, cfg)?;
    let w = levels_of(cfg)?;
    let n_fine = cfg.scheme.finest_steps();
    let steps = StableSteps::new(params, t / n_fine as f64);
    let d = params.dim();
    let tally = run_units(cfg, w, |rng, i, tally| {
        let (mut pos, mut inc) = ([0.0; 8], [0.0; 8]);
        spatial.points.point(i, rng, &mut pos[..d]);
        let mut alive = [false; MAX_LEVELS];
        if domain.contains(&pos[..d], depth) {
            alive[..w].fill(true);
            walk(
                &mut pos[..d],
                w as u32 - 1,
                n_fine,
                &mut alive[..w],
                |p, k| steps.advance(rng, p, k, &mut inc[..d]),
                |p, _| domain.contains(p, depth),
            );
        }
        tally.add(&counts(&alive)[..w]);
    });
    let text = describe("shc", domain, params, t, cfg, depth);
    let vol = domain.volume()?;
    Ok(clamp_heat(finish(&tally, spatial.scale, w >= 3, cfg, config_digest(&text), depth), vol))
}

/// Regular heat content `H_D(t) = ∫_D P_x(X_t ∈ D) dx` from one exact
/// increment per starting point; no grid and no discretisation bias.
///
/// On fractal domains the default depth is the maximum, and samples whose
/// start or end point lies in the unresolved residual set are counted in
/// `Estimate::unresolved` (scored as outside).
pub fn rhc(domain: &Domain, params: StableParams, t: f64, cfg: &McConfig) -> Result<Estimate> {
    check_time(t)?;
    check_dims(domain, params)?;
    cfg.validate()?;
    let depth = if domain.is_fractal() {
        cfg.scheme.membership_depth.unwrap_or(cantor::MAX_DEPTH).clamp(1, cantor::MAX_DEPTH)
    } else {
        0
    };
    let spatial = Spatial::new(domain, cfg)?;
    let law = IsotropicStable::new(params);
    let track = domain.is_fractal() && spatial.points.cell().fills_domain;
    let d = params.dim();
    let tally = run_units(cfg, 1, |rng, i, tally| {
        let (mut x, mut inc) = ([0.0; 8], [0.0; 8]);
        spatial.points.point(i, rng, &mut x[..d]);
        let mut hit = 0;
        if domain.contains(&x[..d], depth) {
            law.sample(t, rng, &mut inc[..d]);
            x[..d].iter_mut().zip(&inc[..d]).for_each(|(p, v)| *p += v);
            if domain.contains(&x[..d], depth) {
                hit = 1;
            } else if track && spatial.points.cell().contains(&x[..d]) {
                tally.unresolved += 1;
            }
        } else if track {
            tally.unresolved += 1;
        }
        tally.add(&[hit]);
    });
    let text = describe("rhc", domain, params, t, cfg, depth);
    Ok(finish(&tally, spatial.scale, false, cfg, config_digest(&text), depth))
}

/// Heat content of Brownian motion killed on exiting `D` and then time-changed
/// by the `α/2`-stable subordinator: `∫_D P_x(τ_D^{BM} > S_t) dx`.
///
/// The Brownian path uses `E[e^{iξW_s}] = e^{−s|ξ|²}` (coordinate variance
/// `2s`) on a grid of `[0, S_t]`. Fractal domains are refused unless
/// `cfg.allow_fractal_skbm` is set, since both the grid and the membership
/// depth then bias the result.
pub fn skbm_shc(domain: &Domain, params: StableParams, t: f64, cfg: &McConfig) -> Result<Estimate> {
    check_time(t)?;
    check_dims(domain, params)?;
    cfg.validate()?;
    if domain.is_fractal() && !cfg.allow_fractal_skbm {
        return Err(Error::UnsupportedDomain(format!(
            "{} is fractal; set allow_fractal_skbm to run with the depth caveat",
            domain.id()
        )));
    }
    let depth = path_depth(domain, t, params.alpha(), cfg);
    let spatial = Spatial::new(domain, cfg)?;
    let w = levels_of(cfg)?;
    let n_fine = cfg.scheme.finest_steps();
    let sub = OneSidedStable::new(params.alpha() / 2.0)?;
    let time_scale = t.powf(2.0 / params.alpha());
    let d = params.dim();
    let tally = run_units(cfg, w, |rng, i, tally| {
        let mut pos = [0.0; 8];
        spatial.points.point(i, rng, &mut pos[..d]);
        let mut alive = [false; MAX_LEVELS];
        if domain.contains(&pos[..d], depth) {
            let s = time_scale * sub.sample(rng);
            let unit_var = 2.0 * s / n_fine as f64;
            alive[..w].fill(true);
            walk(
                &mut pos[..d],
                w as u32 - 1,
                n_fine,
                &mut alive[..w],
                |p, k| {
                    let sd = (unit_var * k as f64).sqrt();
                    for v in p.iter_mut() {
                        let z: f64 = rng.sample(rand_distr::StandardNormal);
                        *v += sd * z;
                    }
                },
                |p, _| domain.contains(p, depth),
            );
        }
        tally.add(&counts(&alive)[..w]);
    });
    let text = describe("skbm", domain, params, t, cfg, depth);
    let vol = domain.volume()?;
    Ok(clamp_heat(finish(&tally, spatial.scale, w >= 3, cfg, config_digest(&text), depth), vol))
}

/// Interaction defect `𝒟(t) = Q_G(t) − Σ_j Q_{R_j G}(t) − Q_{G₀}(t)` for a
/// domain with a self-similar (or interval-union) decomposition.
///
/// One path per starting point serves all pieces: the sample is
/// `1[survives in G] − 1[survives in the piece containing the start]`.
pub fn interaction_defect(domain: &Domain, params: StableParams, t: f64, cfg: &McConfig) -> Result<Estimate> {
    check_time(t)?;
    check_dims(domain, params)?;
    cfg.validate()?;
    let depth = path_depth(domain, t, params.alpha(), cfg);
    let pieces = domain.components(depth.max(1))?;
    let spatial = Spatial::new(domain, cfg)?;
    let w = levels_of(cfg)?;
    let n_fine = cfg.scheme.finest_steps();
    let steps = StableSteps::new(params, t / n_fine as f64);
    let d = params.dim();
    let tally = run_units(cfg, w, |rng, i, tally| {
        let (mut pos, mut inc) = ([0.0; 8], [0.0; 8]);
        spatial.points.point(i, rng, &mut pos[..d]);
        let mut row = [0i64; MAX_LEVELS];
        if domain.contains(&pos[..d], depth) {
            let piece = pieces.iter().position(|p| p.contains(&pos[..d], depth));
            let mut alive = [false; 2 * MAX_LEVELS];
            alive[..w].fill(true);
            if piece.is_some() {
                alive[w..2 * w].fill(true);
            }
            walk(
                &mut pos[..d],
                w as u32 - 1,
                n_fine,
                &mut alive[..2 * w],
                |p, k| steps.advance(rng, p, k, &mut inc[..d]),
                |p, j| match (j, piece) {
                    (0, _) => domain.contains(p, depth),
                    (_, Some(c)) => pieces[c].contains(p, depth),
                    (_, None) => false,
                },
            );
            for l in 0..w {
                row[l] = alive[l] as i64 - alive[w + l] as i64;
            }
        }
        tally.add(&row[..w]);
    });
    let text = describe("defect", domain, params, t, cfg, depth);
    Ok(finish(&tally, spatial.scale, w >= 3, cfg, config_digest(&text), depth))
}

/// Frequency of `max_k X^{(1)}_{kh} > level` over `cfg.scheme.n_steps` grid
/// points of `[0, t]`: a grid under-estimate of `P(sup_{s≤t} X^{(1)}_s > level)`.
pub fn sup_tail_check(params: StableParams, t: f64, level: f64, cfg: &McConfig) -> Result<Estimate> {
    check_time(t)?;
    cfg.validate()?;
    if !(level > 0.0) {
        return Err(Error::DomainError(format!("level must be positive, got {level}")));
    }
    // Each coordinate of the isotropic process is a one-dimensional stable
    // process with the same exponent.
    let line = StableParams::new(params.alpha(), 1)?;
    let n = cfg.scheme.n_steps as u64;
    let steps = StableSteps::new(line, t / n as f64);
    let tally = run_units(cfg, 1, |rng, _, tally| {
        let (mut pos, mut inc) = ([0.0], [0.0]);
        let mut over = 0;
        for _ in 0..n {
            steps.advance(rng, &mut pos, 1, &mut inc);
            if pos[0] > level {
                over = 1;
                break;
            }
        }
        tally.add(&[over]);
    });
    let text = format!(
        "sup|alpha={}|t={t:e}|level={level:e}|n={}|steps={n}|seed={}|unit={}",
        params.alpha(),
        cfg.n,
        cfg.seeds.master_seed,
        cfg.unit_size
    );
    Ok(finish(&tally, 1.0, false, cfg, config_digest(&text), 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::rhc_interval_cauchy;
    use crate::analytic::skbm_interval_series;
    use crate::simulate::PathScheme;

    fn unit() -> Domain {
        Domain::interval(0.0, 1.0).unwrap()
    }

    fn p(alpha: f64) -> StableParams {
        StableParams::new(alpha, 1).unwrap()
    }

    #[test]
    fn rhc_matches_cauchy_closed_form() {
        let e = rhc(&unit(), p(1.0), 0.1, &McConfig::new(200_000, 7)).unwrap();
        let exact = rhc_interval_cauchy(0.1);
        assert!((e.value - exact).abs() < 3.0 * e.stderr, "{} ± {} vs {exact}", e.value, e.stderr);
        assert!(e.levels.is_empty());
    }

    #[test]
    fn rhc_does_not_see_the_cantor_set() {
        let cfg = McConfig::new(100_000, 11);
        let a = rhc(&unit(), p(1.5), 0.01, &cfg).unwrap();
        let b = rhc(&Domain::cantor(None), p(1.5), 0.01, &cfg).unwrap();
        assert_eq!(b.unresolved, 0);
        assert_eq!((a.value, a.stderr), (b.value, b.stderr));
        assert_ne!(a.config_digest, b.config_digest);
    }

    #[test]
    fn grid_levels_are_nested() {
        let e = shc(&unit(), p(1.5), 0.01, &McConfig::new(50_000, 3)).unwrap();
        assert_eq!(e.levels.len(), 3);
        assert!(e.levels[0] >= e.levels[1] && e.levels[1] >= e.levels[2]);
        assert!(e.value <= 1.0 && e.value > 0.0);
    }

    #[test]
    fn survival_refines_downwards() {
        let x = [0.5];
        let mut prev = f64::INFINITY;
        for n_steps in [32, 64, 128] {
            let cfg = McConfig::new(40_000, 5).with_scheme(PathScheme {
                n_steps,
                membership_depth: None,
                richardson_levels: 0,
            });
            let e = survival_prob(&unit(), &x, p(1.5), 0.01, &cfg).unwrap();
            assert!(e.value <= prev + 3.0 * e.stderr);
            prev = e.value;
        }
    }

    #[test]
    fn start_near_the_edge_exits_quickly() {
        let e = survival_prob(&unit(), &[0.999], p(0.5), 0.1, &McConfig::new(20_000, 1)).unwrap();
        assert!(e.value < 0.5, "{}", e.value);
        assert!(survival_prob(&unit(), &[1.5], p(0.5), 0.1, &McConfig::new(10, 1)).is_err());
    }

    #[test]
    fn scaling_identity_under_shared_seeds() {
        let cfg = McConfig::new(50_000, 21);
        let third = Domain::interval(0.0, 1.0 / 3.0).unwrap();
        for alpha in [0.7, 1.5] {
            let small = shc(&third, p(alpha), 1e-3, &cfg).unwrap();
            let big = shc(&unit(), p(alpha), 1e-3 * 3f64.powf(alpha), &cfg).unwrap();
            let diff = small.value - big.value / 3.0;
            let se = (small.stderr.powi(2) + (big.stderr / 3.0).powi(2)).sqrt();
            assert!(diff.abs() <= 3.0 * se, "α={alpha}: {diff} vs {se}");
        }
    }

    #[test]
    fn union_is_super_additive() {
        let union = Domain::union(vec![(0.0, 0.4), (0.6, 1.0)]).unwrap();
        let e = interaction_defect(&union, p(1.5), 1e-2, &McConfig::new(100_000, 2)).unwrap();
        assert!(e.value > 2.0 * e.stderr, "{} ± {}", e.value, e.stderr);
        let e = interaction_defect(&Domain::cantor(None), p(1.5), 1e-3, &McConfig::new(30_000, 2)).unwrap();
        assert!(e.value >= -3.0 * e.stderr);
    }

    #[test]
    fn skbm_against_series_and_shc() {
        let cfg = McConfig::new(60_000, 8);
        let q = skbm_shc(&unit(), p(1.0), 0.01, &cfg).unwrap();
        let series = skbm_interval_series(1.0, 0.01, 10_000).unwrap().value;
        assert!((q.value - series).abs() < 3.0 * q.stderr + 1e-3, "{} ± {} vs {series}", q.value, q.stderr);
        let s = shc(&unit(), p(1.0), 0.01, &cfg).unwrap();
        assert!(q.value <= s.value + 3.0 * (q.stderr.powi(2) + s.stderr.powi(2)).sqrt());
        assert!(matches!(
            skbm_shc(&Domain::cantor(None), p(1.0), 0.01, &cfg),
            Err(Error::UnsupportedDomain(_))
        ));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = McConfig::new(20_000, 99);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| shc(&Domain::cantor(None), p(1.5), 1e-3, &cfg).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn sup_tail_scales_like_a_power() {
        let cfg = McConfig::new(400_000, 4);
        let a = sup_tail_check(p(1.0), 0.01, 1.0, &cfg).unwrap().value;
        let b = sup_tail_check(p(1.0), 0.01, 2.0, &cfg).unwrap().value;
        let c = sup_tail_check(p(1.0), 0.02, 1.0, &cfg).unwrap().value;
        assert!((b / a - 0.5).abs() < 0.1, "{}", b / a);
        assert!((c / a - 2.0).abs() < 0.4, "{}", c / a);
    }

    #[test]
    fn planar_disk_heat_content_is_bounded() {
        let disk = Domain::disk(vec![0.0, 0.0], 1.0).unwrap();
        let e = shc(&disk, StableParams::new(1.2, 2).unwrap(), 1e-2, &McConfig::new(20_000, 6)).unwrap();
        assert!(e.value > 0.0 && e.value < std::f64::consts::PI);
        assert!(shc(&disk, p(1.2), 1e-2, &McConfig::new(100, 6)).is_err());
    }
}
