//! Work units, integer tallies and the nested-grid path walk.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Estimate, McConfig};
use crate::extrapolate::richardson_extrapolate;

/// Sums and cross-products of small integer sample vectors.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tally {
    pub n: u64,
    pub sum: Vec<i64>,
    /// Row-major `width × width`.
    pub prod: Vec<i64>,
    pub unresolved: u64,
}

impl Tally {
    pub fn new(width: usize) -> Self {
        Tally {
            n: 0,
            sum: vec![0; width],
            prod: vec![0; width * width],
            unresolved: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.sum.len()
    }

    pub fn add(&mut self, x: &[i64]) {
        let w = self.width();
        self.n += 1;
        for i in 0..w {
            if x[i] == 0 {
                continue;
            }
            self.sum[i] += x[i];
            for j in 0..w {
                self.prod[i * w + j] += x[i] * x[j];
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.n += other.n;
        self.unresolved += other.unresolved;
        self.sum.iter_mut().zip(&other.sum).for_each(|(a, b)| *a += b);
        self.prod.iter_mut().zip(&other.prod).for_each(|(a, b)| *a += b);
        self
    }

    pub fn mean(&self, i: usize) -> f64 {
        self.sum[i] as f64 / self.n as f64
    }

    /// Covariance of the sample means of components `i` and `j`.
    pub fn cov_of_means(&self, i: usize, j: usize) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let w = self.width();
        let centred = self.prod[i * w + j] as f64 - self.sum[i] as f64 * self.sum[j] as f64 / n;
        centred / (n * (n - 1.0))
    }
}

/// Runs `body(rng, sample_index, tally)` for every sample, one ChaCha8 stream
/// per work unit, and merges the unit tallies.
pub(crate) fn run_units<F>(cfg: &McConfig, width: usize, body: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng, u64, &mut Tally) + Sync,
{
    let units = cfg.n.div_ceil(cfg.unit_size);
    (0..units)
        .into_par_iter()
        .map(|u| {
            let mut rng = cfg.seeds.stream(u);
            let mut tally = Tally::new(width);
            let end = ((u + 1) * cfg.unit_size).min(cfg.n);
            for i in u * cfg.unit_size..end {
                body(&mut rng, i, &mut tally);
            }
            tally
        })
        .reduce(|| Tally::new(width), Tally::merge)
}

/// Walks one path on the nested grids `n_fine / 2^{levels−ℓ}`, `ℓ = 0..=levels`,
/// for `m = alive.len() / (levels+1)` domains at once.
///
/// `alive[j·(levels+1) + ℓ]` starts as given and is cleared at the first point
/// of level `ℓ`'s grid outside domain `j`. Once the finest live level is
/// coarser than the walk, increments span several fine steps; the sum of
/// `k` fine increments is drawn directly as one increment over `k` steps.
pub(crate) fn walk<A, I>(
    pos: &mut [f64],
    levels: u32,
    n_fine: u64,
    alive: &mut [bool],
    mut advance: A,
    mut inside: I,
) where
    A: FnMut(&mut [f64], u64),
    I: FnMut(&[f64], usize) -> bool,
{
    let top = levels as usize;
    let width = top + 1;
    let m = alive.len() / width;
    let mut k = 0u64;
    while k < n_fine {
        let Some(finest) = (0..=top).rev().find(|&l| (0..m).any(|j| alive[j * width + l])) else {
            break;
        };
        let stride = 1u64 << (top - finest);
        let next = (k / stride + 1) * stride;
        advance(pos, next - k);
        k = next;
        for j in 0..m {
            let row = &mut alive[j * width..(j + 1) * width];
            if !row[..=finest].iter().any(|&a| a) || inside(pos, j) {
                continue;
            }
            for (l, a) in row.iter_mut().enumerate().take(finest + 1) {
                if k % (1u64 << (top - l)) == 0 {
                    *a = false;
                }
            }
        }
    }
}

/// Turns a tally of per-level indicators into an [`Estimate`], extrapolating
/// the three finest levels when `extrapolate` is set.
pub(crate) fn finish(
    tally: &Tally,
    scale: f64,
    extrapolate: bool,
    cfg: &McConfig,
    digest: String,
    depth: u32,
) -> Estimate {
    let w = tally.width();
    let levels: Vec<f64> = (0..w).map(|i| scale * tally.mean(i)).collect();
    let mut est = Estimate {
        value: levels[w - 1],
        stderr: scale * tally.cov_of_means(w - 1, w - 1).max(0.0).sqrt(),
        n_samples: tally.n,
        master_seed: cfg.seeds.master_seed,
        config_digest: digest,
        levels: if w > 1 || extrapolate { levels.clone() } else { Vec::new() },
        order: None,
        noise_dominates: false,
        depth,
        unresolved: tally.unresolved,
    };
    if extrapolate && w >= 3 {
        let idx = [w - 3, w - 2, w - 1];
        let mut cov = [[0.0; 3]; 3];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                cov[a][b] = scale * scale * tally.cov_of_means(i, j);
            }
        }
        let r = richardson_extrapolate(idx.map(|i| levels[i]), cov);
        est.value = r.value;
        est.stderr = r.stderr;
        est.order = r.order;
        est.noise_dominates = r.noise_dominates;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_covariance_matches_direct_formula() {
        let data = [[1, 1], [1, 0], [0, 0], [1, 1], [0, 0]];
        let mut t = Tally::new(2);
        data.iter().for_each(|x| t.add(x));
        let n = data.len() as f64;
        let m: Vec<f64> = (0..2).map(|i| data.iter().map(|x| x[i] as f64).sum::<f64>() / n).collect();
        let c01: f64 = data.iter().map(|x| (x[0] as f64 - m[0]) * (x[1] as f64 - m[1])).sum::<f64>() / (n - 1.0) / n;
        assert!((t.cov_of_means(0, 1) - c01).abs() < 1e-15);
    }

    #[test]
    fn merge_is_order_independent() {
        let mut a = Tally::new(1);
        let mut b = Tally::new(1);
        a.add(&[1]);
        b.add(&[0]);
        b.add(&[1]);
        assert_eq!(a.clone().merge(b.clone()), b.merge(a));
    }

    /// Deterministic walk: the position moves by +1 per fine step and the
    /// domain is `(−∞, 5)`; grids of strides 4, 2, 1 see the exit at fine
    /// times 8, 6 and 5.
    #[test]
    fn nested_grids_die_at_their_own_points() {
        let mut pos = [0.0];
        let mut alive = [true; 3];
        let mut calls = Vec::new();
        walk(
            &mut pos,
            2,
            16,
            &mut alive,
            |p, k| {
                calls.push(k);
                p[0] += k as f64;
            },
            |p, _| p[0] < 5.0,
        );
        assert_eq!(alive, [false; 3]);
        // Fine steps to 5, then a 1-step jump to 6, then one 2-step jump to 8.
        assert_eq!(calls, vec![1, 1, 1, 1, 1, 1, 2]);
        let mut pos = [0.0];
        let mut alive = [true; 3];
        walk(&mut pos, 2, 4, &mut alive, |p, k| p[0] += k as f64, |p, _| p[0] < 5.0);
        assert_eq!(alive, [true; 3]);
    }

    #[test]
    fn two_domains_walk_together() {
        let mut pos = [0.0];
        let mut alive = [true, true, true, true];
        walk(&mut pos, 1, 8, &mut alive, |p, k| p[0] += k as f64, |p, j| p[0] < if j == 0 { 3.0 } else { 100.0 });
        assert_eq!(alive, [false, false, true, true]);
    }
}
