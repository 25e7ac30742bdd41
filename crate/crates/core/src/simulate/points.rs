//! Starting points for the spatial integral.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::SamplingCell;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PointMode {
    /// Additive recurrence `u_i = {s + i g}` with the generalised golden ratio
    /// `g` and a random shift `s`.
    #[default]
    Qmc,
    /// Independent uniform points drawn from the path stream.
    Random,
}

/// Uniform points on a sampling cell, indexed by a global sample number so
/// that the partition into work units does not change the point set.
#[derive(Debug, Clone)]
pub struct StartPoints {
    cell: SamplingCell,
    mode: PointMode,
    shift: Vec<f64>,
    step: Vec<f64>,
}

/// Positive root of `x^{d+1} = x + 1`.
fn generalised_golden_ratio(d: usize) -> f64 {
    let mut x = 2.0f64;
    for _ in 0..64 {
        x = (1.0 + x).powf(1.0 / (d as f64 + 1.0));
    }
    x
}

impl StartPoints {
    pub fn new<R: Rng + ?Sized>(cell: SamplingCell, mode: PointMode, shift_rng: &mut R) -> Self {
        let d = cell.dim();
        assert!(d <= 8, "start points support at most 8 dimensions");
        let phi = generalised_golden_ratio(d);
        let step = (1..=d).map(|k| phi.powi(-(k as i32)).fract()).collect();
        let shift = (0..d).map(|_| shift_rng.random::<f64>()).collect();
        StartPoints { cell, mode, shift, step }
    }

    pub fn cell(&self) -> &SamplingCell {
        &self.cell
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    /// Writes point `i` into `out`; `rng` is consumed only in random mode.
    pub fn point<R: Rng + ?Sized>(&self, i: u64, rng: &mut R, out: &mut [f64]) {
        let d = self.dim();
        let mut u = [0.0f64; 8];
        let u = &mut u[..d];
        match self.mode {
            PointMode::Qmc => {
                for k in 0..d {
                    // Reduce i·g mod 1 in two parts to keep precision for large i.
                    let (hi, lo) = ((i >> 20) as f64, (i & 0xF_FFFF) as f64);
                    let v = (hi * (self.step[k] * (1u64 << 20) as f64).fract() + lo * self.step[k]).fract();
                    u[k] = (v + self.shift[k]).fract();
                }
            }
            PointMode::Random => u.iter_mut().for_each(|v| *v = rng.random()),
        }
        self.cell.point(u, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BoundingBox, CellShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_box(d: usize) -> SamplingCell {
        SamplingCell {
            shape: CellShape::Box(BoundingBox { lo: vec![0.0; d], hi: vec![1.0; d] }),
            fills_domain: true,
        }
    }

    #[test]
    fn golden_ratios() {
        assert!((generalised_golden_ratio(1) - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        // Plastic number.
        assert!((generalised_golden_ratio(2) - 1.324_717_957_244_746).abs() < 1e-14);
    }

    #[test]
    fn qmc_points_are_well_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = StartPoints::new(unit_box(1), PointMode::Qmc, &mut rng);
        let n = 10_000;
        let mut bins = [0u32; 100];
        let mut x = [0.0];
        for i in 0..n {
            pts.point(i, &mut rng, &mut x);
            bins[(x[0] * 100.0) as usize] += 1;
        }
        // Kronecker sequences have discrepancy O(log n / n).
        assert!(bins.iter().all(|&b| (b as i64 - 100).abs() <= 3), "{bins:?}");
    }

    #[test]
    fn large_indices_keep_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = StartPoints::new(unit_box(2), PointMode::Qmc, &mut rng);
        let (mut a, mut b) = ([0.0; 2], [0.0; 2]);
        let i = 40_000_000_123u64;
        pts.point(i, &mut rng, &mut a);
        pts.point(i + 1, &mut rng, &mut b);
        for k in 0..2 {
            let step = (b[k] - a[k]).rem_euclid(1.0);
            assert!((step - pts.step[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn triangle_points_stay_inside() {
        let cell = SamplingCell {
            shape: CellShape::Triangle([[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]]),
            fills_domain: false,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = StartPoints::new(cell.clone(), PointMode::Random, &mut rng);
        let mut x = [0.0; 2];
        for i in 0..1000 {
            pts.point(i, &mut rng, &mut x);
            assert!(cell.contains(&x));
        }
    }
}
