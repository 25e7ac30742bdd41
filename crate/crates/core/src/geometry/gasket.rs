//! Complement of the Sierpiński gasket inside the unit equilateral triangle
//! `T₀ = conv{(0,0), (1,0), (1/2, √3/2)}`, optionally with the removed central
//! triangles' corners rounded (the modified gasket).
//!
//! Points are addressed in barycentric coordinates `(λ₀, λ₁, λ₂)`. Descending
//! into corner cell `i` maps `λ_i ↦ 2λ_i − 1` and doubles the other two; both
//! operations are exact in binary floating point, so the address of a point is
//! computed without drift.

use super::triangle::Triangle;
use crate::error::Result;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

pub fn outer_vertices() -> [[f64; 2]; 3] {
    [[0.0, 0.0], [1.0, 0.0], [0.5, SQRT3 / 2.0]]
}

/// The first removed triangle `V` with vertices (1/4, √3/4), (1/2, 0), (3/4, √3/4).
pub fn central_vertices() -> [[f64; 2]; 3] {
    [[0.25, SQRT3 / 4.0], [0.5, 0.0], [0.75, SQRT3 / 4.0]]
}

/// Corner translations of the three maps `x ↦ x/2 + b_j`.
pub fn corner_translations() -> [[f64; 2]; 3] {
    [[0.0, 0.0], [0.5, 0.0], [0.25, SQRT3 / 4.0]]
}

/// Where a point sits in the gasket construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasketAddress {
    /// Number of corner descents before reaching the removed cell.
    pub level: u32,
    /// Corner chosen at the first descent (0, 1, 2), `None` if the point lies in `V`.
    pub first_corner: Option<usize>,
    /// Point rescaled to the unit cell at `level`.
    pub local: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gasket {
    cell: Triangle,
}

impl Gasket {
    pub fn new(corner_radius: f64) -> Result<Self> {
        Ok(Gasket {
            cell: Triangle::new(central_vertices(), corner_radius)?,
        })
    }

    pub fn corner_radius(&self) -> f64 {
        self.cell.corner_radius()
    }

    pub fn generator(&self) -> &Triangle {
        &self.cell
    }

    /// Locates the removed cell containing `p`, searching `depth` levels
    /// (level 0 is `V` itself).
    pub fn locate(&self, p: &[f64], depth: u32) -> Option<GasketAddress> {
        let l2 = p[1] / (SQRT3 / 2.0);
        let l1 = p[0] - 0.5 * l2;
        let l0 = 1.0 - l1 - l2;
        let mut lam = [l0, l1, l2];
        if lam.iter().any(|&v| !(v > 0.0)) {
            return None;
        }
        let mut first_corner = None;
        for level in 0..depth {
            if let Some(i) = (0..3).find(|&i| lam[i] > 0.5) {
                for (k, v) in lam.iter_mut().enumerate() {
                    *v = if k == i { 2.0 * *v - 1.0 } else { 2.0 * *v };
                }
                if level == 0 {
                    first_corner = Some(i);
                }
                continue;
            }
            if lam.iter().any(|&v| v == 0.5) {
                // On an edge shared by cells: a gasket point.
                return None;
            }
            let local = [lam[1] + 0.5 * lam[2], lam[2] * SQRT3 / 2.0];
            if !self.cell.contains(&local) {
                // In a rounded-off corner of the removed cell.
                return None;
            }
            return Some(GasketAddress {
                level,
                first_corner,
                local,
            });
        }
        None
    }

    pub fn contains(&self, p: &[f64], depth: u32) -> bool {
        self.locate(p, depth).is_some()
    }

    pub fn dist_to_complement(&self, p: &[f64], depth: u32) -> f64 {
        match self.locate(p, depth) {
            Some(a) => self.cell.dist_to_boundary(&a.local) * 0.5f64.powi(a.level as i32),
            None => 0.0,
        }
    }

    /// `|G| = |V′| / (1 − 3/4)`.
    pub fn volume(&self) -> f64 {
        4.0 * self.cell.area()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plain_gasket_volume_is_outer_area() {
        let g = Gasket::new(0.0).unwrap();
        assert!((g.volume() - SQRT3 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn central_and_nested_cells() {
        let g = Gasket::new(0.0).unwrap();
        let c = [0.5, SQRT3 / 6.0];
        let a = g.locate(&c, 1).unwrap();
        assert_eq!(a.level, 0);
        assert!(a.first_corner.is_none());
        // Centroid of V scaled into the bottom-left corner cell.
        let p = [0.25, SQRT3 / 12.0];
        assert!(!g.contains(&p, 1));
        let a = g.locate(&p, 2).unwrap();
        assert_eq!((a.level, a.first_corner), (1, Some(0)));
        assert!((g.dist_to_complement(&p, 2) - 0.5 * g.dist_to_complement(&c, 1)).abs() < 1e-15);
        // Vertex of T0 and outside points.
        assert!(!g.contains(&[0.0, 0.0], 10));
        assert!(!g.contains(&[0.9, 0.9], 10));
    }

    #[test]
    fn monte_carlo_area_approaches_volume() {
        let g = Gasket::new(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let depth = 12;
        let mut hits = 0;
        for _ in 0..n {
            let p = [rng.random::<f64>(), rng.random::<f64>() * SQRT3 / 2.0];
            if g.contains(&p, depth) {
                hits += 1;
            }
        }
        let box_area = SQRT3 / 2.0;
        let est = box_area * hits as f64 / n as f64;
        // Depth-12 truncation misses (3/4)^12 of T0.
        let truncated = SQRT3 / 4.0 * (1.0 - 0.75f64.powi(12));
        let se = box_area * (0.25 / n as f64).sqrt();
        assert!((est - truncated).abs() < 4.0 * se, "est {est} vs {truncated}");
    }

    #[test]
    fn rounded_gasket_volume() {
        let eps = 0.03;
        let g = Gasket::new(eps).unwrap();
        let v = Triangle::new(central_vertices(), eps).unwrap().area();
        assert!((g.volume() - 4.0 * v).abs() < 1e-15);
        assert!(g.volume() < SQRT3 / 4.0);
    }
}
