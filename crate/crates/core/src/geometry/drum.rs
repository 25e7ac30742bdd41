use std::fmt;

use super::dimension::{check_standing_inequality, power_sum, solve_dimension};
use super::gasket;
use super::similitude::Similitude;
use super::triangle::Triangle;
use super::Domain;
use crate::error::{Error, Result};

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| *v >= *l && *v <= *h)
    }

    pub fn union(&self, other: &BoundingBox) -> BoundingBox {
        BoundingBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }

    /// Interiors overlap by more than `tol` in every coordinate (touching faces do not count).
    pub fn overlaps(&self, other: &BoundingBox, tol: f64) -> bool {
        (0..self.dim()).all(|i| self.lo[i] + tol < other.hi[i] && other.lo[i] + tol < self.hi[i])
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    /// Bounding box of the image of this box under `map`.
    pub fn image(&self, map: &Similitude) -> BoundingBox {
        let d = self.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        let mut corner = vec![0.0; d];
        let mut out = vec![0.0; d];
        for mask in 0..(1usize << d) {
            for i in 0..d {
                corner[i] = if mask >> i & 1 == 1 { self.hi[i] } else { self.lo[i] };
            }
            map.apply(&corner, &mut out);
            for i in 0..d {
                lo[i] = lo[i].min(out[i]);
                hi[i] = hi[i].max(out[i]);
            }
        }
        BoundingBox { lo, hi }
    }
}

/// A self-similar drum `G = (∪_j R_j G) ∪ G₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrumSpec {
    name: String,
    dim: usize,
    maps: Vec<Similitude>,
    generator: Domain,
    dimension: f64,
    hull: BoundingBox,
}

impl DrumSpec {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        maps: Vec<Similitude>,
        generator: Domain,
    ) -> Result<Self> {
        if let Some(m) = maps.iter().find(|m| m.dim() != dim) {
            return Err(Error::DomainError(format!(
                "similitude of dimension {} in a drum of dimension {dim}",
                m.dim()
            )));
        }
        if generator.dim() != dim {
            return Err(Error::DomainError(format!(
                "generator has dimension {}, drum has {dim}",
                generator.dim()
            )));
        }
        let ratios: Vec<f64> = maps.iter().map(|m| m.ratio()).collect();
        let dimension = solve_dimension(&ratios, dim)?;
        let hull = attractor_box(&maps, &generator.bounding_box());
        Ok(DrumSpec {
            name: name.into(),
            dim,
            maps,
            generator,
            dimension,
            hull,
        })
    }

    /// Complement of the middle-thirds Cantor set in (0,1).
    pub fn cantor() -> Self {
        let maps = vec![
            Similitude::scaling(1.0 / 3.0, vec![0.0]).unwrap(),
            Similitude::scaling(1.0 / 3.0, vec![2.0 / 3.0]).unwrap(),
        ];
        DrumSpec::new("cantor", 1, maps, Domain::interval(1.0 / 3.0, 2.0 / 3.0).unwrap()).unwrap()
    }

    /// Complement of the Sierpiński gasket in its outer triangle, with the
    /// removed triangles' corners rounded by `corner_radius` (0 for the plain gasket).
    pub fn gasket(corner_radius: f64) -> Result<Self> {
        let maps = gasket::corner_translations()
            .iter()
            .map(|b| Similitude::scaling(0.5, b.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let cell = Triangle::new(gasket::central_vertices(), corner_radius)?;
        DrumSpec::new("gasket", 2, maps, Domain::Triangle(cell))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|m| m.ratio()).collect()
    }

    pub fn generator(&self) -> &Domain {
        &self.generator
    }

    /// Interior Minkowski dimension `b` with `Σ r_j^b = 1`.
    pub fn dimension(&self) -> f64 {
        self.dimension
    }

    pub fn min_ratio(&self) -> f64 {
        self.maps.iter().map(|m| m.ratio()).fold(f64::INFINITY, f64::min)
    }

    /// Box containing `G` and all its truncations.
    pub fn hull(&self) -> &BoundingBox {
        &self.hull
    }

    /// `|G| = |G₀| / (1 − Σ r_j^d)`.
    pub fn volume(&self) -> Result<f64> {
        let s = power_sum(&self.ratios(), self.dim as f64);
        if s >= 1.0 {
            return Err(Error::ConstraintViolated(format!("Σr^d = {s} must be < 1")));
        }
        Ok(self.generator.volume()? / (1.0 - s))
    }

    /// Membership in the depth-`depth` truncation
    /// `D_K = G₀ ∪ ∪_j R_j D_{K−1}`, `D_0 = ∅`.
    pub fn contains(&self, x: &[f64], depth: u32) -> bool {
        self.locate(x, depth).is_some()
    }

    /// Distance to the boundary of the generator copy `R_w G₀` containing `x`.
    /// Equals the distance to `Gᶜ` when the copies are maximal components of `G`
    /// (as for the Cantor and gasket drums); otherwise a lower bound.
    pub fn dist_to_complement(&self, x: &[f64], depth: u32) -> f64 {
        match self.locate(x, depth) {
            Some((scale, local)) => scale * self.generator.dist_to_complement(&local, u32::MAX),
            None => 0.0,
        }
    }

    /// Index of the piece containing `x` in `[G₀, R_1 G, …, R_N G]` at depth `depth`.
    pub fn piece_of(&self, x: &[f64], depth: u32) -> Option<usize> {
        if depth == 0 {
            return None;
        }
        if self.generator.contains(x, u32::MAX) {
            return Some(0);
        }
        let mut y = vec![0.0; self.dim];
        for (j, m) in self.maps.iter().enumerate() {
            m.apply_inverse(x, &mut y);
            if self.hull.contains(&y) && self.locate(&y, depth - 1).is_some() {
                return Some(j + 1);
            }
        }
        None
    }

    fn locate(&self, x: &[f64], depth: u32) -> Option<(f64, Vec<f64>)> {
        if depth == 0 || !self.hull.contains(x) {
            return None;
        }
        if self.generator.contains(x, u32::MAX) {
            return Some((1.0, x.to_vec()));
        }
        let mut y = vec![0.0; self.dim];
        for m in &self.maps {
            m.apply_inverse(x, &mut y);
            if let Some((s, local)) = self.locate(&y, depth - 1) {
                return Some((s * m.ratio(), local));
            }
        }
        None
    }
}

impl fmt::Display for DrumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (d = {}, N = {}, b = {:.10})",
            self.name,
            self.dim,
            self.maps.len(),
            self.dimension
        )
    }
}

/// Smallest box `B` with `B ⊇ box(G₀) ∪ ∪_j box(R_j B)`, by monotone iteration.
fn attractor_box(maps: &[Similitude], seed: &BoundingBox) -> BoundingBox {
    let mut b = seed.clone();
    for _ in 0..2000 {
        let mut next = seed.clone();
        for m in maps {
            next = next.union(&b.image(m));
        }
        let moved = next
            .lo
            .iter()
            .zip(&b.lo)
            .chain(next.hi.iter().zip(&b.hi))
            .map(|(a, c)| (a - c).abs())
            .fold(0.0, f64::max);
        b = next;
        if moved == 0.0 {
            break;
        }
    }
    // Absorb the rounding left by the iteration.
    let pad = 1e-12 * b.lo.iter().zip(&b.hi).map(|(l, h)| h - l).fold(0.0, f64::max);
    BoundingBox {
        lo: b.lo.iter().map(|v| v - pad).collect(),
        hi: b.hi.iter().map(|v| v + pad).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrumReport {
    pub dimension: Option<f64>,
    pub checks: Vec<Check>,
}

impl DrumReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for DrumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(b) = self.dimension {
            writeln!(f, "b = {b}")?;
        }
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", c.status, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Hull error allowed when testing pieces for disjointness.
const HULL_TOL: f64 = 1e-9;

/// Checks a drum description without requiring it to be valid.
///
/// `dim` and `maps` are taken raw so that specifications violating the
/// standing inequality can still be reported on.
pub fn validate_drum(dim: usize, maps: &[Similitude], generator: &Domain) -> DrumReport {
    let mut checks = Vec::new();
    let ratios: Vec<f64> = maps.iter().map(|m| m.ratio()).collect();
    let standing = check_standing_inequality(&ratios, dim);
    let dimension = standing.as_ref().ok().and_then(|_| solve_dimension(&ratios, dim).ok());
    checks.push(Check {
        name: "standing-inequality".into(),
        status: if standing.is_ok() { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: match &standing {
            Ok(()) => format!(
                "Σr^d = {:.6} < 1 < Σr^(d-1) = {:.6}",
                power_sum(&ratios, dim as f64),
                power_sum(&ratios, dim as f64 - 1.0)
            ),
            Err(e) => e.to_string(),
        },
    });
    if standing.is_err() {
        return DrumReport { dimension, checks };
    }
    let hull = attractor_box(maps, &generator.bounding_box());
    let mut pieces = vec![("G0".to_string(), generator.bounding_box())];
    for (j, m) in maps.iter().enumerate() {
        pieces.push((format!("R{}G", j + 1), hull.image(m)));
    }
    let mut overlaps = Vec::new();
    for i in 0..pieces.len() {
        for k in i + 1..pieces.len() {
            if pieces[i].1.overlaps(&pieces[k].1, HULL_TOL) {
                overlaps.push(format!("{} ∩ {}", pieces[i].0, pieces[k].0));
            }
        }
    }
    let describe = |b: &BoundingBox| {
        let parts: Vec<String> = (0..b.dim()).map(|i| format!("[{:.6}, {:.6}]", b.lo[i], b.hi[i])).collect();
        parts.join("×")
    };
    let hulls: Vec<String> = pieces.iter().map(|(n, b)| format!("{n} ⊆ {}", describe(b))).collect();
    let name = if dim == 1 { "disjoint-intervals" } else { "disjoint-bounding-boxes" };
    checks.push(Check {
        name: name.into(),
        status: if overlaps.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: if overlaps.is_empty() {
            hulls.join("; ")
        } else {
            format!("overlapping: {}", overlaps.join(", "))
        },
    });
    if dim >= 2 {
        checks.push(Check {
            name: "C^{1,1}".into(),
            status: CheckStatus::Skipped,
            detail: "C^{1,1} verification not implemented".into(),
        });
    }
    DrumReport { dimension, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cantor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cantor_drum_matches_ternary_membership() {
        let spec = DrumSpec::cantor();
        assert!((spec.dimension() - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert!((spec.volume().unwrap() - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5000 {
            let x: f64 = rng.random();
            for depth in [1, 3, 8, 15] {
                assert_eq!(spec.contains(&[x], depth), cantor::contains(x, depth), "x={x}");
            }
        }
        assert!((spec.dist_to_complement(&[0.12], 5) - (0.12 - 1.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn gasket_drum_matches_barycentric_membership() {
        let spec = DrumSpec::gasket(0.0).unwrap();
        let g = gasket::Gasket::new(0.0).unwrap();
        assert!((spec.volume().unwrap() - gasket::SQRT3 / 4.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut disagreements = 0;
        for _ in 0..5000 {
            let p = [rng.random::<f64>(), rng.random::<f64>() * gasket::SQRT3 / 2.0];
            if spec.contains(&p, 8) != g.contains(&p, 8) {
                disagreements += 1;
            }
        }
        // Only points within rounding of a cell edge can differ.
        assert!(disagreements <= 2, "{disagreements}");
    }

    #[test]
    fn pieces_partition_membership() {
        let spec = DrumSpec::cantor();
        assert_eq!(spec.piece_of(&[0.5], 3), Some(0));
        assert_eq!(spec.piece_of(&[0.15], 3), Some(1));
        assert_eq!(spec.piece_of(&[0.85], 3), Some(2));
        assert_eq!(spec.piece_of(&[0.25], 10), None);
    }

    #[test]
    fn validation_reports() {
        let cantor = DrumSpec::cantor();
        let r = validate_drum(1, cantor.maps(), cantor.generator());
        assert!(r.passed(), "{r}");

        let bad = vec![
            Similitude::scaling(0.6, vec![0.0]).unwrap(),
            Similitude::scaling(0.6, vec![0.4]).unwrap(),
        ];
        let r = validate_drum(1, &bad, &Domain::interval(0.3, 0.4).unwrap());
        assert_eq!(r.checks[0].status, CheckStatus::Fail);
        assert!(r.checks[0].detail.contains("Σr^d"));

        let g = DrumSpec::gasket(0.0).unwrap();
        let r = validate_drum(2, g.maps(), g.generator());
        assert!((r.dimension.unwrap() - 3f64.ln() / 2f64.ln()).abs() < 1e-12);
        assert_eq!(r.check("C^{1,1}").unwrap().status, CheckStatus::Skipped);
    }

    #[test]
    fn hull_of_cantor_is_unit_interval() {
        let h = DrumSpec::cantor().hull().clone();
        assert!(h.lo[0] <= 0.0 && h.lo[0] > -1e-11);
        assert!(h.hi[0] >= 1.0 && h.hi[0] < 1.0 + 1e-11);
    }
}
