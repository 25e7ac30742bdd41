//! Domains, fractal drums and their membership, distance and volume queries.

pub mod cantor;
pub mod dimension;
pub mod drum;
pub mod drum_file;
pub mod gasket;
pub mod similitude;
pub mod triangle;

use std::fmt;
use std::sync::Arc;

pub use dimension::{check_standing_inequality, mean_log_shift, solve_dimension};
pub use drum::{validate_drum, BoundingBox, CheckStatus, DrumReport, DrumSpec};
pub use gasket::Gasket;
pub use similitude::Similitude;
pub use triangle::Triangle;

use crate::error::{Error, Result};

/// A bounded open set in ℝ^d.
///
/// Fractal variants carry an optional depth cap; queries use the smaller of
/// the cap and the depth passed in, and a missing cap means "whatever the
/// caller asks for".
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    IntervalUnion(Vec<(f64, f64)>),
    CantorComplement { depth: Option<u32> },
    GasketComplement { depth: Option<u32>, gasket: Gasket },
    Disk { center: Vec<f64>, radius: f64 },
    Triangle(Triangle),
    IfsDrum { spec: Arc<DrumSpec>, depth: Option<u32> },
    /// `R(D)` for a similitude `R`.
    Image { map: Similitude, inner: Box<Domain> },
}

/// Region that starting points are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub enum CellShape {
    Box(BoundingBox),
    Triangle([[f64; 2]; 3]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingCell {
    pub shape: CellShape,
    /// True when the cell and the domain differ by a null set, so the heat
    /// content is `|cell|` times the mean over all cell points.
    pub fills_domain: bool,
}

impl SamplingCell {
    pub fn dim(&self) -> usize {
        match &self.shape {
            CellShape::Box(b) => b.dim(),
            CellShape::Triangle(_) => 2,
        }
    }

    pub fn volume(&self) -> f64 {
        match &self.shape {
            CellShape::Box(b) => b.volume(),
            CellShape::Triangle(v) => {
                0.5 * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1])
                    - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]))
                    .abs()
            }
        }
    }

    /// Maps a point of the unit cube onto the cell, preserving uniformity.
    pub fn point(&self, u: &[f64], out: &mut [f64]) {
        match &self.shape {
            CellShape::Box(b) => {
                for i in 0..b.dim() {
                    out[i] = b.lo[i] + u[i] * (b.hi[i] - b.lo[i]);
                }
            }
            CellShape::Triangle(v) => {
                let (mut s, mut t) = (u[0], u[1]);
                if s + t > 1.0 {
                    s = 1.0 - s;
                    t = 1.0 - t;
                }
                for i in 0..2 {
                    out[i] = v[0][i] + s * (v[1][i] - v[0][i]) + t * (v[2][i] - v[0][i]);
                }
            }
        }
    }

    /// Closed-cell membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.shape {
            CellShape::Box(b) => b.contains(x),
            CellShape::Triangle(v) => {
                let cross = |p: [f64; 2], q: [f64; 2]| {
                    (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0])
                };
                let s = [cross(v[0], v[1]), cross(v[1], v[2]), cross(v[2], v[0])];
                s.iter().all(|&c| c >= 0.0) || s.iter().all(|&c| c <= 0.0)
            }
        }
    }

    fn image(&self, map: &Similitude) -> SamplingCell {
        match &self.shape {
            CellShape::Triangle(v) => {
                let mut w = *v;
                for p in w.iter_mut() {
                    let q = map.apply_vec(p);
                    *p = [q[0], q[1]];
                }
                SamplingCell {
                    shape: CellShape::Triangle(w),
                    fills_domain: self.fills_domain,
                }
            }
            CellShape::Box(b) => SamplingCell {
                shape: CellShape::Box(b.image(map)),
                fills_domain: self.fills_domain && map.is_unrotated(),
            },
        }
    }
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Domain> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::DomainError(format!("interval needs a < b, got ({a}, {b})")));
        }
        Ok(Domain::Interval { a, b })
    }

    /// Union of disjoint open intervals; the input is sorted.
    pub fn union(mut intervals: Vec<(f64, f64)>) -> Result<Domain> {
        if intervals.is_empty() {
            return Err(Error::DomainError("empty interval union".into()));
        }
        for &(a, b) in &intervals {
            Domain::interval(a, b)?;
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        if let Some(w) = intervals.windows(2).find(|w| w[0].1 > w[1].0) {
            return Err(Error::DomainError(format!(
                "intervals ({}, {}) and ({}, {}) overlap",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
        Ok(Domain::IntervalUnion(intervals))
    }

    pub fn disk(center: Vec<f64>, radius: f64) -> Result<Domain> {
        if center.is_empty() || !(radius > 0.0) {
            return Err(Error::DomainError(format!("invalid disk radius {radius}")));
        }
        Ok(Domain::Disk { center, radius })
    }

    pub fn cantor(depth: Option<u32>) -> Domain {
        Domain::CantorComplement {
            depth: depth.map(|k| k.clamp(1, cantor::MAX_DEPTH)),
        }
    }

    pub fn gasket(depth: Option<u32>, corner_radius: f64) -> Result<Domain> {
        Ok(Domain::GasketComplement {
            depth: depth.map(|k| k.clamp(1, cantor::MAX_DEPTH)),
            gasket: Gasket::new(corner_radius)?,
        })
    }

    pub fn drum(spec: DrumSpec, depth: Option<u32>) -> Domain {
        Domain::IfsDrum {
            spec: Arc::new(spec),
            depth: depth.map(|k| k.clamp(1, cantor::MAX_DEPTH)),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } | Domain::IntervalUnion(_) | Domain::CantorComplement { .. } => 1,
            Domain::GasketComplement { .. } | Domain::Triangle(_) => 2,
            Domain::Disk { center, .. } => center.len(),
            Domain::IfsDrum { spec, .. } => spec.dim(),
            Domain::Image { map, .. } => map.dim(),
        }
    }

    pub fn is_fractal(&self) -> bool {
        match self {
            Domain::CantorComplement { .. } | Domain::GasketComplement { .. } | Domain::IfsDrum { .. } => true,
            Domain::Image { inner, .. } => inner.is_fractal(),
            _ => false,
        }
    }

    pub fn depth_cap(&self) -> Option<u32> {
        match self {
            Domain::CantorComplement { depth } | Domain::GasketComplement { depth, .. } | Domain::IfsDrum { depth, .. } => *depth,
            Domain::Image { inner, .. } => inner.depth_cap(),
            _ => None,
        }
    }

    /// Interior Minkowski dimension of the boundary for fractal variants.
    pub fn boundary_dimension(&self) -> Option<f64> {
        match self {
            Domain::CantorComplement { .. } => Some(2f64.ln() / 3f64.ln()),
            Domain::GasketComplement { .. } => Some(3f64.ln() / 2f64.ln()),
            Domain::IfsDrum { spec, .. } => Some(spec.dimension()),
            Domain::Image { inner, .. } => inner.boundary_dimension(),
            _ => None,
        }
    }

    /// Smallest similitude ratio of a fractal variant.
    pub fn min_ratio(&self) -> Option<f64> {
        match self {
            Domain::CantorComplement { .. } => Some(1.0 / 3.0),
            Domain::GasketComplement { .. } => Some(0.5),
            Domain::IfsDrum { spec, .. } => Some(spec.min_ratio()),
            Domain::Image { inner, .. } => inner.min_ratio(),
            _ => None,
        }
    }

    /// Membership depth used for a run at time `t`.
    ///
    /// `K = ⌈ln(t^{−1/α}) / ln(1/r_min)⌉ + 5`, clamped to `[1, 45]` and to the
    /// domain's own cap. When `α ≤ d − b` the boundary is polar and the deficit
    /// is driven by the whole residual fractal, so the full depth 45 is used.
    pub fn resolve_depth(&self, t: f64, alpha: f64) -> u32 {
        let Some(r) = self.min_ratio() else {
            return 0;
        };
        let b = self.boundary_dimension().unwrap_or(0.0);
        let auto = if alpha <= self.dim() as f64 - b {
            cantor::MAX_DEPTH
        } else {
            let k = ((-t.ln() / alpha) / (1.0 / r).ln()).ceil() + 5.0;
            (k.max(1.0) as u32).min(cantor::MAX_DEPTH)
        };
        self.depth_cap().map_or(auto, |cap| cap.min(auto))
    }

    fn depth(&self, requested: u32) -> u32 {
        self.depth_cap().map_or(requested, |cap| cap.min(requested))
    }

    pub fn contains(&self, x: &[f64], depth: u32) -> bool {
        match self {
            Domain::Interval { a, b } => x[0] > *a && x[0] < *b,
            Domain::IntervalUnion(list) => list.iter().any(|(a, b)| x[0] > *a && x[0] < *b),
            Domain::CantorComplement { .. } => cantor::contains(x[0], self.depth(depth)),
            Domain::GasketComplement { gasket, .. } => gasket.contains(x, self.depth(depth)),
            Domain::Disk { center, radius } => {
                let r2: f64 = x.iter().zip(center).map(|(p, c)| (p - c) * (p - c)).sum();
                r2 < radius * radius
            }
            Domain::Triangle(t) => t.contains(x),
            Domain::IfsDrum { spec, .. } => spec.contains(x, self.depth(depth)),
            Domain::Image { map, inner } => {
                let mut y = vec![0.0; map.dim()];
                map.apply_inverse(x, &mut y);
                inner.contains(&y, depth)
            }
        }
    }

    /// `dist(x, Dᶜ)` for `x` in the depth-`depth` truncation; 0 otherwise.
    pub fn dist_to_complement(&self, x: &[f64], depth: u32) -> f64 {
        match self {
            Domain::Interval { a, b } => {
                if self.contains(x, depth) {
                    (x[0] - a).min(b - x[0])
                } else {
                    0.0
                }
            }
            Domain::IntervalUnion(list) => list
                .iter()
                .find(|(a, b)| x[0] > *a && x[0] < *b)
                .map_or(0.0, |(a, b)| (x[0] - a).min(b - x[0])),
            Domain::CantorComplement { .. } => cantor::dist_to_complement(x[0], self.depth(depth)),
            Domain::GasketComplement { gasket, .. } => gasket.dist_to_complement(x, self.depth(depth)),
            Domain::Disk { center, radius } => {
                let r: f64 = x.iter().zip(center).map(|(p, c)| (p - c) * (p - c)).sum::<f64>().sqrt();
                (radius - r).max(0.0)
            }
            Domain::Triangle(t) => t.dist_to_boundary(x),
            Domain::IfsDrum { spec, .. } => spec.dist_to_complement(x, self.depth(depth)),
            Domain::Image { map, inner } => {
                let mut y = vec![0.0; map.dim()];
                map.apply_inverse(x, &mut y);
                map.ratio() * inner.dist_to_complement(&y, depth)
            }
        }
    }

    /// Lebesgue measure of the (untruncated) domain.
    pub fn volume(&self) -> Result<f64> {
        Ok(match self {
            Domain::Interval { a, b } => b - a,
            Domain::IntervalUnion(list) => list.iter().map(|(a, b)| b - a).sum(),
            // Complement of a null set in (0,1).
            Domain::CantorComplement { .. } => 1.0,
            Domain::GasketComplement { gasket, .. } => gasket.volume(),
            Domain::Disk { center, radius } => ball_volume(center.len(), *radius),
            Domain::Triangle(t) => t.area(),
            Domain::IfsDrum { spec, .. } => spec.volume()?,
            Domain::Image { map, inner } => map.ratio().powi(map.dim() as i32) * inner.volume()?,
        })
    }

    pub fn bounding_box(&self) -> BoundingBox {
        match self {
            Domain::Interval { a, b } => BoundingBox { lo: vec![*a], hi: vec![*b] },
            Domain::IntervalUnion(list) => BoundingBox {
                lo: vec![list[0].0],
                hi: vec![list[list.len() - 1].1],
            },
            Domain::CantorComplement { .. } => BoundingBox { lo: vec![0.0], hi: vec![1.0] },
            Domain::GasketComplement { .. } => BoundingBox {
                lo: vec![0.0, 0.0],
                hi: vec![1.0, gasket::SQRT3 / 2.0],
            },
            Domain::Disk { center, radius } => BoundingBox {
                lo: center.iter().map(|c| c - radius).collect(),
                hi: center.iter().map(|c| c + radius).collect(),
            },
            Domain::Triangle(t) => {
                let (lo, hi) = t.bounding_box();
                BoundingBox { lo: lo.to_vec(), hi: hi.to_vec() }
            }
            Domain::IfsDrum { spec, .. } => spec.hull().clone(),
            Domain::Image { map, inner } => inner.bounding_box().image(map),
        }
    }

    pub fn sampling_cell(&self) -> Result<SamplingCell> {
        let boxed = |fills| SamplingCell {
            shape: CellShape::Box(self.bounding_box()),
            fills_domain: fills,
        };
        Ok(match self {
            Domain::Interval { .. } | Domain::CantorComplement { .. } => boxed(true),
            Domain::IntervalUnion(_) | Domain::Disk { .. } => boxed(false),
            Domain::GasketComplement { gasket, .. } => SamplingCell {
                shape: CellShape::Triangle(gasket::outer_vertices()),
                fills_domain: gasket.corner_radius() == 0.0,
            },
            Domain::Triangle(t) => SamplingCell {
                shape: CellShape::Triangle(*t.vertices()),
                fills_domain: t.corner_radius() == 0.0,
            },
            Domain::IfsDrum { spec, .. } => {
                let b = spec.hull().clone();
                let vol = spec.volume()?;
                // The hull carries a tiny pad, so compare loosely.
                let fills = (b.volume() - vol).abs() <= 1e-9 * vol;
                SamplingCell {
                    shape: CellShape::Box(b),
                    fills_domain: fills,
                }
            }
            Domain::Image { map, inner } => inner.sampling_cell()?.image(map),
        })
    }

    /// `R(D)`, with membership satisfying `contains(R D, R x) == contains(D, x)`.
    pub fn apply_similitude(&self, map: &Similitude) -> Domain {
        if map.is_identity() {
            return self.clone();
        }
        match self {
            Domain::Interval { a, b } if map.dim() == 1 => {
                let (p, q) = (map.apply_vec(&[*a])[0], map.apply_vec(&[*b])[0]);
                Domain::Interval { a: p.min(q), b: p.max(q) }
            }
            Domain::IntervalUnion(list) if map.dim() == 1 => {
                let mut out: Vec<(f64, f64)> = list
                    .iter()
                    .map(|(a, b)| {
                        let (p, q) = (map.apply_vec(&[*a])[0], map.apply_vec(&[*b])[0]);
                        (p.min(q), p.max(q))
                    })
                    .collect();
                out.sort_by(|x, y| x.0.total_cmp(&y.0));
                Domain::IntervalUnion(out)
            }
            Domain::Disk { center, radius } if map.dim() == center.len() => Domain::Disk {
                center: map.apply_vec(center),
                radius: radius * map.ratio(),
            },
            Domain::Image { map: inner_map, inner } => Domain::Image {
                map: map.compose(inner_map),
                inner: inner.clone(),
            },
            _ => Domain::Image {
                map: map.clone(),
                inner: Box::new(self.clone()),
            },
        }
    }

    /// Pieces `[G₀, R_1 G, …, R_N G]` of a self-similar domain truncated at
    /// `depth`, each capped so that their union is the depth-`depth` truncation.
    /// For an interval union the pieces are its intervals.
    pub fn components(&self, depth: u32) -> Result<Vec<Domain>> {
        match self {
            Domain::IntervalUnion(list) => list.iter().map(|(a, b)| Domain::interval(*a, *b)).collect(),
            Domain::CantorComplement { .. } => {
                let d = self.depth(depth);
                let inner = Domain::CantorComplement { depth: Some(d.saturating_sub(1).max(1)) };
                Ok(vec![
                    Domain::interval(1.0 / 3.0, 2.0 / 3.0)?,
                    inner.apply_similitude(&Similitude::scaling(1.0 / 3.0, vec![0.0])?),
                    inner.apply_similitude(&Similitude::scaling(1.0 / 3.0, vec![2.0 / 3.0])?),
                ])
            }
            Domain::GasketComplement { gasket: g, .. } => {
                let d = self.depth(depth);
                let inner = Domain::GasketComplement {
                    depth: Some(d.saturating_sub(1).max(1)),
                    gasket: g.clone(),
                };
                let mut out = vec![Domain::Triangle(g.generator().clone())];
                for b in gasket::corner_translations() {
                    out.push(inner.apply_similitude(&Similitude::scaling(0.5, b.to_vec())?));
                }
                Ok(out)
            }
            Domain::IfsDrum { spec, .. } => {
                let d = self.depth(depth);
                let inner = Domain::IfsDrum {
                    spec: spec.clone(),
                    depth: Some(d.saturating_sub(1).max(1)),
                };
                let mut out = vec![spec.generator().clone()];
                for m in spec.maps() {
                    out.push(inner.apply_similitude(m));
                }
                Ok(out)
            }
            _ => Err(Error::UnsupportedDomain(format!(
                "{} has no self-similar decomposition",
                self.id()
            ))),
        }
    }

    /// Canonical text form, parseable by [`parse_domain`] for the named variants.
    pub fn id(&self) -> String {
        let depth = |d: &Option<u32>| d.map(|k| format!(":{k}")).unwrap_or_default();
        match self {
            Domain::Interval { a, b } => format!("interval:{a},{b}"),
            Domain::IntervalUnion(list) => {
                let parts: Vec<String> = list.iter().map(|(a, b)| format!("{a},{b}")).collect();
                format!("union:{}", parts.join(";"))
            }
            Domain::CantorComplement { depth: d } => format!("cantor{}", depth(d)),
            Domain::GasketComplement { depth: d, gasket } => {
                let eps = gasket.corner_radius();
                match (d, eps > 0.0) {
                    (None, false) => "gasket".into(),
                    (Some(k), false) => format!("gasket:{k}"),
                    (_, true) => format!("gasket:{},{eps}", d.unwrap_or(cantor::MAX_DEPTH)),
                }
            }
            Domain::Disk { center, radius } => {
                let c: Vec<String> = center.iter().map(|v| v.to_string()).collect();
                format!("disk:{},{radius}", c.join(","))
            }
            Domain::Triangle(t) => {
                let v = t.vertices();
                format!(
                    "triangle:{},{},{},{},{},{},{}",
                    v[0][0], v[0][1], v[1][0], v[1][1], v[2][0], v[2][1], t.corner_radius()
                )
            }
            Domain::IfsDrum { spec, depth: d } => format!("drum:{}{}", spec.name(), depth(d)),
            Domain::Image { map, inner } => format!(
                "image(r={},b={:?},{})",
                map.ratio(),
                map.translation(),
                inner.id()
            ),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

fn ball_volume(d: usize, r: f64) -> f64 {
    // V_d = π^{d/2} r^d / Γ(d/2 + 1), by the two-step recursion V_d = 2π/d · V_{d−2}.
    let mut v = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if d % 2 == 0 { 2 } else { 3 };
    while k <= d {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v * r.powi(d as i32)
}

fn parse_numbers(s: &str, sep: char) -> Result<Vec<f64>> {
    s.split(sep)
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a number: {p:?}")))
        })
        .collect()
}

/// Parses the domain mini-language:
/// `interval:a,b`, `union:a1,b1;a2,b2`, `cantor[:depth]`,
/// `gasket[:depth[,eps]]`, `disk:cx,cy,r`, `drum:@file`, and the built-in drums
/// `drum:cantor` and `drum:gasket[:eps]`.
pub fn parse_domain(s: &str) -> Result<Domain> {
    let s = s.trim();
    let (head, rest) = match s.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (s, None),
    };
    match (head, rest) {
        ("interval", Some(r)) => match parse_numbers(r, ',')?.as_slice() {
            [a, b] => Domain::interval(*a, *b),
            _ => Err(Error::Parse(format!("interval expects a,b: {s:?}"))),
        },
        ("union", Some(r)) => {
            let mut list = Vec::new();
            for part in r.split(';').filter(|p| !p.trim().is_empty()) {
                match parse_numbers(part, ',')?.as_slice() {
                    [a, b] => list.push((*a, *b)),
                    _ => return Err(Error::Parse(format!("union piece expects a,b: {part:?}"))),
                }
            }
            Domain::union(list)
        }
        ("cantor", None) => Ok(Domain::cantor(None)),
        ("cantor", Some(r)) => {
            let k: u32 = r.trim().parse().map_err(|_| Error::Parse(format!("bad depth {r:?}")))?;
            Ok(Domain::cantor(Some(k)))
        }
        ("gasket", None) => Domain::gasket(None, 0.0),
        ("gasket", Some(r)) => {
            let mut parts = r.split(',');
            let k: u32 = parts
                .next()
                .unwrap()
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad depth in {s:?}")))?;
            let eps = match parts.next() {
                Some(e) => e.trim().parse().map_err(|_| Error::Parse(format!("bad radius in {s:?}")))?,
                None => 0.0,
            };
            Domain::gasket(Some(k), eps)
        }
        ("disk", Some(r)) => {
            let v = parse_numbers(r, ',')?;
            if v.len() < 2 {
                return Err(Error::Parse(format!("disk expects center coordinates and radius: {s:?}")));
            }
            Domain::disk(v[..v.len() - 1].to_vec(), v[v.len() - 1])
        }
        ("drum", Some(r)) => {
            if let Some(path) = r.strip_prefix('@') {
                return Ok(Domain::drum(drum_file::load(path)?, None));
            }
            let (name, arg) = match r.split_once(':') {
                Some((n, a)) => (n, Some(a)),
                None => (r, None),
            };
            match (name, arg) {
                ("cantor", None) => Ok(Domain::drum(DrumSpec::cantor(), None)),
                ("gasket", a) => {
                    let eps = match a {
                        Some(e) => e.trim().parse().map_err(|_| Error::Parse(format!("bad radius {e:?}")))?,
                        None => 0.0,
                    };
                    Ok(Domain::drum(DrumSpec::gasket(eps)?, None))
                }
                _ => Err(Error::Parse(format!("unknown drum {r:?}"))),
            }
        }
        _ => Err(Error::Parse(format!("unrecognised domain {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn interval_queries() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        assert!(!d.contains(&[1.5], 0));
        assert!((d.dist_to_complement(&[0.25], 0) - 0.25).abs() < 1e-16);
        assert_eq!(d.volume().unwrap(), 1.0);
    }

    #[test]
    fn volumes() {
        let disk = Domain::disk(vec![0.0, 0.0], 1.0).unwrap();
        assert!((disk.volume().unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!((ball_volume(3, 1.0) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
        assert_eq!(Domain::cantor(Some(5)).volume().unwrap(), 1.0);
        let drum = Domain::drum(DrumSpec::cantor(), None);
        assert!((drum.volume().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn union_is_sorted_and_disjoint() {
        let u = Domain::union(vec![(0.6, 1.0), (0.0, 0.4)]).unwrap();
        assert_eq!(u, Domain::IntervalUnion(vec![(0.0, 0.4), (0.6, 1.0)]));
        assert!(Domain::union(vec![(0.0, 0.5), (0.4, 1.0)]).is_err());
        assert!((u.volume().unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn similitude_images() {
        let third = Similitude::scaling(1.0 / 3.0, vec![0.0]).unwrap();
        let d = Domain::interval(0.0, 1.0).unwrap().apply_similitude(&third);
        assert_eq!(d, Domain::Interval { a: 0.0, b: 1.0 / 3.0 });
        let id = Similitude::identity(1);
        let c = Domain::cantor(Some(12));
        assert_eq!(c.apply_similitude(&id), c);

        let right = Similitude::scaling(1.0 / 3.0, vec![2.0 / 3.0]).unwrap();
        let image = c.apply_similitude(&right);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10_000 {
            let x: f64 = rng.random();
            let rx = right.apply_vec(&[x]);
            assert_eq!(image.contains(&rx, 12), c.contains(&[x], 12), "x={x}");
        }
        assert!((image.volume().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cantor_components_reassemble() {
        let c = Domain::cantor(None);
        let parts = c.components(10).unwrap();
        assert_eq!(parts.len(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10_000 {
            let x: f64 = rng.random();
            let hits = parts.iter().filter(|p| p.contains(&[x], 10)).count();
            assert_eq!(hits > 0, c.contains(&[x], 10), "x={x}");
            assert!(hits <= 1);
        }
    }

    #[test]
    fn gasket_components_reassemble() {
        let g = Domain::gasket(None, 0.02).unwrap();
        let parts = g.components(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5_000 {
            let p = [rng.random::<f64>(), rng.random::<f64>() * gasket::SQRT3 / 2.0];
            let hits = parts.iter().filter(|d| d.contains(&p, 8)).count();
            assert_eq!(hits > 0, g.contains(&p, 8));
        }
    }

    #[test]
    fn depth_policy() {
        let c = Domain::cantor(None);
        // 1e-3^{-1/1.5} = 100, ln100/ln3 = 4.19 → 5 + 5.
        assert_eq!(c.resolve_depth(1e-3, 1.5), 10);
        assert_eq!(c.resolve_depth(1e-3, 0.3), cantor::MAX_DEPTH);
        assert_eq!(Domain::cantor(Some(6)).resolve_depth(1e-3, 1.5), 6);
        assert_eq!(Domain::interval(0.0, 1.0).unwrap().resolve_depth(1e-3, 1.5), 0);
    }

    #[test]
    fn parse_round_trips() {
        for s in ["interval:0,1", "union:0,0.4;0.6,1", "cantor", "cantor:12", "gasket:10", "gasket:8,0.01", "disk:0,0,1"] {
            let d = parse_domain(s).unwrap();
            assert_eq!(parse_domain(&d.id()).unwrap(), d, "{s}");
        }
        assert!(parse_domain("interval:1,0").is_err());
        assert!(parse_domain("square:1").is_err());
        assert!(matches!(parse_domain("drum:cantor").unwrap(), Domain::IfsDrum { .. }));
    }

    #[test]
    fn sampling_cells() {
        let g = Domain::gasket(None, 0.0).unwrap().sampling_cell().unwrap();
        assert!(g.fills_domain);
        assert!((g.volume() - gasket::SQRT3 / 4.0).abs() < 1e-15);
        let mut out = [0.0; 2];
        g.point(&[0.9, 0.9], &mut out);
        assert!(out[1] <= gasket::SQRT3 / 2.0 && out[1] >= 0.0);
        assert!(Domain::drum(DrumSpec::cantor(), None).sampling_cell().unwrap().fills_domain);
        assert!(!Domain::disk(vec![0.0, 0.0], 1.0).unwrap().sampling_cell().unwrap().fills_domain);
    }
}
