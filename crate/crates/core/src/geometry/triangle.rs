use crate::error::{Error, Result};

/// Open triangle in the plane, optionally with its corners replaced by
/// circular arcs of radius `corner_radius` tangent to both adjacent edges.
///
/// The rounded triangle is the Minkowski sum of the triangle eroded by
/// `corner_radius` with a disk of that radius; erosion of a triangle is the
/// homothetic copy about its incenter with inradius reduced by the radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangle {
    vertices: [[f64; 2]; 3],
    corner_radius: f64,
    eroded: [[f64; 2]; 3],
}

impl Triangle {
    pub fn new(vertices: [[f64; 2]; 3], corner_radius: f64) -> Result<Self> {
        let area = signed_area(&vertices);
        if area.abs() < 1e-300 {
            return Err(Error::DomainError("degenerate triangle".into()));
        }
        let (center, inradius) = incircle(&vertices);
        if !(corner_radius >= 0.0 && corner_radius < inradius) {
            return Err(Error::DomainError(format!(
                "corner radius {corner_radius} must lie in [0, inradius = {inradius})"
            )));
        }
        let k = (inradius - corner_radius) / inradius;
        let mut eroded = vertices;
        for v in eroded.iter_mut() {
            v[0] = center[0] + k * (v[0] - center[0]);
            v[1] = center[1] + k * (v[1] - center[1]);
        }
        Ok(Triangle {
            vertices,
            corner_radius,
            eroded,
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]; 3] {
        &self.vertices
    }

    pub fn corner_radius(&self) -> f64 {
        self.corner_radius
    }

    pub fn inradius(&self) -> f64 {
        incircle(&self.vertices).1
    }

    pub fn area(&self) -> f64 {
        let e = self.corner_radius;
        signed_area(&self.eroded).abs() + perimeter(&self.eroded) * e + std::f64::consts::PI * e * e
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        if self.corner_radius == 0.0 {
            return strictly_inside(&self.vertices, p);
        }
        if !strictly_inside(&self.vertices, p) {
            return false;
        }
        dist_to_triangle(&self.eroded, p) < self.corner_radius
    }

    /// Distance from an interior point to the boundary; 0 outside.
    pub fn dist_to_boundary(&self, p: &[f64]) -> f64 {
        if !self.contains(p) {
            return 0.0;
        }
        if self.corner_radius == 0.0 {
            return dist_to_edges(&self.vertices, p);
        }
        let outside = dist_to_triangle(&self.eroded, p);
        if outside > 0.0 {
            self.corner_radius - outside
        } else {
            self.corner_radius + dist_to_edges(&self.eroded, p)
        }
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for i in 0..2 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    pub fn map(&self, f: impl Fn(&[f64; 2]) -> [f64; 2], scale: f64) -> Result<Triangle> {
        let v = [f(&self.vertices[0]), f(&self.vertices[1]), f(&self.vertices[2])];
        Triangle::new(v, self.corner_radius * scale)
    }
}

fn signed_area(v: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]))
}

fn perimeter(v: &[[f64; 2]; 3]) -> f64 {
    (0..3).map(|i| dist(&v[i], &v[(i + 1) % 3])).sum()
}

fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn incircle(v: &[[f64; 2]; 3]) -> ([f64; 2], f64) {
    let a = dist(&v[1], &v[2]);
    let b = dist(&v[0], &v[2]);
    let c = dist(&v[0], &v[1]);
    let p = a + b + c;
    let center = [
        (a * v[0][0] + b * v[1][0] + c * v[2][0]) / p,
        (a * v[0][1] + b * v[1][1] + c * v[2][1]) / p,
    ];
    (center, 2.0 * signed_area(v).abs() / p)
}

fn edge_side(a: &[f64; 2], b: &[f64; 2], p: &[f64]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
}

fn strictly_inside(v: &[[f64; 2]; 3], p: &[f64]) -> bool {
    let s = signed_area(v).signum();
    (0..3).all(|i| s * edge_side(&v[i], &v[(i + 1) % 3], p) > 0.0)
}

fn segment_dist(a: &[f64; 2], b: &[f64; 2], p: &[f64]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    ((p[0] - qx).powi(2) + (p[1] - qy).powi(2)).sqrt()
}

fn dist_to_edges(v: &[[f64; 2]; 3], p: &[f64]) -> f64 {
    (0..3)
        .map(|i| segment_dist(&v[i], &v[(i + 1) % 3], p))
        .fold(f64::INFINITY, f64::min)
}

/// Euclidean distance from `p` to the closed triangle (0 inside).
fn dist_to_triangle(v: &[[f64; 2]; 3], p: &[f64]) -> f64 {
    if strictly_inside(v, p) {
        0.0
    } else {
        dist_to_edges(v, p)
    }
}
