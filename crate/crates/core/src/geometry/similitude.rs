use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-12;

/// An affine map `x ↦ r·M x + b` with `M` orthogonal, so `|Rx − Ry| = r|x − y|`.
///
/// The orthogonal part is stored row-major. Ratios above one are allowed so
/// that inverses and compositions stay in the type; drum specifications
/// enforce `0 < r < 1` separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Similitude {
    ratio: f64,
    rotation: Vec<f64>,
    translation: Vec<f64>,
}

impl Similitude {
    pub fn new(ratio: f64, rotation: Vec<f64>, translation: Vec<f64>) -> Result<Self> {
        let dim = translation.len();
        if dim == 0 {
            return Err(Error::DomainError("similitude needs dimension ≥ 1".into()));
        }
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::DomainError(format!(
                "similitude ratio must be positive, got {ratio}"
            )));
        }
        if rotation.len() != dim * dim {
            return Err(Error::DomainError(format!(
                "orthogonal part has {} entries, expected {}",
                rotation.len(),
                dim * dim
            )));
        }
        // MᵀM = I
        for i in 0..dim {
            for j in 0..dim {
                let dot: f64 = (0..dim)
                    .map(|k| rotation[k * dim + i] * rotation[k * dim + j])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > ORTHO_TOL {
                    return Err(Error::DomainError(format!(
                        "orthogonal part fails MᵀM = I at ({i},{j}): {dot}"
                    )));
                }
            }
        }
        Ok(Similitude {
            ratio,
            rotation,
            translation,
        })
    }

    /// `x ↦ r x + b` with no rotation.
    pub fn scaling(ratio: f64, translation: Vec<f64>) -> Result<Self> {
        let dim = translation.len();
        Self::new(ratio, identity_matrix(dim), translation)
    }

    pub fn identity(dim: usize) -> Self {
        Similitude {
            ratio: 1.0,
            rotation: identity_matrix(dim),
            translation: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn rotation(&self) -> &[f64] {
        &self.rotation
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.ratio == 1.0
            && self.translation.iter().all(|&b| b == 0.0)
            && self.rotation == identity_matrix(self.dim())
    }

    /// True when the orthogonal part is the identity (pure homothety + shift).
    pub fn is_unrotated(&self) -> bool {
        self.rotation == identity_matrix(self.dim())
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim();
        for i in 0..d {
            let row = &self.rotation[i * d..(i + 1) * d];
            let mx: f64 = row.iter().zip(x).map(|(m, xi)| m * xi).sum();
            out[i] = self.ratio * mx + self.translation[i];
        }
    }

    pub fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply(x, &mut out);
        out
    }

    /// `y ↦ Mᵀ(y − b)/r`.
    pub fn apply_inverse(&self, y: &[f64], out: &mut [f64]) {
        let d = self.dim();
        for i in 0..d {
            let mut acc = 0.0;
            for k in 0..d {
                acc += self.rotation[k * d + i] * (y[k] - self.translation[k]);
            }
            out[i] = acc / self.ratio;
        }
    }

    pub fn inverse(&self) -> Similitude {
        let d = self.dim();
        let mut rot_t = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                rot_t[i * d + j] = self.rotation[j * d + i];
            }
        }
        let mut shift = vec![0.0; d];
        for i in 0..d {
            let acc: f64 = (0..d).map(|k| rot_t[i * d + k] * self.translation[k]).sum();
            shift[i] = -acc / self.ratio;
        }
        Similitude {
            ratio: 1.0 / self.ratio,
            rotation: rot_t,
            translation: shift,
        }
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &Similitude) -> Similitude {
        let d = self.dim();
        let mut rot = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                rot[i * d + j] = (0..d)
                    .map(|k| self.rotation[i * d + k] * inner.rotation[k * d + j])
                    .sum();
            }
        }
        let shift = self.apply_vec(&inner.translation);
        Similitude {
            ratio: self.ratio * inner.ratio,
            rotation: rot,
            translation: shift,
        }
    }
}

pub(crate) fn identity_matrix(dim: usize) -> Vec<f64> {
    let mut m = vec![0.0; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = 1.0;
    }
    m
}
