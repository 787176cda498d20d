//! Hyperplane configurations with multiplicities.

mod generators;
mod json;
mod planes;
mod projective;

use std::cmp::Ordering;

use thiserror::Error;

use crate::linalg;
use crate::scalar::{FieldTower, TowerError, TowerScalar};
use crate::symbolic::LinearForm;

pub use generators::{
    cos_sin_pi, deformed_an, deformed_cn, make_coxeter, points_1d, CoxeterFamily,
};
pub use json::{ConfigDoc, HyperplaneDoc};
pub use planes::{two_dim_decomposition, PlaneClass, PlaneDecomposition};
pub use projective::{
    direct_sum, isotropic_projectivisation, isotropic_reduction, isotropic_reduction_at,
    orthogonal_union, related_by_similarity, union_in_place, Reduction,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("hyperplane {index}: normal has {got} entries, expected {expected}")]
    WrongLength {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("hyperplane {0}: normal is zero")]
    ZeroNormal(usize),
    #[error("hyperplane {0}: normal is isotropic")]
    Isotropic(usize),
    #[error("hyperplane {0}: multiplicity must be positive")]
    ZeroMultiplicity(usize),
    #[error("hyperplanes {0} and {1} coincide but carry different multiplicities")]
    Conflict(usize, usize),
    #[error("non-invariant multiplicity assignment: {0}")]
    NonInvariant(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("configuration is not linear")]
    NotLinear,
    #[error("normal spans are not orthogonal")]
    NotOrthogonal,
    #[error("the form on the normal span is non-degenerate")]
    NonDegenerate,
    #[error("cannot normalize a basis vector of norm {0} inside the tower")]
    Unnormalizable(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// One hyperplane `(α, x) + c = 0` with multiplicity `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<TowerScalar>,
    pub offset: TowerScalar,
    pub multiplicity: u32,
}

impl Hyperplane {
    pub fn linear(normal: Vec<TowerScalar>, multiplicity: u32) -> Self {
        Hyperplane {
            normal,
            offset: TowerScalar::zero(),
            multiplicity,
        }
    }

    pub fn affine(normal: Vec<TowerScalar>, offset: TowerScalar, multiplicity: u32) -> Self {
        Hyperplane {
            normal,
            offset,
            multiplicity,
        }
    }

    /// `(α, α)`.
    pub fn norm(&self) -> TowerScalar {
        linalg::dot(&self.normal, &self.normal)
    }

    /// `(α, c)` scaled so that the first nonzero normal entry is 1.
    fn normalized(&self) -> (Vec<TowerScalar>, TowerScalar) {
        let lead = self
            .normal
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero normal")
            .inv()
            .expect("nonzero");
        (linalg::scale(&self.normal, &lead), self.offset.mul(&lead))
    }

    fn printed_normal(&self) -> Vec<String> {
        self.normal.iter().map(|c| c.to_string()).collect()
    }
}

/// A validated configuration in `C^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    dimension: usize,
    tower: FieldTower,
    hyperplanes: Vec<Hyperplane>,
}

impl Configuration {
    /// Validates, merges coinciding hyperplanes, and computes the covering tower.
    pub fn new(dimension: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self, ConfigError> {
        Self::with_tower(dimension, FieldTower::gaussian(), hyperplanes)
    }

    /// Like [`Configuration::new`], keeping at least the generators of `tower`.
    pub fn with_tower(
        dimension: usize,
        tower: FieldTower,
        hyperplanes: Vec<Hyperplane>,
    ) -> Result<Self, ConfigError> {
        let mut kept: Vec<(usize, Hyperplane, (Vec<TowerScalar>, TowerScalar))> = Vec::new();
        for (index, h) in hyperplanes.into_iter().enumerate() {
            if h.normal.len() != dimension {
                return Err(ConfigError::WrongLength {
                    index,
                    got: h.normal.len(),
                    expected: dimension,
                });
            }
            if linalg::is_zero(&h.normal) {
                return Err(ConfigError::ZeroNormal(index));
            }
            if h.norm().is_zero() {
                return Err(ConfigError::Isotropic(index));
            }
            if h.multiplicity == 0 {
                return Err(ConfigError::ZeroMultiplicity(index));
            }
            let key = h.normalized();
            if let Some((first, other, _)) = kept.iter().find(|(_, _, k)| *k == key) {
                if other.multiplicity != h.multiplicity {
                    return Err(ConfigError::Conflict(*first, index));
                }
                continue;
            }
            kept.push((index, h, key));
        }
        let hyperplanes: Vec<Hyperplane> = kept.into_iter().map(|(_, h, _)| h).collect();
        let scalars = hyperplanes
            .iter()
            .flat_map(|h| h.normal.iter().chain(std::iter::once(&h.offset)));
        let tower = tower.merge(&FieldTower::covering(scalars));
        Ok(Configuration {
            dimension,
            tower,
            hyperplanes,
        })
    }

    pub fn empty(dimension: usize) -> Self {
        Configuration {
            dimension,
            tower: FieldTower::gaussian(),
            hyperplanes: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.hyperplanes.iter().all(|h| h.offset.is_zero())
    }

    /// `M = Σ m_α`.
    pub fn total_multiplicity(&self) -> u32 {
        self.hyperplanes.iter().map(|h| h.multiplicity).sum()
    }

    /// `(α_j, x) + c_j` over `nvars` variables with `x` at indices `0..n`.
    pub fn form(&self, j: usize, nvars: usize) -> LinearForm {
        let h = &self.hyperplanes[j];
        LinearForm::from_block(nvars, 0, &h.normal, h.offset.clone())
    }

    /// `(α_j, v)` with `v` at indices `offset..offset+n` of an `nvars` space.
    pub fn normal_form(&self, j: usize, nvars: usize, offset: usize) -> LinearForm {
        LinearForm::from_block(
            nvars,
            offset,
            &self.hyperplanes[j].normal,
            TowerScalar::zero(),
        )
    }

    /// Gram matrix of the normals.
    pub fn gram(&self) -> Vec<Vec<TowerScalar>> {
        self.hyperplanes
            .iter()
            .map(|a| {
                self.hyperplanes
                    .iter()
                    .map(|b| linalg::dot(&a.normal, &b.normal))
                    .collect()
            })
            .collect()
    }

    /// Hyperplanes sorted lexicographically by printed normal, then offset.
    pub fn canonical(&self) -> Self {
        let mut hs = self.hyperplanes.clone();
        hs.sort_by(|a, b| {
            let o = a.printed_normal().cmp(&b.printed_normal());
            if o != Ordering::Equal {
                return o;
            }
            a.offset.to_string().cmp(&b.offset.to_string())
        });
        Configuration {
            dimension: self.dimension,
            tower: self.tower.clone(),
            hyperplanes: hs,
        }
    }

    /// Reorders hyperplanes: position `i` receives hyperplane `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Configuration {
            dimension: self.dimension,
            tower: self.tower.clone(),
            hyperplanes: perm.iter().map(|&i| self.hyperplanes[i].clone()).collect(),
        }
    }

    /// Replaces `(α_j, c_j)` by `(λα_j, λc_j)`.
    pub fn rescaled(&self, j: usize, lambda: &TowerScalar) -> Result<Self, ConfigError> {
        let mut hs = self.hyperplanes.clone();
        hs[j].normal = linalg::scale(&hs[j].normal, lambda);
        hs[j].offset = hs[j].offset.mul(lambda);
        Self::with_tower(self.dimension, self.tower.clone(), hs)
    }

    /// Image under `x ↦ Qx` for a matrix `Q` with `QᵀQ = 1` (normals map to `Qα`).
    pub fn transformed(&self, q: &[Vec<TowerScalar>]) -> Result<Self, ConfigError> {
        let hs = self
            .hyperplanes
            .iter()
            .map(|h| {
                let normal = q.iter().map(|row| linalg::dot(row, &h.normal)).collect();
                Hyperplane::affine(normal, h.offset.clone(), h.multiplicity)
            })
            .collect();
        Self::with_tower(self.dimension, self.tower.clone(), hs)
    }

    /// Image under `x ↦ x + v`.
    pub fn translated(&self, v: &[TowerScalar]) -> Result<Self, ConfigError> {
        let hs = self
            .hyperplanes
            .iter()
            .map(|h| {
                let offset = h.offset.sub(&linalg::dot(&h.normal, v));
                Hyperplane::affine(h.normal.clone(), offset, h.multiplicity)
            })
            .collect();
        Self::with_tower(self.dimension, self.tower.clone(), hs)
    }

    /// Replaces the normal of hyperplane `j`.
    pub fn with_normal(&self, j: usize, normal: Vec<TowerScalar>) -> Result<Self, ConfigError> {
        let mut hs = self.hyperplanes.clone();
        hs[j].normal = normal;
        Self::with_tower(self.dimension, self.tower.clone(), hs)
    }

    /// Subconfiguration with the given hyperplane indices.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Configuration {
            dimension: self.dimension,
            tower: self.tower.clone(),
            hyperplanes: indices
                .iter()
                .map(|&i| self.hyperplanes[i].clone())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests;
