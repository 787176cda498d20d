use crate::linalg::{self, Vector};

use super::Configuration;

/// Normals lying in one 2D subspace (or a lone normal when `basis` has one vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneClass {
    /// Reduced row echelon basis of the span.
    pub basis: Vec<Vector>,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneDecomposition {
    pub classes: Vec<PlaneClass>,
}

impl PlaneDecomposition {
    pub fn planes(&self) -> impl Iterator<Item = &PlaneClass> {
        self.classes.iter().filter(|c| c.basis.len() == 2)
    }

    pub fn singletons(&self) -> impl Iterator<Item = &PlaneClass> {
        self.classes.iter().filter(|c| c.basis.len() == 1)
    }
}

/// Groups normals by the 2D span of every pair; normals paired with nothing stand alone.
///
/// Classes are listed in order of their smallest pair of indices.
pub fn two_dim_decomposition(c: &Configuration) -> PlaneDecomposition {
    let hs = c.hyperplanes();
    let mut classes: Vec<PlaneClass> = Vec::new();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let (basis, _) = linalg::rref(&[hs[i].normal.clone(), hs[j].normal.clone()]);
            if classes.iter().any(|cl| cl.basis == basis) {
                continue;
            }
            let indices = (0..hs.len())
                .filter(|&k| linalg::in_span(&basis, &hs[k].normal))
                .collect();
            classes.push(PlaneClass { basis, indices });
        }
    }
    for (k, h) in hs.iter().enumerate() {
        if !classes.iter().any(|cl| cl.indices.contains(&k)) {
            let (basis, _) = linalg::rref(std::slice::from_ref(&h.normal));
            classes.push(PlaneClass {
                basis,
                indices: vec![k],
            });
        }
    }
    PlaneDecomposition { classes }
}
