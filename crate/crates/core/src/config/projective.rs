use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, Vector};
use crate::scalar::TowerScalar;

use super::{ConfigError, Configuration, Hyperplane};

/// Configuration in `C^{n1+n2}` made of `c1` on the first coordinates and `c2` on the rest.
pub fn direct_sum(c1: &Configuration, c2: &Configuration) -> Result<Configuration, ConfigError> {
    let n = c1.dimension() + c2.dimension();
    let pad = |h: &Hyperplane, before: usize| {
        let mut normal = vec![TowerScalar::zero(); n];
        for (i, a) in h.normal.iter().enumerate() {
            normal[before + i] = a.clone();
        }
        Hyperplane::affine(normal, h.offset.clone(), h.multiplicity)
    };
    let mut hs: Vec<Hyperplane> = c1.hyperplanes().iter().map(|h| pad(h, 0)).collect();
    hs.extend(c2.hyperplanes().iter().map(|h| pad(h, c1.dimension())));
    Configuration::with_tower(n, c1.tower().merge(c2.tower()), hs)
}

/// Union of `c1` and `c2` on orthogonal coordinate blocks of the direct-sum space.
pub fn orthogonal_union(
    c1: &Configuration,
    c2: &Configuration,
) -> Result<Configuration, ConfigError> {
    direct_sum(c1, c2)
}

/// Union of two configurations in the same space whose normal spans are orthogonal.
pub fn union_in_place(
    c1: &Configuration,
    c2: &Configuration,
) -> Result<Configuration, ConfigError> {
    if c1.dimension() != c2.dimension() {
        return Err(ConfigError::InvalidParameters("dimensions differ".into()));
    }
    for a in c1.hyperplanes() {
        for b in c2.hyperplanes() {
            if !linalg::dot(&a.normal, &b.normal).is_zero() {
                return Err(ConfigError::NotOrthogonal);
            }
        }
    }
    let mut hs = c1.hyperplanes().to_vec();
    hs.extend(c2.hyperplanes().iter().cloned());
    Configuration::with_tower(c1.dimension(), c1.tower().merge(c2.tower()), hs)
}

/// Sends `(α, x) + c = 0` in `C^n` to the linear hyperplane with normal `(α, c, ic)` in `C^{n+2}`.
pub fn isotropic_projectivisation(c: &Configuration) -> Configuration {
    let n = c.dimension() + 2;
    let i = TowerScalar::i();
    let hs = c
        .hyperplanes()
        .iter()
        .map(|h| {
            let mut normal = h.normal.clone();
            normal.push(h.offset.clone());
            normal.push(h.offset.mul(&i));
            Hyperplane::linear(normal, h.multiplicity)
        })
        .collect();
    Configuration::with_tower(n, c.tower().clone(), hs)
        .expect("projectivisation preserves inner products and distinctness")
}

/// Result of an isotropic reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub config: Configuration,
    /// Kernel `K = V ∩ V^⊥` of the form on the normal span `V`.
    pub kernel: Vec<Vector>,
    /// Orthonormal basis of the complement `L` of `K` in `V + V^⊥`.
    pub basis: Vec<Vector>,
    /// The generic point `a` of the slice `a + L`.
    pub shift: Vector,
    /// `L` came from basis completion rather than an orthogonal complement.
    pub basis_completion: bool,
    pub seed: u64,
}

/// Intersects a degenerate linear configuration with a generic slice `a + L`.
///
/// The shift `a` is drawn from small integers with a seeded generator and redrawn
/// while hyperplanes collide on the slice.
pub fn isotropic_reduction(c: &Configuration, seed: u64) -> Result<Reduction, ConfigError> {
    let (kernel, basis) = reduction_frame(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let shift: Vector = (0..c.dimension())
            .map(|_| TowerScalar::from_int(rng.gen_range(-9..=9)))
            .collect();
        match slice(c, &basis, &shift) {
            Ok(cfg) => {
                return Ok(Reduction {
                    config: cfg,
                    kernel,
                    basis,
                    shift,
                    basis_completion: true,
                    seed,
                })
            }
            Err(ConfigError::Conflict(..)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(ConfigError::InvalidParameters(
        "no generic slice found; hyperplanes keep colliding".into(),
    ))
}

/// Like [`isotropic_reduction`] with a caller-supplied shift `a`.
pub fn isotropic_reduction_at(
    c: &Configuration,
    shift: &[TowerScalar],
) -> Result<Reduction, ConfigError> {
    if shift.len() != c.dimension() {
        return Err(ConfigError::WrongLength {
            index: 0,
            got: shift.len(),
            expected: c.dimension(),
        });
    }
    let (kernel, basis) = reduction_frame(c)?;
    let config = slice(c, &basis, shift)?;
    Ok(Reduction {
        config,
        kernel,
        basis,
        shift: shift.to_vec(),
        basis_completion: true,
        seed: 0,
    })
}

/// Kernel `K` of the form on the normal span and an orthonormal complement basis of `L`.
fn reduction_frame(c: &Configuration) -> Result<(Vec<Vector>, Vec<Vector>), ConfigError> {
    if !c.is_linear() {
        return Err(ConfigError::NotLinear);
    }
    let n = c.dimension();
    let normals: Vec<Vector> = c.hyperplanes().iter().map(|h| h.normal.clone()).collect();
    let (v_basis, _) = linalg::rref(&normals);
    let gram: Vec<Vector> = v_basis
        .iter()
        .map(|a| v_basis.iter().map(|b| linalg::dot(a, b)).collect())
        .collect();
    let kernel: Vec<Vector> = linalg::nullspace(&gram, v_basis.len())
        .into_iter()
        .map(|coef| {
            coef.iter()
                .zip(&v_basis)
                .fold(vec![TowerScalar::zero(); n], |acc, (s, b)| {
                    linalg::add(&acc, &linalg::scale(b, s))
                })
        })
        .collect();
    if kernel.is_empty() {
        return Err(ConfigError::NonDegenerate);
    }
    let v_perp = linalg::nullspace(&normals, n);
    // K is the radical of the form on V + V^⊥, so its orthogonal complement there
    // is everything; complete a basis of K instead
    let mut span = kernel.clone();
    let mut l_raw: Vec<Vector> = Vec::new();
    for cand in v_basis.iter().chain(v_perp.iter()) {
        if !linalg::in_span(&span, cand) {
            span.push(cand.clone());
            l_raw.push(cand.clone());
        }
    }
    Ok((kernel, orthonormalize(l_raw)?))
}

/// The configuration induced on `a + L` in the coordinates of `basis`.
fn slice(
    c: &Configuration,
    basis: &[Vector],
    shift: &[TowerScalar],
) -> Result<Configuration, ConfigError> {
    let hs: Vec<Hyperplane> = c
        .hyperplanes()
        .iter()
        .map(|h| {
            let normal = basis.iter().map(|o| linalg::dot(&h.normal, o)).collect();
            Hyperplane::affine(normal, linalg::dot(&h.normal, shift), h.multiplicity)
        })
        .collect();
    if let Some(j) = hs.iter().position(|h| linalg::is_zero(&h.normal)) {
        return Err(ConfigError::ZeroNormal(j));
    }
    let cfg = Configuration::with_tower(basis.len(), c.tower().clone(), hs)?;
    if cfg.len() != c.len() {
        // equal multiplicities merged silently; treat as a collision too
        return Err(ConfigError::Conflict(0, 0));
    }
    Ok(cfg)
}

/// Gram–Schmidt for the complex bilinear form, normalizing by square roots of rational norms.
fn orthonormalize(mut vs: Vec<Vector>) -> Result<Vec<Vector>, ConfigError> {
    let mut out: Vec<Vector> = Vec::new();
    while !vs.is_empty() {
        vs = vs
            .into_iter()
            .map(|v| {
                out.iter().fold(v, |acc, o| {
                    let p = linalg::dot(&acc, o);
                    linalg::sub(&acc, &linalg::scale(o, &p))
                })
            })
            .filter(|v| !linalg::is_zero(v))
            .collect();
        if vs.is_empty() {
            break;
        }
        let norms: Vec<TowerScalar> = vs.iter().map(|v| linalg::dot(v, v)).collect();
        let pick = norms
            .iter()
            .position(|q| q.is_rational() && !q.is_zero())
            .or_else(|| norms.iter().position(|q| !q.is_zero()));
        let v = match pick {
            Some(p) => vs.remove(p),
            None => {
                // all isotropic: v + w has norm 2(v, w)
                let mut found = None;
                'outer: for a in 0..vs.len() {
                    for b in a + 1..vs.len() {
                        if !linalg::dot(&vs[a], &vs[b]).is_zero() {
                            found = Some((a, b));
                            break 'outer;
                        }
                    }
                }
                let (a, b) = found.ok_or_else(|| {
                    ConfigError::InvalidParameters("degenerate complement".into())
                })?;
                let w = linalg::add(&vs[a], &vs[b]);
                vs.remove(a);
                w
            }
        };
        let norm = linalg::dot(&v, &v);
        let q = norm
            .as_rational()
            .ok_or_else(|| ConfigError::Unnormalizable(norm.to_string()))?;
        let s = TowerScalar::sqrt_rational(4, &q);
        let inv = s.inv().expect("nonzero norm");
        out.push(linalg::scale(&v, &inv));
    }
    Ok(out)
}

/// Whether `b` arises from `a` by an inner-product preserving change of normals
/// (same Gram matrix, hyperplanes in the same order) together with `x ↦ λx + τ`.
pub fn related_by_similarity(a: &Configuration, b: &Configuration) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.hyperplanes()
        .iter()
        .zip(b.hyperplanes())
        .any(|(x, y)| x.multiplicity != y.multiplicity)
    {
        return false;
    }
    if a.gram() != b.gram() {
        return false;
    }
    // c'_j = λ c_j + (α'_j, τ)
    let rows: Vec<Vector> = b.hyperplanes().iter().map(|h| h.normal.clone()).collect();
    let unit_shift: Vector = a
        .hyperplanes()
        .iter()
        .zip(b.hyperplanes())
        .map(|(x, y)| y.offset.sub(&x.offset))
        .collect();
    if linalg::solve(&rows, &unit_shift).is_some() {
        return true;
    }
    let full: Vec<Vector> = a
        .hyperplanes()
        .iter()
        .zip(&rows)
        .map(|(x, r)| {
            let mut row = vec![x.offset.clone()];
            row.extend(r.iter().cloned());
            row
        })
        .collect();
    let rhs: Vector = b.hyperplanes().iter().map(|h| h.offset.clone()).collect();
    matches!(linalg::solve(&full, &rhs), Some(sol) if !sol[0].is_zero())
}
