use serde::Serialize;

use crate::config::{points_1d, two_dim_decomposition, Configuration};
use crate::linalg::{self, Vector};
use crate::scalar::TowerScalar;
use crate::symbolic::ZeroMode;

use super::{verify_affine_locus, verify_linear_locus, LocusError};

#[derive(Clone, Debug, Serialize)]
pub struct LargeMultiplicityReport {
    pub pass: bool,
    /// Indices of hyperplanes with large multiplicity.
    pub large: Vec<usize>,
    /// Whether `β` itself was counted among the vectors of each plane through it.
    pub count_beta: bool,
    /// `(β, α)` where `s_β(α)` is missing or carries another multiplicity.
    pub counterexample: Option<(usize, usize)>,
}

/// `s_β(α) = α - 2(β,α)/(β,β) β`.
fn reflect(beta: &[TowerScalar], alpha: &[TowerScalar]) -> Vector {
    let f = linalg::dot(beta, alpha)
        .scale_int(2)
        .div(&linalg::dot(beta, beta))
        .expect("non-isotropic");
    linalg::sub(alpha, &linalg::scale(beta, &f))
}

fn proportional(a: &[TowerScalar], b: &[TowerScalar]) -> bool {
    linalg::rank(&[a.to_vec(), b.to_vec()]) == 1
}

/// Finds the hyperplanes of large multiplicity and checks that their reflections
/// preserve the configuration with multiplicities.
///
/// `β` has large multiplicity when every 2D plane through it holds at most
/// `m_β + 1` normals; `count_beta` decides whether `β` is one of them.
pub fn large_multiplicity_coxeter_check(
    c: &Configuration,
    count_beta: bool,
) -> Result<LargeMultiplicityReport, LocusError> {
    if !c.is_linear() {
        return Err(LocusError::NotLinear);
    }
    let decomposition = two_dim_decomposition(c);
    let hs = c.hyperplanes();
    let large: Vec<usize> = (0..hs.len())
        .filter(|&b| {
            let limit = hs[b].multiplicity as usize + 1;
            decomposition
                .planes()
                .filter(|cl| cl.indices.contains(&b))
                .all(|cl| cl.indices.len() - usize::from(!count_beta) <= limit)
        })
        .collect();
    let mut counterexample = None;
    'outer: for &b in &large {
        for (a, h) in hs.iter().enumerate() {
            let image = reflect(&hs[b].normal, &h.normal);
            let ok = hs
                .iter()
                .any(|g| g.multiplicity == h.multiplicity && proportional(&g.normal, &image));
            if !ok {
                counterexample = Some((b, a));
                break 'outer;
            }
        }
    }
    Ok(LargeMultiplicityReport {
        pass: counterexample.is_none(),
        large,
        count_beta,
        counterexample,
    })
}

/// Linear locus check at a codimension-two flat.
#[derive(Clone, Debug, Serialize)]
pub struct FlatCheck {
    /// A point of the flat, printed.
    pub point: Vec<String>,
    pub hyperplanes: Vec<usize>,
    pub pass: bool,
}

/// 1D affine locus check of a class of parallel hyperplanes.
#[derive(Clone, Debug, Serialize)]
pub struct ParallelCheck {
    pub hyperplanes: Vec<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub pass: bool,
    pub flats: Vec<FlatCheck>,
    pub parallel_classes: Vec<ParallelCheck>,
}

/// Local structure check of an affine configuration.
///
/// (1) For each codimension-two flat cut out by two hyperplanes, the hyperplanes
/// containing it, translated to pass through the origin, must form a linear locus.
/// In the plane these flats are the intersection points; in higher dimension the
/// hyperplanes through any point split into such 2D groups.
/// (2) Each class of parallel hyperplanes must form a 1D affine locus.
pub fn structure_check_affine(
    c: &Configuration,
    mode: ZeroMode,
    seed: u64,
) -> Result<StructureReport, LocusError> {
    let hs = c.hyperplanes();
    let rows: Vec<Vector> = hs
        .iter()
        .map(|h| {
            let mut r = h.normal.clone();
            r.push(h.offset.clone());
            r
        })
        .collect();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut flats = Vec::new();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            if proportional(&hs[i].normal, &hs[j].normal) {
                continue;
            }
            let pair = [rows[i].clone(), rows[j].clone()];
            let members: Vec<usize> = (0..hs.len())
                .filter(|&k| linalg::in_span(&pair, &rows[k]))
                .collect();
            if seen.contains(&members) {
                continue;
            }
            seen.push(members.clone());
            let a = [hs[i].normal.clone(), hs[j].normal.clone()];
            let b = [hs[i].offset.neg(), hs[j].offset.neg()];
            let x0 = linalg::solve(&a, &b).expect("non-parallel hyperplanes meet");
            let local = c
                .subset(&members)
                .translated(&x0.iter().map(|v| v.neg()).collect::<Vec<_>>())?;
            let pass = verify_linear_locus(&local, mode, seed)?.pass;
            flats.push(FlatCheck {
                point: x0.iter().map(|v| v.to_string()).collect(),
                hyperplanes: members,
                pass,
            });
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for k in 0..hs.len() {
        match classes
            .iter_mut()
            .find(|cl| proportional(&hs[cl[0]].normal, &hs[k].normal))
        {
            Some(cl) => cl.push(k),
            None => classes.push(vec![k]),
        }
    }
    let mut parallel_classes = Vec::new();
    for cl in classes.into_iter().filter(|cl| cl.len() > 1) {
        // rescale every member to the normal of the first: (α, x) + d = 0
        let lead = &hs[cl[0]].normal;
        let p = lead
            .iter()
            .position(|v| !v.is_zero())
            .expect("nonzero normal");
        let points: Vec<(TowerScalar, u32)> = cl
            .iter()
            .map(|&k| {
                let lambda = hs[k].normal[p].div(&lead[p]).expect("nonzero");
                let d = hs[k].offset.div(&lambda).expect("nonzero");
                (d.neg(), hs[k].multiplicity)
            })
            .collect();
        let line = points_1d(&points)?;
        let pass = verify_affine_locus(&line, mode, seed)?.pass;
        parallel_classes.push(ParallelCheck {
            hyperplanes: cl,
            pass,
        });
    }
    Ok(StructureReport {
        pass: flats.iter().all(|f| f.pass) && parallel_classes.iter().all(|p| p.pass),
        flats,
        parallel_classes,
    })
}
