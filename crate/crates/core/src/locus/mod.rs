//! Locus equations for linear and affine configurations.

mod structure;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{two_dim_decomposition, ConfigError, Configuration};
use crate::linalg;
use crate::symbolic::{
    is_zero_sum, sum_all, t_names, HyperplaneChart, RationalFn, SymbolicError, ZeroMode, ZeroTest,
};

pub use structure::{
    large_multiplicity_coxeter_check, structure_check_affine, FlatCheck, LargeMultiplicityReport,
    ParallelCheck, StructureReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocusError {
    #[error("configuration is not linear")]
    NotLinear,
    #[error("hyperplane {0}: normal is isotropic")]
    Isotropic(usize),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// One locus equation `(α, j)` and what remained after summing it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusItem {
    pub hyperplane: usize,
    pub j: u32,
    /// `"0"` when the equation holds.
    pub residual: String,
    pub mode: ZeroMode,
}

impl LocusItem {
    pub fn holds(&self) -> bool {
        self.residual == "0"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub pass: bool,
    pub items: Vec<LocusItem>,
}

impl LocusReport {
    fn from_items(items: Vec<LocusItem>) -> Self {
        LocusReport {
            pass: items.iter().all(LocusItem::holds),
            items,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &LocusItem> {
        self.items.iter().filter(|it| !it.holds())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// One line per equation.
    pub fn to_text(&self) -> String {
        let mut out = format!("locus: {}\n", if self.pass { "pass" } else { "FAIL" });
        for it in &self.items {
            out.push_str(&format!(
                "  hyperplane {} j={} [{}]: {}\n",
                it.hyperplane,
                it.j,
                it.mode.as_str(),
                it.residual
            ));
        }
        out
    }
}

/// Terms `m_β(m_β+1)(β,β)(α,β)^{2j-1} / ((β,x)+c_β)^{2j+1}` for `β` in `others`,
/// restricted to the hyperplane `i` (functions of `n - 1` parameters).
pub(crate) fn equation_terms(
    c: &Configuration,
    i: usize,
    j: u32,
    others: impl Iterator<Item = usize>,
) -> Result<Vec<RationalFn>, LocusError> {
    let n = c.dimension();
    let alpha = &c.hyperplanes()[i];
    if alpha.norm().is_zero() {
        return Err(LocusError::Isotropic(i));
    }
    let chart = HyperplaneChart::new(&c.form(i, n))?;
    let mut terms = Vec::new();
    for b in others.filter(|&b| b != i) {
        let beta = &c.hyperplanes()[b];
        let ab = linalg::dot(&alpha.normal, &beta.normal);
        if ab.is_zero() {
            continue;
        }
        let m = beta.multiplicity as i64;
        let k = ab.pow(2 * j - 1).mul(&beta.norm()).scale_int(m * (m + 1));
        let restricted = c.form(b, n).substitute(&chart.images, n - 1);
        let term = RationalFn::linear_power(&restricted, -(2 * j as i64 + 1))
            .map_err(|_| SymbolicError::ProportionalDenominator)?;
        terms.push(term.scale(&k));
    }
    Ok(terms)
}

/// Exact left side of equation `(i, j)` on the hyperplane `i`.
pub fn equation_residual(c: &Configuration, i: usize, j: u32) -> Result<RationalFn, LocusError> {
    let terms = equation_terms(c, i, j, 0..c.len())?;
    Ok(sum_all(&terms, c.dimension().saturating_sub(1)))
}

fn item(c: &Configuration, i: usize, j: u32, test: &ZeroTest) -> LocusItem {
    LocusItem {
        hyperplane: i,
        j,
        residual: test.residual_text(&t_names(c.dimension().saturating_sub(1))),
        mode: test.mode,
    }
}

fn equations(c: &Configuration) -> Vec<(usize, u32)> {
    c.hyperplanes()
        .iter()
        .enumerate()
        .flat_map(|(i, h)| (1..=h.multiplicity).map(move |j| (i, j)))
        .collect()
}

/// Checks every locus equation, offsets included.
pub fn verify_affine_locus(
    c: &Configuration,
    mode: ZeroMode,
    seed: u64,
) -> Result<LocusReport, LocusError> {
    let nvars = c.dimension().saturating_sub(1);
    let items = equations(c)
        .into_par_iter()
        .map(|(i, j)| {
            let terms = equation_terms(c, i, j, 0..c.len())?;
            Ok(item(c, i, j, &is_zero_sum(&terms, nvars, mode, seed)))
        })
        .collect::<Result<Vec<_>, LocusError>>()?;
    Ok(LocusReport::from_items(items))
}

/// Checks the locus equations of a configuration through the origin.
pub fn verify_linear_locus(
    c: &Configuration,
    mode: ZeroMode,
    seed: u64,
) -> Result<LocusReport, LocusError> {
    if !c.is_linear() {
        return Err(LocusError::NotLinear);
    }
    verify_affine_locus(c, mode, seed)
}

/// Checks each equation plane by plane: for `α` and every 2D class through it, the
/// sum over that class alone must vanish.
pub fn verify_via_2d_decomposition(
    c: &Configuration,
    mode: ZeroMode,
    seed: u64,
) -> Result<LocusReport, LocusError> {
    if !c.is_linear() {
        return Err(LocusError::NotLinear);
    }
    let nvars = c.dimension().saturating_sub(1);
    let decomposition = two_dim_decomposition(c);
    let items = equations(c)
        .into_par_iter()
        .map(|(i, j)| {
            let mut last = None;
            for class in decomposition
                .classes
                .iter()
                .filter(|cl| cl.indices.contains(&i))
            {
                let terms = equation_terms(c, i, j, class.indices.iter().copied())?;
                let test = is_zero_sum(&terms, nvars, mode, seed);
                let failed = !test.zero;
                last = Some(test);
                if failed {
                    break;
                }
            }
            Ok(match last {
                Some(test) => item(c, i, j, &test),
                None => LocusItem {
                    hyperplane: i,
                    j,
                    residual: "0".into(),
                    mode,
                },
            })
        })
        .collect::<Result<Vec<_>, LocusError>>()?;
    Ok(LocusReport::from_items(items))
}

#[cfg(test)]
mod tests;
