//! Baker–Akhiezer functions by Berest's formula and the checks they must pass.

mod chain;
mod diffop;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigDoc, ConfigError, Configuration};
use crate::scalar::{Rational, TowerScalar};
use crate::symbolic::{
    apply_l_plus_k2, is_zero, laurent_coefficient, laurent_normal_expansion,
    restrict_to_hyperplane, xk_names, LinearForm, MultiPoly, RationalFn, SymbolicError, ZeroMode,
};

pub use diffop::DiffOp;

use chain::BerestChain;

#[derive(Debug, Clone, Error)]
pub enum BakerError {
    /// `φ_{M+1} ≠ 0`: the configuration is not a locus configuration.
    #[error("Berest iteration did not terminate after {steps} steps")]
    NonTerminating { steps: u32, phi: RationalFn },
    #[error("configuration is not linear")]
    NotLinear,
    #[error("u has no double pole along the given hyperplane")]
    NotPole,
    #[error("leading Laurent coefficient {0} is not m(m+1)(α,α) for a positive integer m")]
    BadLeadingCoefficient(String),
    #[error("polynomial has {got} variables, expected {expected}")]
    WrongArity { got: usize, expected: usize },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// `L = -Δ + u(x)` in `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchrodingerOp {
    pub n: usize,
    /// Potential in the `n` variables `x`.
    pub u: RationalFn,
}

impl SchrodingerOp {
    /// Potential as a function on the `2n`-variable `(x, k)` space.
    pub fn u_xk(&self) -> RationalFn {
        self.u.extend(2 * self.n)
    }

    /// `L` acting on the `x` block of the `(x, k)` space.
    pub fn diffop(&self) -> DiffOp {
        DiffOp::schrodinger(self.u_xk(), (0..self.n).collect())
    }
}

/// `u = Σ m(m+1)(α,α) / ((α,x) + c)²`.
pub fn potential_from_config(c: &Configuration) -> SchrodingerOp {
    let n = c.dimension();
    let terms: Vec<RationalFn> = c
        .hyperplanes()
        .iter()
        .enumerate()
        .map(|(j, h)| {
            let m = h.multiplicity as i64;
            RationalFn::linear_power(&c.form(j, n), -2)
                .expect("nonconstant form")
                .scale(&h.norm().scale_int(m * (m + 1)))
        })
        .collect();
    SchrodingerOp {
        n,
        u: crate::symbolic::sum_all(&terms, n),
    }
}

/// `ψ(k, x) = prefactor · e^{(k,x)}` over the variables `(x_1..x_n, k_1..k_n)`.
#[derive(Clone, Debug)]
pub struct BAFunction {
    pub config: Configuration,
    /// `M = Σ m_α`.
    pub m_total: u32,
    /// `A(k) = ∏ (α,k)^{m_α}`.
    pub a_k: MultiPoly,
    /// `P(k, x)`, polynomial in `k` with highest term `A(k)`.
    pub p: RationalFn,
    /// `P / A(k)`.
    pub prefactor: RationalFn,
}

#[derive(Serialize)]
struct BaDoc {
    config: ConfigDoc,
    #[serde(rename = "M")]
    m: u32,
    prefactor: String,
}

impl BAFunction {
    pub fn n(&self) -> usize {
        self.config.dimension()
    }

    pub fn prefactor_text(&self) -> String {
        self.prefactor.fmt_with(&xk_names(self.n()))
    }

    pub fn to_json(&self) -> String {
        let doc = BaDoc {
            config: ConfigDoc::from_config(&self.config),
            m: self.m_total,
            prefactor: self.prefactor_text(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    /// Prefactor with the `x` and `k` blocks exchanged.
    pub fn swapped_prefactor(&self) -> RationalFn {
        let n = self.n();
        self.prefactor.remap(&swap_map(n), 2 * n)
    }
}

fn swap_map(n: usize) -> Vec<usize> {
    (0..2 * n)
        .map(|i| if i < n { i + n } else { i - n })
        .collect()
}

/// `A(k)` over the `(x, k)` space.
pub fn a_of_k(c: &Configuration) -> MultiPoly {
    let n = c.dimension();
    (0..c.len()).fold(MultiPoly::one(2 * n), |acc, j| {
        let f = MultiPoly::from_linear(&c.normal_form(j, 2 * n, n));
        acc.mul(&f.pow(c.hyperplanes()[j].multiplicity))
    })
}

/// Prefactors of `φ_0, …, φ_steps` with `φ_{i+1} = (L + k²) φ_i`.
pub fn berest_iterates(c: &Configuration, steps: u32) -> Vec<RationalFn> {
    let mut chain = BerestChain::new(c);
    let mut out = vec![chain.current()];
    for _ in 0..steps {
        chain.step();
        out.push(chain.current());
    }
    out
}

/// `ψ = [(-2)^M M! A(k)]^{-1} (L + k²)^M [∏ ((α,x)+c)^{m_α} e^{(k,x)}]`.
pub fn berest_psi(c: &Configuration) -> Result<BAFunction, BakerError> {
    let n = c.dimension();
    let m_total = c.total_multiplicity();
    let mut chain = BerestChain::new(c);
    for _ in 0..m_total {
        chain.step();
    }
    let p = chain.current();
    chain.step();
    if !chain.is_zero() {
        return Err(BakerError::NonTerminating {
            steps: m_total,
            phi: chain.current(),
        });
    }
    // (-2)^M M! = ∏ (-2i)
    let norm = (1..=m_total as i64).fold(Rational::from_integer(1.into()), |acc, i| {
        acc / Rational::from_integer((-2 * i).into())
    });
    let p = p.scale_rational(&norm);
    let mut den = p.denominator().to_vec();
    den.extend((0..c.len()).map(|j| (c.normal_form(j, 2 * n, n), c.hyperplanes()[j].multiplicity)));
    let prefactor = RationalFn::from_parts(p.numerator().clone(), den)?;
    Ok(BAFunction {
        config: c.clone(),
        m_total,
        a_k: a_of_k(c),
        p,
        prefactor,
    })
}

/// One odd normal derivative condition.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomItem {
    pub hyperplane: usize,
    pub order: u32,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub pass: bool,
    pub items: Vec<AxiomItem>,
}

/// `∂_α^s (ψ (α,k)^{m_α}) = 0` on `(α,k) = 0` for odd `s < 2m_α`, with `∂_α = (α, ∂/∂k)`.
pub fn verify_ba_axioms(
    psi: &BAFunction,
    mode: ZeroMode,
    seed: u64,
) -> Result<AxiomReport, BakerError> {
    let c = &psi.config;
    if !c.is_linear() {
        return Err(BakerError::NotLinear);
    }
    let n = c.dimension();
    let nv = 2 * n;
    let names: Vec<String> = crate::symbolic::t_names(nv - 1);
    let per_hyperplane: Vec<Vec<AxiomItem>> = (0..c.len())
        .into_par_iter()
        .map(|j| {
            let h = &c.hyperplanes()[j];
            let k_form = c.normal_form(j, nv, n);
            let x_form = MultiPoly::from_linear(&c.form(j, nv));
            let mut g = psi
                .prefactor
                .mul_linear_power(&k_form, h.multiplicity as i64)?;
            let mut items = Vec::new();
            for s in 1..2 * h.multiplicity {
                // ∂_α (G e^{(k,x)}) = (∂_α G + (α,x) G) e^{(k,x)}
                let mut d = g.mul_poly(&x_form);
                for (i, a) in h.normal.iter().enumerate() {
                    if !a.is_zero() {
                        d = d.add(&g.derivative(n + i).scale(a));
                    }
                }
                g = d;
                if s % 2 == 1 {
                    let r = restrict_to_hyperplane(&g, &k_form)?;
                    let t = is_zero(&r, mode, seed);
                    items.push(AxiomItem {
                        hyperplane: j,
                        order: s,
                        residual: t.residual_text(&names),
                    });
                }
            }
            Ok(items)
        })
        .collect::<Result<_, BakerError>>()?;
    let items: Vec<AxiomItem> = per_hyperplane.into_iter().flatten().collect();
    Ok(AxiomReport {
        pass: items.iter().all(|it| it.residual == "0"),
        items,
    })
}

/// `(L + k²) ψ = 0`.
pub fn verify_eigen(psi: &BAFunction, l: &SchrodingerOp, mode: ZeroMode, seed: u64) -> bool {
    let r = apply_l_plus_k2(&psi.prefactor, &l.u_xk(), l.n);
    is_zero(&r, mode, seed).zero
}

/// `ψ(k, x) = ψ(x, k)`; linear configurations only.
pub fn verify_symmetry(psi: &BAFunction, mode: ZeroMode, seed: u64) -> Result<bool, BakerError> {
    if !psi.config.is_linear() {
        return Err(BakerError::NotLinear);
    }
    let d = psi.prefactor.sub(&psi.swapped_prefactor());
    Ok(is_zero(&d, mode, seed).zero)
}

/// Directional derivative `(α, ∂)` of a polynomial.
fn directional(f: &MultiPoly, alpha: &[TowerScalar]) -> MultiPoly {
    alpha
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .fold(MultiPoly::zero(f.nvars()), |acc, (i, a)| {
            acc.add(&f.derivative(i).scale(a))
        })
}

/// Odd normal derivatives of `f(k)` up to order `2m_α - 1` vanish on every `(α,k) = 0`.
pub fn is_quasi_invariant(f: &MultiPoly, c: &Configuration) -> Result<bool, BakerError> {
    if !c.is_linear() {
        return Err(BakerError::NotLinear);
    }
    let n = c.dimension();
    if f.nvars() != n {
        return Err(BakerError::WrongArity {
            got: f.nvars(),
            expected: n,
        });
    }
    for (j, h) in c.hyperplanes().iter().enumerate() {
        let form = c.normal_form(j, n, 0);
        let mut g = f.clone();
        for s in 1..2 * h.multiplicity {
            g = directional(&g, &h.normal);
            if s % 2 == 1
                && !restrict_to_hyperplane(&RationalFn::from_poly(g.clone()), &form)?.is_zero()
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `L_f = c_N (ad_L)^N [f(x)]` with `c_N = (-1)^N / (2^N N!)` and `N = deg f`.
///
/// With this constant `L_f ψ = f(k) ψ`.
pub fn operator_from_ad_formula(l: &SchrodingerOp, f: &MultiPoly) -> Result<DiffOp, BakerError> {
    let n = l.n;
    if f.nvars() != n {
        return Err(BakerError::WrongArity {
            got: f.nvars(),
            expected: n,
        });
    }
    let big_n = f.total_degree();
    let dvars: Vec<usize> = (0..n).collect();
    let lop = l.diffop();
    let mut op = DiffOp::multiplication(RationalFn::from_poly(f.extend(2 * n)), dvars);
    for _ in 0..big_n {
        op = lop.commutator(&op);
    }
    let mut c = Rational::from_integer(if big_n.is_multiple_of(2) { 1 } else { -1 }.into());
    for i in 1..=big_n as i64 {
        c /= Rational::from_integer((2 * i).into());
    }
    Ok(op.scale(&TowerScalar::from_rational(c)))
}

/// `f(k)` as a polynomial on the `(x, k)` space.
pub fn in_k_block(f: &MultiPoly) -> MultiPoly {
    let n = f.nvars();
    f.remap(&(n..2 * n).collect::<Vec<_>>(), 2 * n)
}

/// `L_f ψ - f(k) ψ = 0`.
pub fn verify_operator_eigen(
    op: &DiffOp,
    f: &MultiPoly,
    psi: &BAFunction,
    mode: ZeroMode,
    seed: u64,
) -> bool {
    let n = psi.n();
    let partners: Vec<usize> = (n..2 * n).collect();
    let lhs = op.apply_twisted(&psi.prefactor, &partners);
    let d = lhs.sub(&psi.prefactor.mul_poly(&in_k_block(f)));
    is_zero(&d, mode, seed).zero
}

/// `L(k, ∂/∂k) ψ = -x² ψ` with the same potential in the `k` variables; linear only.
pub fn verify_bispectral(psi: &BAFunction, mode: ZeroMode, seed: u64) -> Result<bool, BakerError> {
    let c = &psi.config;
    if !c.is_linear() {
        return Err(BakerError::NotLinear);
    }
    let n = c.dimension();
    let nv = 2 * n;
    let u_k = potential_from_config(c)
        .u
        .remap(&(n..nv).collect::<Vec<_>>(), nv);
    let op = DiffOp::schrodinger(u_k, (n..nv).collect());
    let lhs = op.apply_twisted(&psi.prefactor, &(0..n).collect::<Vec<_>>());
    let x2 = (0..n).fold(MultiPoly::zero(nv), |acc, i| {
        acc.add(&MultiPoly::var(nv, i).pow(2))
    });
    let d = lhs.add(&psi.prefactor.mul_poly(&x2));
    Ok(is_zero(&d, mode, seed).zero)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyReport {
    pub pass: bool,
    pub m: u32,
    /// `(s, c_s)` for the checked orders `s = -1, 1, 3, …, 2m - 1`.
    pub coefficients: Vec<(i64, String)>,
}

/// Laurent conditions along `h`: `c_{-2} = m(m+1)(α,α)` and `c_{-1} = c_1 = … = c_{2m-1} = 0`.
pub fn trivial_monodromy_check(
    l: &SchrodingerOp,
    h: &LinearForm,
) -> Result<MonodromyReport, BakerError> {
    let probe = laurent_normal_expansion(&l.u, h, 0)?;
    if probe.first().map(|(s, _)| *s) != Some(-2) {
        return Err(BakerError::NotPole);
    }
    let lead = probe[0].1.as_constant().ok_or_else(|| {
        BakerError::BadLeadingCoefficient(probe[0].1.fmt_with(&crate::symbolic::t_names(l.n - 1)))
    })?;
    let nn = h.dot(h);
    let q = lead
        .div(&nn)
        .and_then(|q| q.as_rational())
        .filter(|q| q.is_integer())
        .ok_or_else(|| BakerError::BadLeadingCoefficient(lead.to_string()))?;
    let q: i64 = q
        .numer()
        .try_into()
        .map_err(|_| BakerError::BadLeadingCoefficient(lead.to_string()))?;
    let m = (1..=1000i64)
        .find(|m| m * (m + 1) == q)
        .ok_or_else(|| BakerError::BadLeadingCoefficient(lead.to_string()))? as u32;
    let depth = 2 * m as usize + 1;
    let ex = laurent_normal_expansion(&l.u, h, depth)?;
    let names = crate::symbolic::t_names(l.n - 1);
    let orders = std::iter::once(-1).chain((1..2 * m as i64).step_by(2));
    let coefficients: Vec<(i64, String)> = orders
        .map(|s| {
            let c = laurent_coefficient(&ex, s, l.n - 1);
            let text = if c.is_zero() {
                "0".into()
            } else {
                c.fmt_with(&names)
            };
            (s, text)
        })
        .collect();
    Ok(MonodromyReport {
        pass: coefficients.iter().all(|(_, t)| t == "0"),
        m,
        coefficients,
    })
}

#[cfg(test)]
mod tests;
