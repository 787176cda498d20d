//! Iteration of `L + k²` on `∏ ((α,x) + c)^{m_α} e^{(k,x)}`.
//!
//! Iterates are kept as `N / D` with the fixed denominator `D = ∏ f_j^{m_j}`,
//! `f_j = (α_j, x) + c_j`. With `φ = N/D` the double poles of `u` cancel against
//! `Δ(1/D)` and
//!
//! `D (L + k²) φ = -ΔN - 2(k,∇N) + [Σ_j 2 m_j (F/f_j) S_j N - Q N] / F`
//!
//! where `F = ∏ f_j`, `S_j = (α_j, ∇) + (α_j, k)` and
//! `Q = Σ_{j≠l} m_j m_l (α_j, α_l) F/(f_j f_l)`. When the bracket is not divisible
//! by `F` the pole order has grown and the chain continues with generic rational
//! arithmetic. When `Q = 0` only the `j`-th summand has a pole along `f_j`, so the
//! bracket splits into single divisions.

use rayon::prelude::*;

use crate::config::Configuration;
use crate::linalg;
use crate::scalar::TowerScalar;
use crate::symbolic::{apply_l_plus_k2, divide_by_linear, LinearForm, MultiPoly, RationalFn};

use super::potential_from_config;

enum State {
    Fixed(MultiPoly),
    Generic(RationalFn),
}

pub(crate) struct BerestChain {
    n: usize,
    mult: Vec<u32>,
    forms: Vec<LinearForm>,
    /// `(α_j, k)` as polynomials.
    k_forms: Vec<MultiPoly>,
    alphas: Vec<Vec<TowerScalar>>,
    cof: Vec<MultiPoly>,
    q: MultiPoly,
    u: RationalFn,
    state: State,
}

impl BerestChain {
    pub(crate) fn new(c: &Configuration) -> Self {
        let n = c.dimension();
        let nv = 2 * n;
        let hs = c.hyperplanes();
        let forms: Vec<LinearForm> = (0..c.len()).map(|j| c.form(j, nv)).collect();
        let polys: Vec<MultiPoly> = forms.iter().map(MultiPoly::from_linear).collect();
        let mult: Vec<u32> = hs.iter().map(|h| h.multiplicity).collect();
        let product = |skip: &[usize]| {
            polys
                .iter()
                .enumerate()
                .filter(|(j, _)| !skip.contains(j))
                .fold(MultiPoly::one(nv), |acc, (_, f)| acc.mul(f))
        };
        let cof: Vec<MultiPoly> = (0..polys.len()).map(|j| product(&[j])).collect();
        let mut q = MultiPoly::zero(nv);
        for j in 0..polys.len() {
            for l in j + 1..polys.len() {
                let g = linalg::dot(&hs[j].normal, &hs[l].normal);
                if g.is_zero() {
                    continue;
                }
                let s = g.scale_int(2 * mult[j] as i64 * mult[l] as i64);
                q = q.add(&product(&[j, l]).scale(&s));
            }
        }
        let d = polys
            .iter()
            .zip(&mult)
            .fold(MultiPoly::one(nv), |acc, (f, &m)| acc.mul(&f.pow(m)));
        BerestChain {
            n,
            k_forms: (0..c.len())
                .map(|j| MultiPoly::from_linear(&c.normal_form(j, nv, n)))
                .collect(),
            alphas: hs.iter().map(|h| h.normal.clone()).collect(),
            mult,
            forms,
            cof,
            q,
            u: potential_from_config(c).u_xk(),
            // φ₀ = D = D²/D
            state: State::Fixed(d.mul(&d)),
        }
    }

    pub(crate) fn current(&self) -> RationalFn {
        match &self.state {
            State::Fixed(num) => {
                let den = self
                    .forms
                    .iter()
                    .cloned()
                    .zip(self.mult.iter().copied())
                    .collect();
                RationalFn::from_parts(num.clone(), den).expect("nonconstant forms")
            }
            State::Generic(r) => r.clone(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match &self.state {
            State::Fixed(num) => num.is_zero(),
            State::Generic(r) => r.is_zero(),
        }
    }

    pub(crate) fn step(&mut self) {
        let next = match &self.state {
            State::Fixed(num) => match self.fixed_step(num) {
                Some(next) => State::Fixed(next),
                None => State::Generic(apply_l_plus_k2(&self.current(), &self.u, self.n)),
            },
            State::Generic(r) => State::Generic(apply_l_plus_k2(r, &self.u, self.n)),
        };
        self.state = next;
    }

    fn fixed_step(&self, num: &MultiPoly) -> Option<MultiPoly> {
        let n = self.n;
        let nv = 2 * n;
        let grad: Vec<MultiPoly> = (0..n).map(|i| num.derivative(i)).collect();
        let mut out = MultiPoly::zero(nv);
        for (i, g) in grad.iter().enumerate() {
            out = out.sub(&g.derivative(i));
            out = out.sub(&g.mul(&MultiPoly::var(nv, n + i)).scale_int(2));
        }
        let s_part = |j: usize| {
            let mut s = num.mul(&self.k_forms[j]);
            for (i, g) in grad.iter().enumerate() {
                if !self.alphas[j][i].is_zero() {
                    s = s.add(&g.scale(&self.alphas[j][i]));
                }
            }
            s.scale_int(2 * self.mult[j] as i64)
        };
        if self.q.is_zero() {
            // only term j has a pole along f_j, so each must divide on its own
            let parts: Option<Vec<MultiPoly>> = (0..self.forms.len())
                .into_par_iter()
                .map(|j| divide_by_form(&s_part(j), &self.forms[j]))
                .collect();
            return Some(parts?.iter().fold(out, |acc, p| acc.add(p)));
        }
        let parts: Vec<MultiPoly> = (0..self.forms.len())
            .into_par_iter()
            .map(|j| s_part(j).mul(&self.cof[j]))
            .collect();
        let mut bracket = parts
            .into_iter()
            .fold(MultiPoly::zero(nv), |acc, p| acc.add(&p));
        bracket = bracket.sub(&num.mul(&self.q));
        for f in &self.forms {
            if bracket.is_zero() {
                break;
            }
            bracket = divide_by_form(&bracket, f)?;
        }
        Some(out.add(&bracket))
    }
}

fn divide_by_form(p: &MultiPoly, f: &LinearForm) -> Option<MultiPoly> {
    if p.is_zero() {
        return Some(p.clone());
    }
    let (s, g) = f.normalized().expect("nonconstant form");
    Some(divide_by_linear(p, &g)?.scale(&s.inv().expect("nonzero")))
}
