//! Linear differential operators with rational coefficients.

use std::collections::BTreeMap;

use crate::scalar::TowerScalar;
use crate::symbolic::{sum_all, MultiPoly, RationalFn};

/// `Σ_a c_a(v) ∂^a`, where `a` is a multi-index over the variables `dvars`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp {
    nvars: usize,
    dvars: Vec<usize>,
    terms: BTreeMap<Vec<u32>, RationalFn>,
}

impl DiffOp {
    pub fn zero(nvars: usize, dvars: Vec<usize>) -> Self {
        DiffOp {
            nvars,
            dvars,
            terms: BTreeMap::new(),
        }
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: RationalFn, dvars: Vec<usize>) -> Self {
        let mut op = Self::zero(f.nvars(), dvars);
        let idx = vec![0; op.dvars.len()];
        op.insert(idx, f);
        op
    }

    /// `∂/∂ dvars[i]`.
    pub fn derivative(nvars: usize, dvars: Vec<usize>, i: usize) -> Self {
        let mut op = Self::zero(nvars, dvars);
        let mut idx = vec![0; op.dvars.len()];
        idx[i] = 1;
        op.insert(idx, RationalFn::one(nvars));
        op
    }

    /// `-Σ ∂_i² + u`.
    pub fn schrodinger(u: RationalFn, dvars: Vec<usize>) -> Self {
        let mut op = Self::multiplication(u, dvars);
        for i in 0..op.dvars.len() {
            let mut idx = vec![0; op.dvars.len()];
            idx[i] = 2;
            op.insert(
                idx,
                RationalFn::constant(op.nvars, TowerScalar::from_int(-1)),
            );
        }
        op
    }

    fn insert(&mut self, idx: Vec<u32>, c: RationalFn) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(idx, s);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dvars(&self) -> &[usize] {
        &self.dvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, RationalFn> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.insert(a.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&TowerScalar::from_int(-1))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &TowerScalar) -> Self {
        let mut out = Self::zero(self.nvars, self.dvars.clone());
        for (a, c) in &self.terms {
            out.insert(a.clone(), c.scale(s));
        }
        out
    }

    /// `∂^g f`.
    fn differentiate(&self, f: &RationalFn, g: &[u32]) -> RationalFn {
        let mut out = f.clone();
        for (i, &k) in g.iter().enumerate() {
            for _ in 0..k {
                out = out.derivative(self.dvars[i]);
            }
        }
        out
    }

    /// `self ∘ o` by the Leibniz rule.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.dvars.clone());
        for (a, ca) in &self.terms {
            for g in sub_indices(a) {
                let binom = a
                    .iter()
                    .zip(&g)
                    .fold(1i64, |acc, (&ai, &gi)| acc * binomial(ai, gi));
                let rest: Vec<u32> = a.iter().zip(&g).map(|(x, y)| x - y).collect();
                for (b, cb) in &o.terms {
                    let coeff = ca.mul(&self.differentiate(cb, &g)).scale_int(binom);
                    let idx = rest.iter().zip(b).map(|(x, y)| x + y).collect();
                    out.insert(idx, coeff);
                }
            }
        }
        out
    }

    /// `[self, o]`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.compose(o).sub(&o.compose(self))
    }

    pub fn apply(&self, f: &RationalFn) -> RationalFn {
        let parts: Vec<RationalFn> = self
            .terms
            .iter()
            .map(|(a, c)| c.mul(&self.differentiate(f, a)))
            .collect();
        sum_all(&parts, self.nvars)
    }

    /// First monomial in the `dvars` of total degree `≤ max_degree` that `self`
    /// does not annihilate.
    pub fn first_surviving_monomial(&self, max_degree: u32) -> Option<Vec<u32>> {
        let k = self.dvars.len();
        let mut exps: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..k {
            exps = exps
                .into_iter()
                .flat_map(|p| {
                    let used: u32 = p.iter().sum();
                    (0..=max_degree - used).map(move |e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        exps.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
        exps.into_iter().find(|e| {
            let mono = e
                .iter()
                .zip(&self.dvars)
                .fold(MultiPoly::one(self.nvars), |acc, (&a, &v)| {
                    acc.mul(&MultiPoly::var(self.nvars, v).pow(a))
                });
            !self.apply(&RationalFn::from_poly(mono)).is_zero()
        })
    }

    /// Prefactor of `self[F e^{Σ v_d v_{partner(d)}}]`, where `partners[i]` is the
    /// variable paired with `dvars[i]` in the exponent.
    pub fn apply_twisted(&self, f: &RationalFn, partners: &[usize]) -> RationalFn {
        let mut cache: BTreeMap<Vec<u32>, RationalFn> = BTreeMap::new();
        cache.insert(vec![0; self.dvars.len()], f.clone());
        let parts: Vec<RationalFn> = self
            .terms
            .iter()
            .map(|(a, c)| c.mul(&twisted(&mut cache, a, &self.dvars, partners)))
            .collect();
        sum_all(&parts, self.nvars)
    }

    /// Coefficients printed with `names`, keyed by multi-index.
    pub fn table(&self, names: &[String]) -> Vec<(Vec<u32>, String)> {
        self.terms
            .iter()
            .map(|(a, c)| (a.clone(), c.fmt_with(names)))
            .collect()
    }
}

/// `D^a F` with `D_i = ∂_{dvars[i]} + v_{partners[i]}`, memoized over multi-indices.
fn twisted(
    cache: &mut BTreeMap<Vec<u32>, RationalFn>,
    a: &[u32],
    dvars: &[usize],
    partners: &[usize],
) -> RationalFn {
    if let Some(v) = cache.get(a) {
        return v.clone();
    }
    let i = a.iter().position(|&x| x > 0).expect("nonzero multi-index");
    let mut prev = a.to_vec();
    prev[i] -= 1;
    let g = twisted(cache, &prev, dvars, partners);
    let nv = g.nvars();
    let out = g
        .derivative(dvars[i])
        .add(&g.mul_poly(&MultiPoly::var(nv, partners[i])));
    cache.insert(a.to_vec(), out.clone());
    out
}

fn sub_indices(a: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &ai in a {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=ai).map(move |g| {
                    let mut q = p.clone();
                    q.push(g);
                    q
                })
            })
            .collect();
    }
    out
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}
