use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use crate::scalar::TowerScalar;

use super::linear::LinearForm;

/// Maximum number of variables a polynomial may use.
pub const MAX_VARS: usize = 16;
/// Maximum exponent of a single variable.
pub const MAX_EXP: u32 = 127;

const GUARD: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;

/// Exponent vector packed 8 bits per variable (variable `i` in byte `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        assert!(i < MAX_VARS, "too many variables");
        assert!(e <= MAX_EXP, "exponent overflow");
        Monomial((e as u128) << (8 * i))
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        exps.iter()
            .enumerate()
            .fold(Monomial::ONE, |m, (i, e)| m.mul(Monomial::var_pow(i, *e)))
    }

    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    pub fn with_exp(self, i: usize, e: u32) -> Self {
        assert!(e <= MAX_EXP, "exponent overflow");
        let mask = !(0xffu128 << (8 * i));
        Monomial((self.0 & mask) | ((e as u128) << (8 * i)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: Monomial) -> Monomial {
        let s = self.0 + o.0;
        assert!(s & GUARD == 0, "exponent overflow in monomial product");
        Monomial(s)
    }

    /// `self / o` if `o` divides `self`.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, o: Monomial) -> Option<Monomial> {
        let d = self.0.wrapping_sub(o.0);
        // a borrow shows up as a set guard bit
        if self.0 < o.0 || d & GUARD != 0 {
            return None;
        }
        Some(Monomial(d))
    }

    pub fn degree(self) -> u32 {
        (0..MAX_VARS).map(|i| self.exp(i)).sum()
    }

    pub fn degree_in(self, vars: Range<usize>) -> u32 {
        vars.map(|i| self.exp(i)).sum()
    }

    pub fn exps(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }
}

/// Sparse polynomial over [`TowerScalar`] in `nvars` variables.
///
/// Terms are sorted by monomial and carry no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, TowerScalar)>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        MultiPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, TowerScalar::one())
    }

    pub fn constant(nvars: usize, c: TowerScalar) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::ONE, c));
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::monomial(nvars, Monomial::var(i), TowerScalar::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: TowerScalar) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, TowerScalar)>,
    ) -> Self {
        let mut map: HashMap<Monomial, TowerScalar> = HashMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(v) => v.add_assign(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|a| a.0);
        MultiPoly {
            nvars,
            terms,
        }
    }

    /// Terms with pairwise distinct monomials and nonzero coefficients, in any order.
    pub(crate) fn from_distinct(nvars: usize, mut terms: Vec<(Monomial, TowerScalar)>) -> Self {
        terms.sort_by_key(|a| a.0);
        MultiPoly { nvars, terms }
    }

    /// The affine polynomial `Σ a_i v_i + c`.
    pub fn from_linear(form: &LinearForm) -> Self {
        let n = form.nvars();
        let mut terms: Vec<(Monomial, TowerScalar)> = form
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(i), c.clone()))
            .collect();
        if !form.constant().is_zero() {
            terms.push((Monomial::ONE, form.constant().clone()));
        }
        terms.sort_by_key(|a| a.0);
        MultiPoly { nvars: n, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, TowerScalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<TowerScalar> {
        match self.terms.as_slice() {
            [] => Some(TowerScalar::zero()),
            [(m, c)] if *m == Monomial::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    pub fn block_degree(&self, vars: Range<usize>) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree_in(vars.clone()))
            .max()
            .unwrap_or(0)
    }

    /// Whether any term involves a variable in `vars`.
    pub fn depends_on(&self, vars: Range<usize>) -> bool {
        self.terms
            .iter()
            .any(|(m, _)| m.degree_in(vars.clone()) > 0)
    }

    pub fn coeff(&self, m: Monomial) -> TowerScalar {
        match self.terms.binary_search_by(|t| t.0.cmp(&m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => TowerScalar::zero(),
        }
    }

    /// Same polynomial viewed in a larger variable space.
    pub fn extend(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        MultiPoly {
            nvars,
            terms: self.terms.clone(),
        }
    }

    /// Drops trailing variables, which must not occur.
    pub fn shrink(&self, nvars: usize) -> Self {
        assert!(
            !self.depends_on(nvars..self.nvars.max(nvars)),
            "dropped variables still occur"
        );
        MultiPoly {
            nvars,
            terms: self.terms.clone(),
        }
    }

    /// Renames variable `i` to `map[i]` in a space of `nvars` variables.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Self {
        MultiPoly::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut out = Monomial::ONE;
                for (i, &j) in map.iter().enumerate().take(self.nvars) {
                    let e = m.exp(i);
                    if e > 0 {
                        out = out.mul(Monomial::var_pow(j, e));
                    }
                }
                (out, c.clone())
            }),
        )
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        assert_eq!(self.nvars, o.nvars, "variable spaces differ");
        let mut terms = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    terms.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push((*mb, if negate { cb.neg() } else { cb.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { ca.sub(cb) } else { ca.add(cb) };
                    if !c.is_zero() {
                        terms.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(self.terms[i..].iter().cloned());
        terms.extend(
            o.terms[j..]
                .iter()
                .map(|(m, c)| (*m, if negate { c.neg() } else { c.clone() })),
        );
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &TowerScalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.mul(s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&TowerScalar::from_int(n))
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "variable spaces differ");
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let mut map: HashMap<Monomial, TowerScalar> =
            HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(*mb);
                let c = ca.mul(cb);
                match map.get_mut(&m) {
                    Some(v) => v.add_assign(&c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|a| a.0);
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let e = m.exp(i);
                (m.with_exp(i, e - 1), c.scale_int(e as i64))
            })
            .collect::<Vec<_>>();
        // lowering one exponent keeps distinct monomials distinct but may reorder them
        let mut out = MultiPoly {
            nvars: self.nvars,
            terms,
        };
        out.terms.sort_by_key(|a| a.0);
        out
    }

    /// Coefficients of `v_i^j` for `j = 0..=deg_i` as polynomials without `v_i`.
    pub fn split_var(&self, i: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(i) as usize;
        let mut parts: Vec<Vec<(Monomial, TowerScalar)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            parts[m.exp(i) as usize].push((m.with_exp(i, 0), c.clone()));
        }
        parts
            .into_iter()
            .map(|mut t| {
                t.sort_by_key(|a| a.0);
                MultiPoly {
                    nvars: self.nvars,
                    terms: t,
                }
            })
            .collect()
    }

    /// Splits by total degree in the variables `vars`; returns `(degree, part)` pairs in increasing degree.
    pub fn homogeneous_components(&self, vars: Range<usize>) -> Vec<(u32, MultiPoly)> {
        let mut by_deg: std::collections::BTreeMap<u32, Vec<(Monomial, TowerScalar)>> =
            Default::default();
        for (m, c) in &self.terms {
            by_deg
                .entry(m.degree_in(vars.clone()))
                .or_default()
                .push((*m, c.clone()));
        }
        if by_deg.is_empty() {
            return vec![(0, Self::zero(self.nvars))];
        }
        by_deg
            .into_iter()
            .map(|(d, terms)| {
                (
                    d,
                    MultiPoly {
                        nvars: self.nvars,
                        terms,
                    },
                )
            })
            .collect()
    }

    /// Substitutes `v_i ↦ images[i]` (affine forms over a space of `nvars` variables).
    pub fn substitute(&self, images: &[LinearForm], nvars: usize) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let polys: Vec<MultiPoly> = images
            .iter()
            .map(|f| {
                assert_eq!(f.nvars(), nvars, "image space mismatch");
                MultiPoly::from_linear(f)
            })
            .collect();
        let mut cache: Vec<Vec<MultiPoly>> = polys
            .iter()
            .map(|p| vec![Self::one(nvars), p.clone()])
            .collect();
        let mut power = |i: usize, e: usize| -> MultiPoly {
            while cache[i].len() <= e {
                let next = cache[i].last().expect("seeded").mul(&polys[i]);
                cache[i].push(next);
            }
            cache[i][e].clone()
        };
        let mut acc: HashMap<Monomial, TowerScalar> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Self::constant(nvars, c.clone());
            for i in 0..self.nvars {
                let e = m.exp(i) as usize;
                if e > 0 {
                    t = t.mul(&power(i, e));
                }
            }
            for (mm, cc) in t.terms {
                match acc.get_mut(&mm) {
                    Some(v) => *v = v.add(&cc),
                    None => {
                        acc.insert(mm, cc);
                    }
                }
            }
        }
        MultiPoly::from_terms(nvars, acc)
    }

    pub fn evaluate(&self, point: &[TowerScalar]) -> TowerScalar {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut powers: Vec<Vec<TowerScalar>> = point
            .iter()
            .map(|p| vec![TowerScalar::one(), p.clone()])
            .collect();
        let mut acc = TowerScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                if e > 0 {
                    while pw.len() <= e {
                        let next = pw.last().expect("seeded").mul(&point[i]);
                        pw.push(next);
                    }
                    t = t.mul(&pw[e]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Sum of absolute-ish sizes of coefficients, used for diagnostics.
    pub fn coefficient_count(&self) -> usize {
        self.terms.iter().map(|(_, c)| c.term_count()).sum()
    }

    /// Canonical text with the given variable names (descending degree).
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut order: Vec<&(Monomial, TowerScalar)> = self.terms.iter().collect();
        order.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(&a.0)));
        let mut out = String::new();
        for (idx, (m, c)) in order.into_iter().enumerate() {
            let mono = fmt_monomial(*m, names, self.nvars);
            let (neg, body) = coefficient_text(c);
            let text = match (mono.is_empty(), body.as_str()) {
                (true, _) => body.clone(),
                (false, "1") => mono,
                (false, _) => format!("{body}*{mono}"),
            };
            match (idx, neg) {
                (0, false) => out.push_str(&text),
                (0, true) => {
                    out.push('-');
                    out.push_str(&text);
                }
                (_, false) => {
                    let _ = write!(out, " + {text}");
                }
                (_, true) => {
                    let _ = write!(out, " - {text}");
                }
            }
        }
        out
    }
}

/// Splits a coefficient into a sign and its printed magnitude (parenthesized when compound).
pub(crate) fn coefficient_text(c: &TowerScalar) -> (bool, String) {
    let s = c.to_string();
    if c.term_count() == 1 {
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    } else {
        (false, format!("({s})"))
    }
}

fn fmt_monomial(m: Monomial, names: &[String], nvars: usize) -> String {
    let mut parts = Vec::new();
    for i in 0..nvars {
        let e = m.exp(i);
        if e == 0 {
            continue;
        }
        let name = names
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("v{}", i + 1));
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join("*")
}

impl std::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = super::default_names(self.nvars);
        write!(f, "{}", self.fmt_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn derivative_of_monomial() {
        let p = x(2, 0).pow(2).mul(&x(2, 1));
        let d = p.derivative(0);
        assert_eq!(d, x(2, 0).mul(&x(2, 1)).scale_int(2));
    }

    #[test]
    fn cancellation() {
        let p = x(1, 0).pow(2).sub(&x(1, 0).mul(&x(1, 0)));
        assert!(p.is_zero());
    }

    #[test]
    fn monomial_division() {
        let a = Monomial::from_exps(&[2, 1]);
        let b = Monomial::from_exps(&[1, 1]);
        assert_eq!(a.div(b), Some(Monomial::var(0)));
        assert_eq!(b.div(a), None);
        assert_eq!(
            Monomial::from_exps(&[0, 3]).div(Monomial::from_exps(&[1, 0])),
            None
        );
    }

    #[test]
    fn homogeneous_split() {
        let p = x(2, 0).pow(2).add(&x(2, 1));
        let parts = p.homogeneous_components(0..2);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (1, x(2, 1)));
        assert_eq!(parts[1], (2, x(2, 0).pow(2)));
        let c = MultiPoly::constant(2, TowerScalar::from_int(5));
        assert_eq!(c.homogeneous_components(0..2), vec![(0, c.clone())]);
    }

    #[test]
    fn substitution_and_evaluation() {
        // (x+y)^2 at x = t+1, y = -t
        let p = x(2, 0).add(&x(2, 1)).pow(2);
        let images = vec![
            LinearForm::new(vec![TowerScalar::one()], TowerScalar::one()),
            LinearForm::new(vec![TowerScalar::from_int(-1)], TowerScalar::zero()),
        ];
        assert!(p.substitute(&images, 1).is_one());
        let v = p.evaluate(&[TowerScalar::from_int(2), TowerScalar::from_int(3)]);
        assert_eq!(v, TowerScalar::from_int(25));
    }

    #[test]
    fn printing_is_descending() {
        let p = x(2, 0)
            .pow(2)
            .scale_int(3)
            .sub(&x(2, 1))
            .add(&MultiPoly::one(2));
        assert_eq!(p.fmt_with(&["x".into(), "y".into()]), "3*x^2 - y + 1");
    }
}
