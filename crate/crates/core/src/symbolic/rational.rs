use std::fmt;

use crate::scalar::{Rational, TowerScalar};

use super::linear::LinearForm;
use super::poly::MultiPoly;
use super::SymbolicError;

/// `N / ∏ ℓ_j^{p_j}` with normalized, pairwise distinct linear forms `ℓ_j`.
///
/// The representation is reduced: no `ℓ_j` divides `N`. Zero has an empty denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    num: MultiPoly,
    den: Vec<(LinearForm, u32)>,
}

impl RationalFn {
    pub fn zero(nvars: usize) -> Self {
        RationalFn {
            num: MultiPoly::zero(nvars),
            den: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: TowerScalar) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(nvars, i))
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        RationalFn {
            num,
            den: Vec::new(),
        }
    }

    /// `ℓ^e` for any integer `e`.
    pub fn linear_power(form: &LinearForm, e: i64) -> Result<Self, SymbolicError> {
        let n = form.nvars();
        if e >= 0 {
            return Ok(Self::from_poly(MultiPoly::from_linear(form).pow(e as u32)));
        }
        Self::from_parts(MultiPoly::one(n), vec![(form.clone(), (-e) as u32)])
    }

    /// Builds `num / ∏ ℓ^p`, normalizing and reducing the denominator.
    pub fn from_parts(num: MultiPoly, den: Vec<(LinearForm, u32)>) -> Result<Self, SymbolicError> {
        let mut num = num;
        let mut forms: Vec<(LinearForm, u32)> = Vec::with_capacity(den.len());
        for (f, p) in den {
            if p == 0 {
                continue;
            }
            match f.normalized() {
                None => {
                    let c = f.constant();
                    let inv = c.inv().ok_or(SymbolicError::VanishingDenominator)?;
                    num = num.scale(&inv.pow(p));
                }
                Some((s, g)) => {
                    if !s.is_one() {
                        num = num.scale(&s.inv().expect("nonzero").pow(p));
                    }
                    forms.push((g, p));
                }
            }
        }
        Ok(Self::assemble(num, forms))
    }

    fn assemble(num: MultiPoly, mut forms: Vec<(LinearForm, u32)>) -> Self {
        if num.is_zero() {
            return Self::zero(num.nvars());
        }
        forms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut den: Vec<(LinearForm, u32)> = Vec::with_capacity(forms.len());
        for (f, p) in forms {
            match den.last_mut() {
                Some((g, q)) if *g == f => *q += p,
                _ => den.push((f, p)),
            }
        }
        let mut r = RationalFn { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for idx in 0..self.den.len() {
            while self.den[idx].1 > 0 {
                match divide_by_linear(&self.num, &self.den[idx].0) {
                    Some(q) => {
                        self.num = q;
                        self.den[idx].1 -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, p)| *p > 0);
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &[(LinearForm, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<TowerScalar> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Total degree of the numerator minus that of the denominator.
    pub fn degree(&self) -> i64 {
        self.num.total_degree() as i64 - self.den.iter().map(|(_, p)| *p as i64).sum::<i64>()
    }

    /// Power of `form` (normalized first) in the denominator.
    pub fn pole_order(&self, form: &LinearForm) -> u32 {
        let Some((_, g)) = form.normalized() else {
            return 0;
        };
        self.den
            .iter()
            .find(|(f, _)| *f == g)
            .map(|(_, p)| *p)
            .unwrap_or(0)
    }

    pub fn denominator_poly(&self) -> MultiPoly {
        self.den
            .iter()
            .fold(MultiPoly::one(self.nvars()), |acc, (f, p)| {
                acc.mul(&MultiPoly::from_linear(f).pow(*p))
            })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars(), o.nvars(), "variable spaces differ");
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::assemble(self.num.add(&o.num), self.den.clone());
        }
        let den = lcm(&self.den, &o.den);
        let a = self.num.mul(&cofactor(&den, &self.den, self.nvars()));
        let b = o.num.mul(&cofactor(&den, &o.den, self.nvars()));
        Self::assemble(a.add(&b), den)
    }

    pub fn neg(&self) -> Self {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &TowerScalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFn {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&TowerScalar::from_rational(q.clone()))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&TowerScalar::from_int(n))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars(), o.nvars(), "variable spaces differ");
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut den = self.den.clone();
        den.extend(o.den.iter().cloned());
        Self::assemble(self.num.mul(&o.num), den)
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        Self::assemble(self.num.mul(p), self.den.clone())
    }

    /// Multiplies by `ℓ^e` for any integer `e`.
    pub fn mul_linear_power(&self, form: &LinearForm, e: i64) -> Result<Self, SymbolicError> {
        Ok(self.mul(&Self::linear_power(form, e)?))
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.nvars());
        }
        RationalFn {
            num: self.num.pow(e),
            den: self.den.iter().map(|(f, p)| (f.clone(), p * e)).collect(),
        }
    }

    /// `∂/∂v_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let n = self.nvars();
        let involved: Vec<usize> = (0..self.den.len())
            .filter(|&j| !self.den[j].0.coeff(i).is_zero())
            .collect();
        if involved.is_empty() {
            return Self::assemble(self.num.derivative(i), self.den.clone());
        }
        let forms: Vec<MultiPoly> = involved
            .iter()
            .map(|&j| MultiPoly::from_linear(&self.den[j].0))
            .collect();
        let all = forms.iter().fold(MultiPoly::one(n), |a, f| a.mul(f));
        let mut num = self.num.derivative(i).mul(&all);
        for (pos, &j) in involved.iter().enumerate() {
            let (f, p) = &self.den[j];
            let others = forms
                .iter()
                .enumerate()
                .filter(|(q, _)| *q != pos)
                .fold(MultiPoly::one(n), |a, (_, g)| a.mul(g));
            let c = f.coeff(i).scale_int(*p as i64);
            num = num.sub(&self.num.mul(&others).scale(&c));
        }
        let mut den = self.den.clone();
        for &j in &involved {
            den[j].1 += 1;
        }
        Self::assemble(num, den)
    }

    /// Sum of second derivatives over the variables in `vars`.
    pub fn laplacian(&self, vars: std::ops::Range<usize>) -> Self {
        let mut acc = Self::zero(self.nvars());
        for i in vars {
            acc = acc.add(&self.derivative(i).derivative(i));
        }
        acc
    }

    /// Substitutes `v_i ↦ images[i]` (affine forms in a space of `nvars` variables).
    pub fn substitute(&self, images: &[LinearForm], nvars: usize) -> Result<Self, SymbolicError> {
        let num = self.num.substitute(images, nvars);
        let den = self
            .den
            .iter()
            .map(|(f, p)| (f.substitute(images, nvars), *p))
            .collect();
        Self::from_parts(num, den)
    }

    pub fn evaluate(&self, point: &[TowerScalar]) -> Result<TowerScalar, SymbolicError> {
        let mut d = TowerScalar::one();
        for (f, p) in &self.den {
            d = d.mul(&f.evaluate(point).pow(*p));
        }
        let inv = d.inv().ok_or(SymbolicError::VanishingDenominator)?;
        Ok(self.num.evaluate(point).mul(&inv))
    }

    /// Same function in a larger space (new variables unused).
    pub fn extend(&self, nvars: usize) -> Self {
        RationalFn {
            num: self.num.extend(nvars),
            den: self
                .den
                .iter()
                .map(|(f, p)| (f.extend(nvars), *p))
                .collect(),
        }
    }

    /// Renames `v_i ↦ v_{map[i]}` in a space of `nvars` variables.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Self {
        let num = self.num.remap(map, nvars);
        let den = self
            .den
            .iter()
            .map(|(f, p)| (f.remap(map, nvars), *p))
            .collect();
        Self::from_parts(num, den).expect("renaming keeps forms nonconstant")
    }

    /// Whether any numerator or denominator term involves a variable in `vars`.
    pub fn depends_on(&self, vars: std::ops::Range<usize>) -> bool {
        self.num.depends_on(vars.clone())
            || self
                .den
                .iter()
                .any(|(f, _)| vars.clone().any(|i| !f.coeff(i).is_zero()))
    }

    /// Splits into parts homogeneous in `vars`, assuming each denominator
    /// form is homogeneous in `vars` (linear forms with no constant in that block or
    /// not involving it). Returns `(degree, part)` with rational degrees as integers.
    pub fn homogeneous_components(&self, vars: std::ops::Range<usize>) -> Vec<(i64, RationalFn)> {
        let den_deg: i64 = self
            .den
            .iter()
            .filter(|(f, _)| vars.clone().any(|i| !f.coeff(i).is_zero()))
            .map(|(_, p)| *p as i64)
            .sum();
        self.num
            .homogeneous_components(vars)
            .into_iter()
            .map(|(d, p)| (d as i64 - den_deg, Self::assemble(p, self.den.clone())))
            .collect()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.den.is_empty() {
            return self.num.fmt_with(names);
        }
        let num = self.num.fmt_with(names);
        let num = if self.num.len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let factors: Vec<String> = self
            .den
            .iter()
            .map(|(f, p)| {
                let body = f.fmt_with(names);
                let single = f.constant().is_zero()
                    && f.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
                let body = if single { body } else { format!("({body})") };
                if *p == 1 {
                    body
                } else {
                    format!("{body}^{p}")
                }
            })
            .collect();
        if factors.len() == 1 {
            format!("{num}/{}", factors[0])
        } else {
            format!("{num}/({})", factors.join("*"))
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&super::default_names(self.nvars())))
    }
}

fn lcm(a: &[(LinearForm, u32)], b: &[(LinearForm, u32)]) -> Vec<(LinearForm, u32)> {
    let mut out: Vec<(LinearForm, u32)> = a.to_vec();
    for (f, p) in b {
        match out.iter_mut().find(|(g, _)| g == f) {
            Some((_, q)) => *q = (*q).max(*p),
            None => out.push((f.clone(), *p)),
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

fn cofactor(full: &[(LinearForm, u32)], part: &[(LinearForm, u32)], nvars: usize) -> MultiPoly {
    let mut acc = MultiPoly::one(nvars);
    for (f, p) in full {
        let have = part
            .iter()
            .find(|(g, _)| g == f)
            .map(|(_, q)| *q)
            .unwrap_or(0);
        if *p > have {
            acc = acc.mul(&MultiPoly::from_linear(f).pow(p - have));
        }
    }
    acc
}

/// Exact quotient `n / ℓ` for a normalized form, if `ℓ` divides `n`.
pub(crate) fn divide_by_linear(n: &MultiPoly, form: &LinearForm) -> Option<MultiPoly> {
    let nv = n.nvars();
    let q = form.first_var()?;
    // ℓ = v_q - a with a independent of v_q
    let mut a_form = form.scale(&TowerScalar::from_int(-1));
    let mut coeffs = a_form.coeffs().to_vec();
    coeffs[q] = TowerScalar::zero();
    a_form = LinearForm::new(coeffs, a_form.constant().clone());
    if !vanishes_somewhere_on(n, form) {
        return None;
    }
    let a = MultiPoly::from_linear(&a_form);
    let parts = n.split_var(q);
    let d = parts.len() - 1;
    if d == 0 {
        return None;
    }
    let mut b: Vec<MultiPoly> = vec![MultiPoly::zero(nv); d];
    b[d - 1] = parts[d].clone();
    for j in (1..d).rev() {
        b[j - 1] = parts[j].add(&a.mul(&b[j]));
    }
    let rem = parts[0].add(&a.mul(&b[0]));
    if !rem.is_zero() {
        return None;
    }
    let terms = b.into_iter().enumerate().flat_map(|(j, bj)| {
        let m = super::poly::Monomial::var_pow(q, j as u32);
        bj.terms()
            .iter()
            .map(|(t, c)| (t.mul(m), c.clone()))
            .collect::<Vec<_>>()
    });
    Some(MultiPoly::from_distinct(nv, terms.collect()))
}

/// Cheap necessary condition for divisibility: `n` vanishes at a fixed point of `ℓ = 0`.
fn vanishes_somewhere_on(n: &MultiPoly, form: &LinearForm) -> bool {
    let nv = n.nvars();
    let q = form.first_var().expect("nonconstant form");
    let mut point: Vec<TowerScalar> = (0..nv)
        .map(|i| TowerScalar::from_int(((i as i64 * 7919 + 104_729) % 211) - 97))
        .collect();
    point[q] = TowerScalar::zero();
    // v_q = -(rest of ℓ at the point)
    point[q] = form.evaluate(&point).neg();
    n.evaluate(&point).is_zero()
}
