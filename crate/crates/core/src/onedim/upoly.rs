//! Dense univariate polynomials and reduced rational functions over the tower.

use std::fmt;

use crate::scalar::TowerScalar;
use crate::symbolic::{Monomial, MultiPoly};

/// Polynomial in one variable, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<TowerScalar>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(TowerScalar::one())
    }

    pub fn constant(c: TowerScalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable `z`.
    pub fn z() -> Self {
        Self::monomial(TowerScalar::one(), 1)
    }

    pub fn monomial(c: TowerScalar, d: usize) -> Self {
        let mut coeffs = vec![TowerScalar::zero(); d + 1];
        coeffs[d] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<TowerScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| TowerScalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[TowerScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> TowerScalar {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(TowerScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> TowerScalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(TowerScalar::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs((0..n).map(|d| self.coeff(d).add(&o.coeff(d))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        UPoly {
            coeffs: self.coeffs.iter().map(TowerScalar::neg).collect(),
        }
    }

    pub fn scale(&self, s: &TowerScalar) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![TowerScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j].add_assign(&a.mul(b));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c.scale_int(d as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at `0`.
    pub fn integral(&self) -> Self {
        let mut coeffs = vec![TowerScalar::zero()];
        for (d, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.mul(&TowerScalar::from_frac(1, d as i64 + 1)));
        }
        Self::from_coeffs(coeffs)
    }

    /// Quotient and remainder; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let inv = d.leading().inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![TowerScalar::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = r[top].mul(&inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let idx = top - dd + j;
                    r[idx] = r[idx].sub(&c.mul(dc));
                }
                q[top - dd] = c;
            }
            r.pop();
        }
        Some((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(inv) => self.scale(&inv),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn evaluate(&self, z: &TowerScalar) -> TowerScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(TowerScalar::zero(), |acc, c| acc.mul(z).add(c))
    }

    /// `p(z + s)`.
    pub fn shift(&self, s: &TowerScalar) -> Self {
        let step = Self::from_coeffs(vec![s.clone(), TowerScalar::one()]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(&step).add(&Self::constant(c.clone()))
        })
    }

    /// Order of vanishing at `z0`.
    pub fn root_order(&self, z0: &TowerScalar) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = Self::from_coeffs(vec![z0.neg(), TowerScalar::one()]);
        let mut p = self.clone();
        let mut k = 0;
        while let Some(q) = p.div_exact(&lin) {
            p = q;
            k += 1;
        }
        k
    }

    /// Square-free factors `(f, e)` with `self ∝ ∏ f^e`.
    pub fn square_free(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        // Yun's algorithm, characteristic zero
        let d = self.derivative();
        let mut a = self.gcd(&d);
        let mut b = self.div_exact(&a).expect("gcd divides");
        let mut c = d.div_exact(&a).expect("gcd divides");
        let mut e = 1;
        loop {
            let bd = b.derivative();
            let dd = c.sub(&bd);
            if dd.is_zero() {
                if b.degree().unwrap_or(0) > 0 {
                    out.push((b.monic(), e));
                }
                break;
            }
            a = b.gcd(&dd);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), e));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = dd.div_exact(&a).expect("gcd divides");
            e += 1;
        }
        out
    }

    pub fn to_multi(&self) -> MultiPoly {
        let terms: Vec<(Monomial, TowerScalar)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (Monomial::var_pow(0, d as u32), c.clone()))
            .collect();
        MultiPoly::from_terms(1, terms)
    }

    pub fn from_multi(p: &MultiPoly) -> Self {
        let mut coeffs = vec![TowerScalar::zero(); p.total_degree() as usize + 1];
        for (m, c) in p.terms() {
            coeffs[m.exp(0) as usize] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        self.to_multi().fmt_with(&[var.to_string()])
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("z"))
    }
}

/// `num / den` with coprime parts and monic `den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct URational {
    num: UPoly,
    den: UPoly,
}

impl URational {
    /// `None` when `den` is zero.
    pub fn new(num: UPoly, den: UPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let inv = den.leading().inv().expect("nonzero leading coefficient");
        Some(URational {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> Self {
        Self::from_poly(UPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(UPoly::one())
    }

    pub fn from_poly(p: UPoly) -> Self {
        URational {
            num: p,
            den: UPoly::one(),
        }
    }

    pub fn constant(c: TowerScalar) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn numerator(&self) -> &UPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        URational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, s: &TowerScalar) -> Self {
        Self::new(self.num.scale(s), self.den.clone()).expect("nonzero")
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    /// `None` when `o` is zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(num, self.den.mul(&self.den)).expect("nonzero")
    }

    /// `None` at a pole.
    pub fn evaluate(&self, z: &TowerScalar) -> Option<TowerScalar> {
        self.num.evaluate(z).div(&self.den.evaluate(z))
    }

    /// `f(z + s)`.
    pub fn shift(&self, s: &TowerScalar) -> Self {
        Self::new(self.num.shift(s), self.den.shift(s)).expect("nonzero")
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.degree() == Some(0) {
            return self.num.fmt_var(var);
        }
        let num = self.num.fmt_var(var);
        let num = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({num})")
        } else {
            num
        };
        format!("{num}/({})", self.den.fmt_var(var))
    }
}

impl fmt::Display for URational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("z"))
    }
}
