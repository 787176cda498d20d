//! Exact arithmetic in `K = Q(ζ_N)[√d₁, …, √d_r]`.
//!
//! The default base is `Q(ζ_4) = Q(i)`. A scalar is a finite sum
//! `Σ c · ζ^e · √n` with rational `c`, `e < φ(N)` and `n` a square-free
//! positive integer whose primes are not already absorbed by the base
//! (`√p ∈ Q(ζ_N)` for odd `p | N`, and `√2` when `8 | N`). Those basis
//! elements are linearly independent, so the sorted term list is canonical.

mod cyclo;
mod parse;
mod tower;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;
pub use parse::{parse_scalar, ScalarParseError};
pub use tower::{FieldTower, TowerError};

use crate::numeric::{big_from_rational, HpComplex};
use cyclo::{prime_factors, square_free_split, table};

/// Default cyclotomic order: the base field is `Q(i)`.
pub const GAUSSIAN: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Term {
    rad: u64,
    zeta: u32,
    coeff: Rational,
}

/// Exact element of a cyclotomic-by-multiquadratic field.
#[derive(Clone, Debug)]
pub struct TowerScalar {
    order: u32,
    terms: Vec<Term>,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl TowerScalar {
    pub fn zero() -> Self {
        TowerScalar {
            order: GAUSSIAN,
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn from_rational(q: Rational) -> Self {
        let terms = if q.is_zero() {
            Vec::new()
        } else {
            vec![Term {
                rad: 1,
                zeta: 0,
                coeff: q,
            }]
        };
        TowerScalar {
            order: GAUSSIAN,
            terms,
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::zeta_power(GAUSSIAN, 1)
    }

    /// `ζ_N^e` in the base of order `N` (`4 | N`).
    pub fn zeta_power(order: u32, e: i64) -> Self {
        assert!(order.is_multiple_of(4), "cyclotomic order must be a multiple of 4");
        let t = table(order);
        let e = e.rem_euclid(order as i64) as usize;
        let terms = t.powers[e]
            .iter()
            .map(|(z, c)| Term {
                rad: 1,
                zeta: *z,
                coeff: Rational::from_integer(BigInt::from(*c)),
            })
            .collect();
        TowerScalar { order, terms }
    }

    /// `√d` for any nonzero integer `d` (principal branch), in the base of the given order.
    pub fn sqrt_int(order: u32, d: i64) -> Self {
        assert!(d != 0, "sqrt of zero requested as a generator");
        let (square, free) = square_free_split(d.unsigned_abs());
        let mut out = Self::from_int(square as i64).with_order(order);
        if d < 0 {
            out = out.mul(&Self::zeta_power(order, order as i64 / 4));
        }
        let t = table(order);
        let mut rad = 1u64;
        for p in prime_factors(free) {
            if t.absorbs_prime(p) {
                out = out.mul(&sqrt_prime_in_base(order, p));
            } else {
                rad *= p;
            }
        }
        if rad > 1 {
            out = out.mul(&TowerScalar {
                order,
                terms: vec![Term {
                    rad,
                    zeta: 0,
                    coeff: Rational::one(),
                }],
            });
        }
        out
    }

    /// `√q` for a rational `q ≠ 0`: `√(p/q) = √(pq)/q`.
    pub fn sqrt_rational(order: u32, q: &Rational) -> Self {
        let n = q.numer() * q.denom();
        let n = n.to_i64().expect("radicand too large");
        Self::sqrt_int(order, n).scale(&Rational::new(BigInt::one(), q.denom().clone()))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].rad == 1
            && self.terms[0].zeta == 0
            && self.terms[0].coeff.is_one()
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] if t.rad == 1 && t.zeta == 0 => Some(t.coeff.clone()),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || self.rational_ref().is_some()
    }

    fn rational_ref(&self) -> Option<&Rational> {
        match self.terms.as_slice() {
            [t] if t.rad == 1 && t.zeta == 0 => Some(&t.coeff),
            _ => None,
        }
    }

    /// Number of stored basis terms (a cost measure).
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Re-express in the base of order `m` (`self.order | m`).
    pub fn lift(&self, m: u32) -> Self {
        if m == self.order {
            return self.clone();
        }
        assert!(
            m.is_multiple_of(self.order),
            "cannot lift order {} to {}",
            self.order,
            m
        );
        if self.terms.iter().all(|t| t.zeta == 0 && t.rad == 1) {
            return TowerScalar {
                order: m,
                terms: self.terms.clone(),
            };
        }
        let step = (m / self.order) as i64;
        let mut out = TowerScalar::zero().with_order(m);
        for t in &self.terms {
            let mut piece = Self::zeta_power(m, t.zeta as i64 * step).scale(&t.coeff);
            if t.rad > 1 {
                piece = piece.mul(&Self::sqrt_int(m, t.rad as i64));
            }
            out = out.add(&piece);
        }
        out
    }

    fn with_order(mut self, order: u32) -> Self {
        debug_assert!(self.terms.iter().all(|t| t.zeta == 0 && t.rad == 1));
        self.order = order;
        self
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.order.lcm(&b.order);
        (a.lift(m), b.lift(m))
    }

    fn common_order(&self, o: &Self) -> Option<u32> {
        if self.order == o.order {
            return Some(self.order);
        }
        // pure rationals are order-agnostic
        let pure = |s: &Self| s.terms.iter().all(|t| t.zeta == 0 && t.rad == 1);
        if pure(self) {
            Some(o.order)
        } else if pure(o) {
            Some(self.order)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = match self.common_order(o) {
            Some(ord) => ord,
            None => {
                let (a, b) = Self::aligned(self, o);
                return a.add(&b);
            }
        };
        let mut terms = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let a = &self.terms[i];
            let b = &o.terms[j];
            match (a.rad, a.zeta).cmp(&(b.rad, b.zeta)) {
                Ordering::Less => {
                    terms.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = radd(&a.coeff, &b.coeff);
                    if !c.is_zero() {
                        terms.push(Term {
                            rad: a.rad,
                            zeta: a.zeta,
                            coeff: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&o.terms[j..]);
        TowerScalar { order, terms }
    }

    /// In-place `self += o`.
    pub fn add_assign(&mut self, o: &Self) {
        if let ([a], [b]) = (self.terms.as_mut_slice(), o.terms.as_slice()) {
            if a.rad == b.rad
                && a.zeta == b.zeta
                && (self.order == o.order || a.zeta == 0 && a.rad == 1)
            {
                a.coeff = radd(&a.coeff, &b.coeff);
                if a.coeff.is_zero() {
                    self.terms.clear();
                }
                self.order = o.order;
                return;
            }
        }
        *self = self.add(o);
    }

    pub fn neg(&self) -> Self {
        TowerScalar {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    rad: t.rad,
                    zeta: t.zeta,
                    coeff: -&t.coeff,
                })
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return TowerScalar {
                order: self.order,
                terms: Vec::new(),
            };
        }
        TowerScalar {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    rad: t.rad,
                    zeta: t.zeta,
                    coeff: rmul(&t.coeff, q),
                })
                .collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return TowerScalar {
                order: self.order.max(o.order),
                terms: Vec::new(),
            };
        }
        if let Some(q) = self.rational_ref() {
            let mut r = o.scale(q);
            if r.terms.is_empty() {
                r.order = o.order;
            }
            return r;
        }
        if let Some(q) = o.rational_ref() {
            return self.scale(q);
        }
        let order = match self.common_order(o) {
            Some(ord) => ord,
            None => {
                let (a, b) = Self::aligned(self, o);
                return a.mul(&b);
            }
        };
        let mut t = None;
        let mut acc: Vec<Term> = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                let g = a.rad.gcd(&b.rad);
                let rad = (a.rad / g) * (b.rad / g);
                let mut base = rmul(&a.coeff, &b.coeff);
                if g > 1 {
                    base *= Rational::from_integer(BigInt::from(g));
                }
                let e = (a.zeta + b.zeta) as usize;
                if a.zeta == 0 || b.zeta == 0 {
                    acc.push(Term {
                        rad,
                        zeta: e as u32,
                        coeff: base,
                    });
                    continue;
                }
                let t = t.get_or_insert_with(|| table(order));
                if e < t.phi as usize {
                    acc.push(Term {
                        rad,
                        zeta: e as u32,
                        coeff: base,
                    });
                } else {
                    for (z, c) in &t.powers[e % order as usize] {
                        acc.push(Term {
                            rad,
                            zeta: *z,
                            coeff: &base * Rational::from_integer(BigInt::from(*c)),
                        });
                    }
                }
            }
        }
        TowerScalar {
            order,
            terms: collect_terms(acc),
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = TowerScalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }

    /// `σ_p`: flips the sign of every radical divisible by `p`.
    fn flip_prime(&self, p: u64) -> Self {
        TowerScalar {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    rad: t.rad,
                    zeta: t.zeta,
                    coeff: if t.rad % p == 0 {
                        -&t.coeff
                    } else {
                        t.coeff.clone()
                    },
                })
                .collect(),
        }
    }

    /// `ζ -> ζ^k` on a radical-free element.
    fn galois(&self, k: u32) -> Self {
        let t = table(self.order);
        let mut acc = Vec::new();
        for term in &self.terms {
            let e = (term.zeta as u64 * k as u64 % self.order as u64) as usize;
            for (z, c) in &t.powers[e] {
                acc.push(Term {
                    rad: term.rad,
                    zeta: *z,
                    coeff: &term.coeff * Rational::from_integer(BigInt::from(*c)),
                });
            }
        }
        TowerScalar {
            order: self.order,
            terms: collect_terms(acc),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(TowerScalar {
                order: self.order,
                terms: vec![Term {
                    rad: 1,
                    zeta: 0,
                    coeff: q.recip(),
                }],
            });
        }
        let mut cur = self.clone();
        let mut adj = TowerScalar::one();
        // strip radicals one prime at a time
        loop {
            let p = cur
                .terms
                .iter()
                .filter(|t| t.rad > 1)
                .flat_map(|t| prime_factors(t.rad))
                .min();
            let Some(p) = p else { break };
            let conj = cur.flip_prime(p);
            cur = cur.mul(&conj);
            adj = adj.mul(&conj);
        }
        if cur.as_rational().is_none() {
            let t = table(cur.order);
            let mut others = TowerScalar::one();
            for &k in t.units.iter().filter(|k| **k != 1) {
                others = others.mul(&cur.galois(k));
            }
            let norm = cur.mul(&others);
            adj = adj.mul(&others);
            cur = norm;
        }
        let q = cur
            .as_rational()
            .expect("norm of a field element must be rational");
        Some(adj.scale(&q.recip()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|inv| self.mul(&inv))
    }

    /// Numeric image with relative error below `2^(1-precision)`.
    pub fn embed_complex(&self, precision: usize) -> HpComplex {
        let precision = precision.max(53);
        let mut guard = 64;
        loop {
            let wp = precision + guard;
            let mut sum = HpComplex::zero(wp);
            let mut largest = 0f64;
            for t in &self.terms {
                let mut v = HpComplex::from_rational(&t.coeff, wp);
                if t.rad > 1 {
                    let r = astro_float::BigFloat::from_u64(t.rad, wp)
                        .sqrt(wp, astro_float::RoundingMode::ToEven);
                    v = v.scale(&r);
                }
                if t.zeta > 0 {
                    v = v.mul(&zeta_numeric(self.order, t.zeta, wp));
                }
                largest = largest.max(v.to_c64().0.abs().max(v.to_c64().1.abs()));
                sum = sum.add(&v);
            }
            let (re, im) = sum.to_c64();
            let mag = re.abs().max(im.abs());
            // redo with more guard bits when cancellation ate the margin
            if self.terms.len() <= 1
                || mag == 0.0 && guard >= 512
                || mag > 0.0 && (largest / mag).log2() < (guard as f64 - 8.0)
                || guard >= 4096
            {
                return sum.with_prec(precision);
            }
            guard *= 2;
        }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        self.embed_complex(64).to_c64()
    }

    fn cmp_same(&self, o: &Self) -> Ordering {
        self.terms.cmp(&o.terms)
    }
}

fn zeta_numeric(order: u32, e: u32, prec: usize) -> HpComplex {
    if order == GAUSSIAN && e == 1 {
        return HpComplex::i(prec);
    }
    let two_pi = crate::numeric::pi(prec).mul(
        &astro_float::BigFloat::from_u64(2 * e as u64, prec),
        prec,
        astro_float::RoundingMode::ToEven,
    );
    let theta = two_pi.div(
        &astro_float::BigFloat::from_u64(order as u64, prec),
        prec,
        astro_float::RoundingMode::ToEven,
    );
    HpComplex::cis(&theta, prec)
}

/// `√p` for a prime absorbed by `Q(ζ_order)`, via a Gauss sum.
fn sqrt_prime_in_base(order: u32, p: u64) -> TowerScalar {
    if p == 2 {
        let e = order as i64 / 8;
        return TowerScalar::zeta_power(order, e).add(&TowerScalar::zeta_power(order, -e));
    }
    let step = order as i64 / p as i64;
    let mut g = TowerScalar::zero().with_order(order);
    for a in 1..p {
        let s = cyclo::legendre(a, p);
        g = g.add(&TowerScalar::zeta_power(order, step * a as i64).scale_int(s));
    }
    if p % 4 == 1 {
        g
    } else {
        // g = i√p
        g.mul(&TowerScalar::zeta_power(order, -(order as i64) / 4))
    }
}

/// `a · b`, skipping the gcd work when both are integers.
fn rmul(a: &Rational, b: &Rational) -> Rational {
    if a.denom().is_one() && b.denom().is_one() {
        return Rational::new_raw(a.numer() * b.numer(), BigInt::one());
    }
    a * b
}

/// `a + b`, skipping the gcd work when both are integers.
fn radd(a: &Rational, b: &Rational) -> Rational {
    if a.denom().is_one() && b.denom().is_one() {
        return Rational::new_raw(a.numer() + b.numer(), BigInt::one());
    }
    a + b
}

fn collect_terms(mut acc: Vec<Term>) -> Vec<Term> {
    acc.sort_by_key(|a| (a.rad, a.zeta));
    let mut out: Vec<Term> = Vec::with_capacity(acc.len());
    for t in acc {
        if let Some(last) = out.last_mut() {
            if last.rad == t.rad && last.zeta == t.zeta {
                last.coeff = radd(&last.coeff, &t.coeff);
                continue;
            }
        }
        out.push(t);
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

impl PartialEq for TowerScalar {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for TowerScalar {}

impl PartialOrd for TowerScalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for TowerScalar {
    fn cmp(&self, o: &Self) -> Ordering {
        if self.common_order(o).is_some() {
            self.cmp_same(o)
        } else {
            let (a, b) = Self::aligned(self, o);
            a.cmp_same(&b)
        }
    }
}

impl std::hash::Hash for TowerScalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        // only the rational part is order-independent
        self.as_rational().map(|q| q.to_string()).hash(state);
    }
}

impl From<i64> for TowerScalar {
    fn from(n: i64) -> Self {
        TowerScalar::from_int(n)
    }
}

impl From<Rational> for TowerScalar {
    fn from(q: Rational) -> Self {
        TowerScalar::from_rational(q)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for TowerScalar {
    /// Canonical literal: `1/2 + 3/4*i - 2*r3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            if t.zeta > 0 {
                if self.order == GAUSSIAN {
                    factors.push("i".to_string());
                } else if t.zeta == 1 {
                    factors.push(format!("z{}", self.order));
                } else {
                    factors.push(format!("z{}^{}", self.order, t.zeta));
                }
            }
            if t.rad > 1 {
                factors.push(format!("r{}", t.rad));
            }
            let neg = t.coeff.is_negative();
            let mag = t.coeff.abs();
            let body = if factors.is_empty() {
                fmt_rational(&mag)
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", fmt_rational(&mag), factors.join("*"))
            };
            match (idx, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &TowerScalar {
    type Output = TowerScalar;
    fn add(self, o: &TowerScalar) -> TowerScalar {
        TowerScalar::add(self, o)
    }
}

impl std::ops::Sub for &TowerScalar {
    type Output = TowerScalar;
    fn sub(self, o: &TowerScalar) -> TowerScalar {
        TowerScalar::sub(self, o)
    }
}

impl std::ops::Mul for &TowerScalar {
    type Output = TowerScalar;
    fn mul(self, o: &TowerScalar) -> TowerScalar {
        TowerScalar::mul(self, o)
    }
}

impl std::ops::Neg for &TowerScalar {
    type Output = TowerScalar;
    fn neg(self) -> TowerScalar {
        TowerScalar::neg(self)
    }
}

/// Rational approximation bound used by numeric reports.
pub fn rational_to_f64(q: &Rational) -> f64 {
    crate::numeric::big_to_f64(&big_from_rational(q, 64))
}
