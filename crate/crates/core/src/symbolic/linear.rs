use std::fmt::Write as _;

use crate::scalar::TowerScalar;

use super::poly::coefficient_text;

/// Affine form `Σ a_i v_i + c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: Vec<TowerScalar>,
    constant: TowerScalar,
}

impl LinearForm {
    pub fn new(coeffs: Vec<TowerScalar>, constant: TowerScalar) -> Self {
        LinearForm { coeffs, constant }
    }

    pub fn zero(nvars: usize) -> Self {
        LinearForm {
            coeffs: vec![TowerScalar::zero(); nvars],
            constant: TowerScalar::zero(),
        }
    }

    /// The form `v_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut f = Self::zero(nvars);
        f.coeffs[i] = TowerScalar::one();
        f
    }

    pub fn constant_form(nvars: usize, c: TowerScalar) -> Self {
        let mut f = Self::zero(nvars);
        f.constant = c;
        f
    }

    /// `(α, v_block) + c` with `α` placed at `offset..offset+α.len()`.
    pub fn from_block(nvars: usize, offset: usize, normal: &[TowerScalar], c: TowerScalar) -> Self {
        let mut f = Self::zero(nvars);
        for (i, a) in normal.iter().enumerate() {
            f.coeffs[offset + i] = a.clone();
        }
        f.constant = c;
        f
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[TowerScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &TowerScalar {
        &self.coeffs[i]
    }

    pub fn constant(&self) -> &TowerScalar {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn first_var(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn last_var(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Returns `(s, f)` with `self = s·f` and the first variable coefficient of `f` equal to 1.
    pub fn normalized(&self) -> Option<(TowerScalar, LinearForm)> {
        let p = self.first_var()?;
        let s = self.coeffs[p].clone();
        if s.is_one() {
            return Some((s, self.clone()));
        }
        let inv = s.inv().expect("nonzero leading coefficient");
        Some((s, self.scale(&inv)))
    }

    pub fn scale(&self, s: &TowerScalar) -> Self {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
            constant: self.constant.mul(s),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
            constant: self.constant.add(&o.constant),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&TowerScalar::from_int(-1)))
    }

    /// Bilinear pairing of the variable parts (no conjugation).
    pub fn dot(&self, o: &Self) -> TowerScalar {
        self.coeffs
            .iter()
            .zip(&o.coeffs)
            .fold(TowerScalar::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    pub fn evaluate(&self, point: &[TowerScalar]) -> TowerScalar {
        self.coeffs
            .iter()
            .zip(point)
            .fold(self.constant.clone(), |acc, (a, x)| acc.add(&a.mul(x)))
    }

    /// Composes with the affine map `v_i ↦ images[i]`.
    pub fn substitute(&self, images: &[LinearForm], nvars: usize) -> LinearForm {
        let mut out = LinearForm::constant_form(nvars, self.constant.clone());
        for (a, img) in self.coeffs.iter().zip(images) {
            if !a.is_zero() {
                out = out.add(&img.scale(a));
            }
        }
        out
    }

    /// Re-indexes variables: `v_i ↦ v_{map[i]}` in a space of `nvars`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Self {
        let mut f = Self::constant_form(nvars, self.constant.clone());
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                f.coeffs[map[i]] = f.coeffs[map[i]].add(a);
            }
        }
        f
    }

    /// Resizes the coefficient vector; dropped coefficients must be zero.
    pub fn extend(&self, nvars: usize) -> Self {
        debug_assert!(self.coeffs.iter().skip(nvars).all(|c| c.is_zero()));
        let mut f = self.clone();
        f.coeffs.resize(nvars, TowerScalar::zero());
        f
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        let mut first = true;
        let mut push = |neg: bool, text: &str, out: &mut String| {
            match (first, neg) {
                (true, false) => out.push_str(text),
                (true, true) => {
                    out.push('-');
                    out.push_str(text);
                }
                (false, false) => {
                    let _ = write!(out, " + {text}");
                }
                (false, true) => {
                    let _ = write!(out, " - {text}");
                }
            }
            first = false;
        };
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let name = names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("v{}", i + 1));
            let (neg, body) = coefficient_text(a);
            let text = if body == "1" {
                name
            } else {
                format!("{body}*{name}")
            };
            push(neg, &text, &mut out);
        }
        if !self.constant.is_zero() || out.is_empty() {
            let (neg, body) = coefficient_text(&self.constant);
            push(neg, &body, &mut out);
        }
        out
    }
}
