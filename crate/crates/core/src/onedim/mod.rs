//! One-dimensional theory: Adler–Moser potentials, rational BA functions fixed by
//! conditions on their Laurent coefficients at `λ = 0`, and the numeric
//! Berest–Lutsenko construction of planar configurations.
//!
//! The χ chain is `χ₁ = z`, `χ_j = ∬χ_{j-1} + c_j` with the double integral taken
//! from `0`. Each level contributes one constant; a linear term would add a
//! multiple of `χ₁` and leave the Wronskian unchanged. At level 2 the Wronskian
//! is `(z³ - 3c₂)/3`, so the familiar `τ` parameter is `τ = -3c₂`.

mod trig;
mod upoly;


use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed};
use thiserror::Error;

use crate::config::{points_1d, ConfigError, Configuration};
use crate::locus::{verify_affine_locus, LocusError, LocusReport};
use crate::scalar::{Rational, TowerScalar};
use crate::symbolic::ZeroMode;

pub use trig::{
    berest_lutsenko, planar_locus_residuals, trig_locus_residuals, BerestLutsenko, Phase,
    PlanarLine, TrigWronskianData,
};
pub use upoly::{UPoly, URational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OnedimError {
    #[error("level must be at least 1")]
    Level,
    #[error("expected {expected} integration constants, got {got}")]
    Constants { expected: usize, got: usize },
    #[error("expected {expected} parameters xi, got {got}")]
    XiCount { expected: usize, got: usize },
    #[error("the conditions on a_1..a_m are degenerate")]
    Degenerate,
    #[error("psi fails the Schrödinger equation at order lambda^-{0}")]
    NotEigen(usize),
    #[error("root {root} has order {order}, which is not triangular")]
    NonTriangular { root: String, order: u32 },
    #[error("roots account for degree {found} of {degree}")]
    IncompleteRoots { found: u32, degree: usize },
    #[error("wavenumbers must be strictly increasing positive integers")]
    Wavenumbers,
    #[error("{ks} wavenumbers but {phases} phases")]
    PhaseCount { ks: usize, phases: usize },
    #[error("roots cannot be separated at {0} bits; increase the precision")]
    Clustering(usize),
    #[error("root finding did not converge at {0} bits")]
    NoConvergence(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Locus(#[from] LocusError),
}

/// `m(m+1)/2 = n`, if any.
pub fn triangular_root(n: u32) -> Option<u32> {
    let m = ((8 * n as u64 + 1).sqrt() as u32).saturating_sub(1) / 2;
    (m * (m + 1) / 2 == n && n > 0).then_some(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdlerMoserData {
    pub m: usize,
    /// `c₂..c_m`.
    pub constants: Vec<TowerScalar>,
    pub chi: Vec<UPoly>,
    pub wronskian: UPoly,
    pub potential: URational,
}

/// The level-`m` Adler–Moser potential `-2 (log W[χ₁..χ_m])''`.
pub fn adler_moser(m: usize, constants: &[TowerScalar]) -> Result<AdlerMoserData, OnedimError> {
    if m == 0 {
        return Err(OnedimError::Level);
    }
    if constants.len() != m - 1 {
        return Err(OnedimError::Constants {
            expected: m - 1,
            got: constants.len(),
        });
    }
    let mut chi = vec![UPoly::z()];
    for c in constants {
        let next = chi
            .last()
            .expect("nonempty")
            .integral()
            .integral()
            .add(&UPoly::constant(c.clone()));
        chi.push(next);
    }
    let wronskian = wronskian(&chi);
    let potential = log_second_derivative(&wronskian);
    Ok(AdlerMoserData {
        m,
        constants: constants.to_vec(),
        chi,
        wronskian,
        potential,
    })
}

/// Level 2 in the `τ` parametrization, `u = (6z⁴ - 12τz)/(z³ + τ)²`.
pub fn adler_moser_tau(tau: &TowerScalar) -> AdlerMoserData {
    let c2 = tau.mul(&TowerScalar::from_frac(-1, 3));
    adler_moser(2, &[c2]).expect("level 2 takes one constant")
}

/// `det [f_j^{(r)}]` by fraction-free elimination.
pub fn wronskian(fs: &[UPoly]) -> UPoly {
    let n = fs.len();
    let mut a: Vec<Vec<UPoly>> = Vec::with_capacity(n);
    let mut row: Vec<UPoly> = fs.to_vec();
    for _ in 0..n {
        let next = row.iter().map(UPoly::derivative).collect();
        a.push(row);
        row = next;
    }
    let mut sign = false;
    let mut prev = UPoly::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return UPoly::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// `-2 (log W)'' = 2 (W'² - W W'') / W²`.
pub fn log_second_derivative(w: &UPoly) -> URational {
    let d1 = w.derivative();
    let d2 = d1.derivative();
    let num = d1
        .mul(&d1)
        .sub(&w.mul(&d2))
        .scale(&TowerScalar::from_int(2));
    URational::new(num, w.mul(w)).expect("nonzero Wronskian")
}

impl AdlerMoserData {
    /// Exact roots of `W` when it has the shape `z^a (c z^d + c')` with a
    /// rational `d`-th root available.
    pub fn exact_roots(&self) -> Option<Vec<TowerScalar>> {
        binomial_roots(&self.wronskian)
    }

    /// Pole multiplicities `m_j` at the given roots of `W`, where the root order
    /// is `m_j(m_j+1)/2`.
    pub fn poles(&self, roots: &[TowerScalar]) -> Result<Vec<(TowerScalar, u32)>, OnedimError> {
        let mut found = 0;
        let mut out = Vec::new();
        for r in roots {
            let order = self.wronskian.root_order(r);
            let m = triangular_root(order).ok_or_else(|| OnedimError::NonTriangular {
                root: r.to_string(),
                order,
            })?;
            found += order;
            out.push((r.clone(), m));
        }
        let degree = self.wronskian.degree().unwrap_or(0);
        if found as usize != degree {
            return Err(OnedimError::IncompleteRoots { found, degree });
        }
        Ok(out)
    }

    pub fn pole_configuration(&self, roots: &[TowerScalar]) -> Result<Configuration, OnedimError> {
        Ok(points_1d(&self.poles(roots)?)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("Adler-Moser level {}\n", self.m);
        for (j, c) in self.constants.iter().enumerate() {
            s.push_str(&format!("c{} = {c}\n", j + 2));
        }
        for (j, chi) in self.chi.iter().enumerate() {
            s.push_str(&format!("chi{} = {chi}\n", j + 1));
        }
        s.push_str(&format!("W = {}\n", self.wronskian));
        s.push_str(&format!("u = {}\n", self.potential));
        s
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "level": self.m,
            "constants": self.constants.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "chi": self.chi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "wronskian": self.wronskian.to_string(),
            "potential": self.potential.to_string(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}

fn rational_nth_root(q: &Rational, d: u32) -> Option<Rational> {
    let root = |n: &BigInt| {
        let r = n.nth_root(d);
        (num_traits::pow(r.clone(), d as usize) == *n).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

fn binomial_roots(w: &UPoly) -> Option<Vec<TowerScalar>> {
    let nonzero: Vec<usize> = (0..w.coeffs().len())
        .filter(|&d| !w.coeff(d).is_zero())
        .collect();
    let a = *nonzero.first()?;
    let mut roots = Vec::new();
    if a > 0 {
        roots.push(TowerScalar::zero());
    }
    match nonzero[1..] {
        [] => {}
        [top] => {
            let d = (top - a) as u32;
            let c = w.coeff(a).neg().div(&w.coeff(top))?.as_rational()?;
            let r = rational_nth_root(&c.abs(), d)?;
            let order = 4u32.lcm(&(2 * d));
            // z^d = ±r^d
            let (step, offset) = if c.is_negative() {
                (order / d, order / (2 * d))
            } else {
                (order / d, 0)
            };
            for j in 0..d {
                let z = TowerScalar::zeta_power(order, (offset + j * step) as i64);
                roots.push(z.mul(&TowerScalar::from_rational(r.clone())));
            }
        }
        _ => return None,
    }
    Some(roots)
}

#[derive(Clone, Debug, PartialEq)]
pub struct XiData {
    pub m: usize,
    pub xi: Vec<TowerScalar>,
    /// `a₁..a_m`.
    pub a: Vec<URational>,
    pub potential: URational,
}

/// The Laurent coefficient `ψ_s` of `(Σ_{i≤m} a_i λ^{-i}) e^{λz}` as the
/// coefficients of `a_0..a_m`.
fn laurent_row(m: usize, s: i64) -> Vec<UPoly> {
    (0..=m)
        .map(|i| {
            let e = s + i as i64;
            if e < 0 {
                UPoly::zero()
            } else {
                let fact: BigInt = (1..=e).map(BigInt::from).product();
                let c = Rational::new(BigInt::one(), fact);
                UPoly::monomial(TowerScalar::from_rational(c), e as usize)
            }
        })
        .collect()
}

/// The BA function `ψ = (1 + Σ a_i λ^{-i}) e^{λz}` determined by the conditions
/// `ψ_{m-1-2t} + Σ_{s=1}^{m-t} ξ_s ψ_{m-2s-2t} = 0`, `t = 0..m-1`, with its
/// potential `u = 2a₁'`.
pub fn ba_from_xi(m: usize, xi: &[TowerScalar]) -> Result<XiData, OnedimError> {
    if m == 0 {
        return Err(OnedimError::Level);
    }
    if xi.len() != m {
        return Err(OnedimError::XiCount {
            expected: m,
            got: xi.len(),
        });
    }
    let mi = m as i64;
    let mut rows: Vec<Vec<URational>> = Vec::with_capacity(m);
    for t in 0..mi {
        let l = mi - 1 - 2 * t;
        let mut row = laurent_row(m, l);
        for s in 1..=(mi - t) {
            let extra = laurent_row(m, l + 1 - 2 * s);
            for (r, e) in row.iter_mut().zip(extra) {
                *r = r.add(&e.scale(&xi[s as usize - 1]));
            }
        }
        // a_1..a_m | -a_0 column
        let mut eq: Vec<URational> = row[1..].iter().cloned().map(URational::from_poly).collect();
        eq.push(URational::from_poly(row[0].neg()));
        rows.push(eq);
    }
    let a = solve(rows, m).ok_or(OnedimError::Degenerate)?;
    let potential = a[0].derivative().scale(&TowerScalar::from_int(2));
    let data = XiData {
        m,
        xi: xi.to_vec(),
        a,
        potential,
    };
    if let Some(order) = data.schrodinger_defect() {
        return Err(OnedimError::NotEigen(order));
    }
    Ok(data)
}

/// Gauss–Jordan on an augmented `m × (m+1)` system.
fn solve(mut rows: Vec<Vec<URational>>, m: usize) -> Option<Vec<URational>> {
    for k in 0..m {
        let p = (k..m).find(|&r| !rows[r][k].is_zero())?;
        rows.swap(p, k);
        let pivot = rows[k][k].clone();
        let head: Vec<URational> = rows[k]
            .iter()
            .map(|v| v.div(&pivot).expect("nonzero"))
            .collect();
        rows[k] = head.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (v, h) in row.iter_mut().zip(&head) {
                *v = v.sub(&f.mul(h));
            }
        }
    }
    Some(rows.into_iter().map(|r| r[m].clone()).collect())
}

impl XiData {
    /// First order `i` at which `-a_i'' - 2a_{i+1}' + u a_i` fails to vanish.
    ///
    /// With `ψ = P e^{λz}`, `(-∂² + u + λ²)ψ = (-P'' - 2λP' + uP) e^{λz}` and the
    /// coefficient of `λ^{-i}` is the expression above (`a_0 = 1`, `a_{m+1} = 0`).
    pub fn schrodinger_defect(&self) -> Option<usize> {
        let coeff = |i: usize| match i {
            0 => URational::one(),
            i if i <= self.m => self.a[i - 1].clone(),
            _ => URational::zero(),
        };
        (0..=self.m).find(|&i| {
            let ai = coeff(i);
            let r = ai
                .derivative()
                .derivative()
                .neg()
                .sub(&coeff(i + 1).derivative().scale(&TowerScalar::from_int(2)))
                .add(&self.potential.mul(&ai));
            !r.is_zero()
        })
    }

    /// `1 + a₁/λ + … + a_m/λ^m`.
    pub fn psi_text(&self) -> String {
        let mut s = String::from("(1");
        for (i, a) in self.a.iter().enumerate() {
            let pow = if i == 0 {
                "lambda".to_string()
            } else {
                format!("lambda^{}", i + 1)
            };
            s.push_str(&format!(" + ({a})/{pow}"));
        }
        s.push_str(")*exp(lambda*z)");
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("BA function, m = {}\n", self.m);
        for (j, x) in self.xi.iter().enumerate() {
            s.push_str(&format!("xi{} = {x}\n", j + 1));
        }
        for (j, a) in self.a.iter().enumerate() {
            s.push_str(&format!("a{} = {a}\n", j + 1));
        }
        s.push_str(&format!(
            "u = {}\npsi = {}\n",
            self.potential,
            self.psi_text()
        ));
        s
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "m": self.m,
            "xi": self.xi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "a": self.a.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "potential": self.potential.to_string(),
            "psi": self.psi_text(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}

/// The affine locus equations for points `z_j` with multiplicities `m_j` on the line.
pub fn verify_1d_locus(
    points: &[(TowerScalar, u32)],
    mode: ZeroMode,
    seed: u64,
) -> Result<LocusReport, OnedimError> {
    let c = points_1d(points)?;
    Ok(verify_affine_locus(&c, mode, seed)?)
}
