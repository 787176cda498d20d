//! Trigonometric Wronskians `W[cos(k_j φ + θ_j)]` and the planar line
//! configurations at their roots.
//!
//! With `w = e^{iφ}` every column is `(a w^k + a⁻¹ w^{-k})/2`, `a = e^{iθ}`, and its
//! `r`-th derivative multiplies the two parts by `(±ik)^r`. Expanding the
//! determinant column by column gives a Vandermonde determinant per choice of
//! signs, so `W = Σ_e C_e w^e` with `e ≡ K = Σ k_j (mod 2)`. In `s = w² = e^{2iφ}`
//! the roots of `W` modulo `π` are the roots of `Q(s) = Σ C_e s^{(e+K)/2}`.

use astro_float::{BigFloat, RoundingMode};
use serde::Serialize;

use crate::numeric::{big_to_f64, pi, with_consts, HpComplex};
use crate::scalar::TowerScalar;

use super::upoly::UPoly;
use super::{triangular_root, OnedimError};

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD: usize = 64;
const MAX_ITER: usize = 500;

/// A phase `θ`, either exactly through `e^{iθ}` or as a complex angle.
#[derive(Clone, Debug)]
pub enum Phase {
    Unit(TowerScalar),
    Angle(HpComplex),
}

impl Phase {
    pub fn zero() -> Self {
        Phase::Unit(TowerScalar::one())
    }

    pub fn angle(re: f64, im: f64) -> Self {
        Phase::Angle(HpComplex::from_f64(re, im, 64))
    }

    /// `e^{iθ}`.
    fn unit(&self, prec: usize) -> HpComplex {
        match self {
            Phase::Unit(a) => a.embed_complex(prec),
            Phase::Angle(t) => {
                let t = t.with_prec(prec);
                let r = with_consts(|cc| t.im.neg().exp(prec, RM, cc));
                HpComplex::cis(&t.re, prec).scale(&r)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrigWronskianData {
    pub ks: Vec<u32>,
    /// `C_e` for `e = -K, -K+2, …, K`.
    pub laurent: Vec<HpComplex>,
    /// The same coefficients when every phase is exact.
    pub exact: Option<Vec<TowerScalar>>,
    /// `(e, A_e, B_e)` with `W = Σ_{e≥0} A_e cos(eφ) + B_e sin(eφ)`.
    pub cos_sin: Vec<(u32, HpComplex, HpComplex)>,
    /// Roots `φ_j` with `Re φ_j ∈ [0, π)` and their orders as roots of `W`.
    pub roots: Vec<(HpComplex, u32)>,
}

#[derive(Clone, Debug)]
pub struct PlanarLine {
    /// The line `x cos φ + y sin φ = 0`.
    pub angle: HpComplex,
    pub multiplicity: u32,
    pub normal: [HpComplex; 2],
}

#[derive(Clone, Debug)]
pub struct BerestLutsenko {
    pub precision: usize,
    pub wronskian: TrigWronskianData,
    pub lines: Vec<PlanarLine>,
    /// `(line, s, |residual|)` for the planar locus equations.
    pub residuals: Vec<(usize, u32, f64)>,
}

#[derive(Serialize)]
struct LineJson {
    angle: (f64, f64),
    multiplicity: u32,
}

#[derive(Serialize)]
struct ResidualJson {
    line: usize,
    s: u32,
    magnitude: f64,
}

impl BerestLutsenko {
    /// `10^(2 - d)` for `d` decimal digits of working precision.
    pub fn residual_bound(&self) -> f64 {
        let digits = (self.precision as f64 * std::f64::consts::LOG10_2).floor();
        10f64.powf(2.0 - digits)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.2).fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.max_residual() < self.residual_bound()
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "k": self.wronskian.ks,
            "precision": self.precision,
            "cos_sin": self.wronskian.cos_sin.iter().map(|(e, a, b)| {
                serde_json::json!({"e": e, "cos": a.to_c64(), "sin": b.to_c64()})
            }).collect::<Vec<_>>(),
            "lines": self.lines.iter().map(|l| LineJson {
                angle: l.angle.to_c64(),
                multiplicity: l.multiplicity,
            }).collect::<Vec<_>>(),
            "residuals": self.residuals.iter().map(|&(line, s, magnitude)| ResidualJson {
                line, s, magnitude,
            }).collect::<Vec<_>>(),
            "max_residual": self.max_residual(),
            "bound": self.residual_bound(),
            "pass": self.pass(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "Berest-Lutsenko k = {:?}, {} bits\n",
            self.wronskian.ks, self.precision
        );
        for (j, l) in self.lines.iter().enumerate() {
            let (re, im) = l.angle.to_c64();
            s.push_str(&format!(
                "line {j}: phi = {re:.20}{im:+.3e}i, m = {}\n",
                l.multiplicity
            ));
        }
        s.push_str(&format!(
            "max residual {:.3e} (bound {:.1e}): {}\n",
            self.max_residual(),
            self.residual_bound(),
            if self.pass() { "pass" } else { "fail" }
        ));
        s
    }
}

fn mag_exp(z: &HpComplex) -> i64 {
    let e = |x: &BigFloat| {
        if x.is_zero() {
            i64::MIN
        } else {
            x.exponent().map_or(i64::MIN, i64::from)
        }
    };
    e(&z.re).max(e(&z.im))
}

/// Signed sums `Σ ε_j k_j` with their Vandermonde factors `i^{M(M-1)/2} ∏_{j<l}(ε_l k_l - ε_j k_j) / 2^M`.
fn sign_terms(ks: &[u32]) -> Vec<(Vec<bool>, i64, TowerScalar)> {
    let m = ks.len();
    let ipow = TowerScalar::i().pow((m * (m.saturating_sub(1)) / 2) as u32);
    let scale = TowerScalar::from_frac(1, 1 << m);
    (0..1usize << m)
        .map(|mask| {
            let signs: Vec<bool> = (0..m).map(|j| mask >> j & 1 == 0).collect();
            let v = |j: usize| {
                if signs[j] {
                    ks[j] as i64
                } else {
                    -(ks[j] as i64)
                }
            };
            let mut vand = 1i64;
            for j in 0..m {
                for l in j + 1..m {
                    vand *= v(l) - v(j);
                }
            }
            let e = (0..m).map(v).sum();
            (signs, e, ipow.mul(&scale).scale_int(vand))
        })
        .collect()
}

fn horner(c: &[HpComplex], z: &HpComplex, prec: usize) -> (HpComplex, HpComplex) {
    let mut p = HpComplex::zero(prec);
    let mut d = HpComplex::zero(prec);
    for a in c.iter().rev() {
        d = d.mul(z).add(&p);
        p = p.mul(z).add(a);
    }
    (p, d)
}

fn derivative(c: &[HpComplex], prec: usize) -> Vec<HpComplex> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(d, a)| a.scale(&BigFloat::from_u64(d as u64, prec)))
        .collect()
}

/// Simultaneous Aberth–Ehrlich iteration; the flag reports convergence.
fn aberth(c: &[HpComplex], prec: usize) -> (Vec<HpComplex>, bool) {
    let n = c.len() - 1;
    if n == 0 {
        return (Vec::new(), true);
    }
    let lead = c[n].to_c64();
    let tail = c[0].to_c64();
    let radius = (tail.0.hypot(tail.1) / lead.0.hypot(lead.1)).powf(1.0 / n as f64);
    let radius = if radius.is_finite() && radius > 0.0 {
        radius
    } else {
        1.0
    };
    let mut z: Vec<HpComplex> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            HpComplex::from_f64(radius * t.cos(), radius * t.sin(), prec)
        })
        .collect();
    let one = HpComplex::from_i64(1, prec);
    let tol = -(prec as i64) + 8;
    for _ in 0..MAX_ITER {
        let mut worst = i64::MIN;
        for k in 0..n {
            let (p, d) = horner(c, &z[k], prec);
            if p.is_zero() {
                continue;
            }
            let ratio = p.div(&d);
            let mut sum = HpComplex::zero(prec);
            for j in 0..n {
                if j != k {
                    sum = sum.add(&z[k].sub(&z[j]).recip());
                }
            }
            let step = ratio.div(&one.sub(&ratio.mul(&sum)));
            let rel = mag_exp(&step) - mag_exp(&z[k]).max(0);
            worst = worst.max(rel);
            z[k] = z[k].sub(&step);
        }
        if worst < tol {
            return (z, true);
        }
    }
    (z, false)
}

/// Newton on `p^{(c-1)}`, where a root of multiplicity `c` is simple.
fn polish(c: &[HpComplex], mult: u32, z0: &HpComplex, prec: usize) -> HpComplex {
    let mut q = c.to_vec();
    for _ in 1..mult {
        q = derivative(&q, prec);
    }
    let mut z = z0.clone();
    for _ in 0..64 {
        let (p, d) = horner(&q, &z, prec);
        if p.is_zero() || d.is_zero() {
            break;
        }
        let step = p.div(&d);
        z = z.sub(&step);
        if mag_exp(&step) - mag_exp(&z).max(0) < -(prec as i64) + 4 {
            break;
        }
    }
    z
}

/// Roots of `Q` with multiplicities, exactly split into square-free factors
/// when the coefficients are exact.
fn roots_with_multiplicity(
    numeric: &[HpComplex],
    exact: Option<&UPoly>,
    prec: usize,
) -> Result<Vec<(HpComplex, u32)>, OnedimError> {
    if let Some(q) = exact {
        let mut out = Vec::new();
        for (f, e) in q.square_free() {
            let c: Vec<HpComplex> = f.coeffs().iter().map(|a| a.embed_complex(prec)).collect();
            let (roots, ok) = aberth(&c, prec);
            if !ok {
                return Err(OnedimError::NoConvergence(prec));
            }
            out.extend(roots.into_iter().map(|r| (r, e)));
        }
        return Ok(out);
    }
    let (roots, _) = aberth(numeric, prec);
    let near = -(prec as i64) / 4;
    let far = -(prec as i64) / 8;
    let mut clusters: Vec<Vec<HpComplex>> = Vec::new();
    for r in roots {
        match clusters
            .iter_mut()
            .find(|cl| cl.iter().any(|z| mag_exp(&z.sub(&r)) < near))
        {
            Some(cl) => cl.push(r),
            None => clusters.push(vec![r]),
        }
    }
    let mut out = Vec::new();
    for cl in &clusters {
        let mut centre = HpComplex::zero(prec);
        for z in cl {
            centre = centre.add(z);
        }
        let centre = centre.scale(&BigFloat::from_f64(1.0 / cl.len() as f64, prec));
        out.push((
            polish(numeric, cl.len() as u32, &centre, prec),
            cl.len() as u32,
        ));
    }
    for (i, a) in out.iter().enumerate() {
        for b in &out[i + 1..] {
            if mag_exp(&a.0.sub(&b.0)) < far {
                return Err(OnedimError::Clustering(prec));
            }
        }
    }
    Ok(out)
}

/// `φ = -i log(s)/2` with `Re φ ∈ [0, π)`.
fn angle_of(s: &HpComplex, prec: usize) -> HpComplex {
    let two = BigFloat::from_u64(2, prec);
    let mut re = s.arg().div(&two, prec, RM);
    if re.is_negative() {
        re = re.add(&pi(prec), prec, RM);
    }
    let im = s.ln_abs().neg().div(&two, prec, RM);
    HpComplex::from_parts(re, im, prec)
}

/// `e^{iφ}`.
fn unit_of(phi: &HpComplex, prec: usize) -> HpComplex {
    Phase::Angle(phi.clone()).unit(prec)
}

fn cos_sin_of(q: &HpComplex, prec: usize) -> (HpComplex, HpComplex) {
    let inv = q.recip();
    let half = BigFloat::from_f64(0.5, prec);
    let c = q.add(&inv).scale(&half);
    // (q - 1/q)/(2i) = -i (q - 1/q)/2
    let s = q.sub(&inv).scale(&half).mul(&HpComplex::i(prec).neg());
    (c, s)
}

/// Planar locus residuals: the `t^{2s-1}` Taylor coefficients of
/// `Σ_{j≠i} m_j(m_j+1)/(α_j, tα_i + β_i)²` with `β_i ⊥ α_i`, for `s = 1..m_i`.
pub fn planar_locus_residuals(
    lines: &[(HpComplex, u32)],
    prec: usize,
) -> Vec<(usize, u32, HpComplex)> {
    let units: Vec<HpComplex> = lines.iter().map(|(phi, _)| unit_of(phi, prec)).collect();
    let mut out = Vec::new();
    for (i, (_, mi)) in lines.iter().enumerate() {
        for s in 1..=*mi {
            let mut acc = HpComplex::zero(prec);
            for (j, (_, mj)) in lines.iter().enumerate() {
                if j == i {
                    continue;
                }
                let q = units[j].div(&units[i]);
                let (a, b) = cos_sin_of(&q, prec);
                let n = 2 * s - 1;
                let mut term = a.neg();
                for _ in 1..n {
                    term = term.mul(&a.neg());
                }
                let mut den = b.clone();
                for _ in 1..n + 2 {
                    den = den.mul(&b);
                }
                let w = (mj * (mj + 1) * 2 * s) as u64;
                acc = acc.add(&term.div(&den).scale(&BigFloat::from_u64(w, prec)));
            }
            out.push((i, s, acc));
        }
    }
    out
}

fn series_mul(a: &[HpComplex], b: &[HpComplex], prec: usize) -> Vec<HpComplex> {
    let n = a.len();
    (0..n)
        .map(|k| {
            (0..=k).fold(HpComplex::zero(prec), |acc, j| {
                acc.add(&a[j].mul(&b[k - j]))
            })
        })
        .collect()
}

fn series_recip(a: &[HpComplex], prec: usize) -> Vec<HpComplex> {
    let inv0 = a[0].recip();
    let mut out = vec![inv0.clone()];
    for k in 1..a.len() {
        let mut acc = HpComplex::zero(prec);
        for j in 1..=k {
            acc = acc.add(&a[j].mul(&out[k - j]));
        }
        out.push(acc.mul(&inv0).neg());
    }
    out
}

/// One-dimensional locus residuals on the circle:
/// `(d/dφ)^{2s-1} Σ_{j≠i} m_j(m_j+1)/sin²(φ - φ_j)` at `φ_i`, for `s = 1..m_i`.
pub fn trig_locus_residuals(
    lines: &[(HpComplex, u32)],
    prec: usize,
) -> Vec<(usize, u32, HpComplex)> {
    let units: Vec<HpComplex> = lines.iter().map(|(phi, _)| unit_of(phi, prec)).collect();
    let mut out = Vec::new();
    for (i, (_, mi)) in lines.iter().enumerate() {
        let order = 2 * *mi as usize;
        // cos t and sin t to the needed order
        let mut cos_t = Vec::with_capacity(order);
        let mut sin_t = Vec::with_capacity(order);
        let mut fact = BigFloat::from_u64(1, prec);
        for n in 0..order {
            if n > 0 {
                fact = fact.mul(&BigFloat::from_u64(n as u64, prec), prec, RM);
            }
            let inv = BigFloat::from_u64(1, prec).div(&fact, prec, RM);
            let sign = if (n / 2) % 2 == 0 { inv } else { inv.neg() };
            let (c, s) = if n % 2 == 0 {
                (
                    HpComplex::from_parts(sign, BigFloat::from_u64(0, prec), prec),
                    HpComplex::zero(prec),
                )
            } else {
                (
                    HpComplex::zero(prec),
                    HpComplex::from_parts(sign, BigFloat::from_u64(0, prec), prec),
                )
            };
            cos_t.push(c);
            sin_t.push(s);
        }
        let mut totals = vec![HpComplex::zero(prec); order];
        for (j, (_, mj)) in lines.iter().enumerate() {
            if j == i {
                continue;
            }
            let (c, s) = cos_sin_of(&units[i].div(&units[j]), prec);
            let sin_series: Vec<HpComplex> = (0..order)
                .map(|n| s.mul(&cos_t[n]).add(&c.mul(&sin_t[n])))
                .collect();
            let g = series_recip(&series_mul(&sin_series, &sin_series, prec), prec);
            let w = BigFloat::from_u64((mj * (mj + 1)) as u64, prec);
            for (t, gn) in totals.iter_mut().zip(&g) {
                *t = t.add(&gn.scale(&w));
            }
        }
        let mut fact = BigFloat::from_u64(1, prec);
        for (n, t) in totals.iter().enumerate().skip(1) {
            fact = fact.mul(&BigFloat::from_u64(n as u64, prec), prec, RM);
            if n % 2 == 1 {
                out.push((i, n as u32 / 2 + 1, t.scale(&fact)));
            }
        }
    }
    out
}

/// The Wronskian `W[cos(k_j φ + θ_j)]`, its roots modulo `π` and the planar
/// configuration they define, at `precision` bits.
pub fn berest_lutsenko(
    ks: &[u32],
    phases: &[Phase],
    precision: usize,
) -> Result<BerestLutsenko, OnedimError> {
    if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OnedimError::Wavenumbers);
    }
    if ks.len() != phases.len() {
        return Err(OnedimError::PhaseCount {
            ks: ks.len(),
            phases: phases.len(),
        });
    }
    let wp = precision + GUARD;
    let big_k: u32 = ks.iter().sum();
    let len = big_k as usize + 1;
    let terms = sign_terms(ks);
    let index = |e: i64| ((e + big_k as i64) / 2) as usize;

    let units: Vec<HpComplex> = phases.iter().map(|p| p.unit(wp)).collect();
    let inv_units: Vec<HpComplex> = units.iter().map(HpComplex::recip).collect();
    let mut laurent = vec![HpComplex::zero(wp); len];
    for (signs, e, v) in &terms {
        let mut t = v.embed_complex(wp);
        for (j, &plus) in signs.iter().enumerate() {
            t = t.mul(if plus { &units[j] } else { &inv_units[j] });
        }
        laurent[index(*e)] = laurent[index(*e)].add(&t);
    }

    let exact_units: Option<Vec<TowerScalar>> = phases
        .iter()
        .map(|p| match p {
            Phase::Unit(a) => Some(a.clone()),
            Phase::Angle(_) => None,
        })
        .collect();
    let exact = exact_units.map(|us| {
        let invs: Vec<TowerScalar> = us.iter().map(|a| a.inv().expect("nonzero phase")).collect();
        let mut c = vec![TowerScalar::zero(); len];
        for (signs, e, v) in &terms {
            let mut t = v.clone();
            for (j, &plus) in signs.iter().enumerate() {
                t = t.mul(if plus { &us[j] } else { &invs[j] });
            }
            c[index(*e)].add_assign(&t);
        }
        c
    });

    let mut cos_sin = Vec::new();
    let i_unit = HpComplex::i(wp);
    for e in (0..=big_k)
        .rev()
        .step_by(2)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
    {
        let plus = &laurent[index(e as i64)];
        if e == 0 {
            cos_sin.push((0, plus.with_prec(precision), HpComplex::zero(precision)));
            continue;
        }
        let minus = &laurent[index(-(e as i64))];
        let a = plus.add(minus);
        let b = i_unit.mul(&plus.sub(minus));
        cos_sin.push((e, a.with_prec(precision), b.with_prec(precision)));
    }

    let exact_q = exact.as_ref().map(|c| UPoly::from_coeffs(c.clone()));
    let s_roots = roots_with_multiplicity(&laurent, exact_q.as_ref(), wp)?;
    let mut roots: Vec<(HpComplex, u32)> =
        s_roots.iter().map(|(s, e)| (angle_of(s, wp), *e)).collect();
    roots.sort_by(|a, b| {
        big_to_f64(&a.0.re)
            .partial_cmp(&big_to_f64(&b.0.re))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut lines = Vec::new();
    for (phi, order) in &roots {
        let m = triangular_root(*order).ok_or_else(|| OnedimError::NonTriangular {
            root: phi.to_string(),
            order: *order,
        })?;
        let w = unit_of(phi, wp);
        let (c, s) = cos_sin_of(&w, wp);
        lines.push(PlanarLine {
            angle: phi.with_prec(precision),
            multiplicity: m,
            normal: [c.with_prec(precision), s.with_prec(precision)],
        });
    }
    let pairs: Vec<(HpComplex, u32)> = roots
        .iter()
        .zip(&lines)
        .map(|((phi, _), l)| (phi.clone(), l.multiplicity))
        .collect();
    let residuals = planar_locus_residuals(&pairs, wp)
        .into_iter()
        .map(|(i, s, r)| (i, s, big_to_f64(&r.abs())))
        .collect();

    Ok(BerestLutsenko {
        precision,
        wronskian: TrigWronskianData {
            ks: ks.to_vec(),
            laurent: laurent.iter().map(|c| c.with_prec(precision)).collect(),
            exact,
            cos_sin,
            roots: roots
                .into_iter()
                .map(|(phi, e)| (phi.with_prec(precision), e))
                .collect(),
        },
        lines,
        residuals,
    })
}
