//! Hadamard coefficients of `□ + u` from Baker–Akhiezer functions.
//!
//! Writing `ψ(ξ, x) = (U_0 + U_1 + … + U_M) e^{(ξ,x)}` with `U_ν` homogeneous of
//! degree `-ν` in `ξ` gives the Hadamard coefficients of the wave operator with
//! potential `u`. They satisfy the chain
//!
//! `Σ (x_i - ξ_i) ∂U_ν/∂x_i + ν U_ν = -½ L[U_{ν-1}]`,  `U_0 = 1`,
//!
//! and `U_{M+1} = 0` makes the equation huygensian in odd dimension `N ≥ 2M + 3`.

use serde::Serialize;
use thiserror::Error;

use crate::baker::{berest_psi, potential_from_config, BAFunction, BakerError};
use crate::config::{isotropic_projectivisation, ConfigError, Configuration};
use crate::scalar::TowerScalar;
use crate::symbolic::{sum_all, x_xi_names, LinearForm, MultiPoly, RationalFn, SymbolicError};

#[derive(Debug, Clone, Error)]
pub enum HuygensError {
    #[error("configuration is not linear")]
    NotLinear,
    #[error(
        "prefactor component of degree {degree} in xi is not homogeneous of the same degree in x"
    )]
    Inhomogeneous { degree: i64 },
    #[error("prefactor has a component of degree {0} in xi outside 0..=-M")]
    DegreeOutOfRange(i64),
    #[error("U_0 = {0}, expected 1")]
    LeadingCoefficient(String),
    #[error("restricted coefficient U_{0} depends on the projective coordinates")]
    ProjectiveDependence(usize),
    #[error("Hadamard row {0} fails for the restricted chain")]
    HadamardFailed(usize),
    #[error(transparent)]
    Baker(#[from] BakerError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// `U_0, …, U_M` over `(x_1..x_n, ξ_1..ξ_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HadamardChain {
    pub n: usize,
    /// `u(x)` over the `n` variables `x`.
    pub potential: RationalFn,
    pub coefficients: Vec<RationalFn>,
    /// Whether the potential is homogeneous of degree `-2` (linear configuration).
    pub homogeneous: bool,
}

impl HadamardChain {
    /// `M`, the index of the last coefficient.
    pub fn m(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient_texts(&self) -> Vec<String> {
        let names = x_xi_names(self.n);
        self.coefficients
            .iter()
            .map(|c| c.fmt_with(&names))
            .collect()
    }

    /// `L[f] = -Δ_x f + u f` on the `(x, ξ)` space.
    fn schrodinger(&self, f: &RationalFn) -> RationalFn {
        let u = self.potential.extend(2 * self.n);
        f.laplacian(0..self.n).neg().add(&u.mul(f))
    }

    fn coefficient(&self, nu: usize) -> RationalFn {
        self.coefficients
            .get(nu)
            .cloned()
            .unwrap_or_else(|| RationalFn::zero(2 * self.n))
    }
}

/// Splits the prefactor of a linear-configuration `ψ` into its `ξ`-homogeneous parts.
pub fn hadamard_from_psi(psi: &BAFunction) -> Result<HadamardChain, HuygensError> {
    let c = &psi.config;
    if !c.is_linear() {
        return Err(HuygensError::NotLinear);
    }
    let n = c.dimension();
    let m = psi.m_total as usize;
    let mut coefficients = vec![RationalFn::zero(2 * n); m + 1];
    for (deg, part) in psi.prefactor.homogeneous_components(n..2 * n) {
        if part.is_zero() {
            continue;
        }
        if deg > 0 || -deg > m as i64 {
            return Err(HuygensError::DegreeOutOfRange(deg));
        }
        let x_parts = part.homogeneous_components(0..n);
        if x_parts.len() != 1 || x_parts[0].0 != deg {
            return Err(HuygensError::Inhomogeneous { degree: deg });
        }
        coefficients[(-deg) as usize] = part;
    }
    if coefficients[0] != RationalFn::one(2 * n) {
        return Err(HuygensError::LeadingCoefficient(
            coefficients[0].fmt_with(&x_xi_names(n)),
        ));
    }
    Ok(HadamardChain {
        n,
        potential: potential_from_config(c).u,
        coefficients,
        homogeneous: true,
    })
}

/// One identity of the chain at index `ν`.
#[derive(Clone, Debug, Serialize)]
pub struct HadamardRow {
    pub nu: usize,
    /// `transport`, `euler`, `hadamard` or `symmetry`.
    pub identity: &'static str,
    pub residual: String,
}

impl HadamardRow {
    pub fn holds(&self) -> bool {
        self.residual == "0"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HadamardReport {
    pub pass: bool,
    pub rows: Vec<HadamardRow>,
}

impl HadamardReport {
    /// All rows at `ν = M + 1` hold.
    pub fn terminates(&self, m: usize) -> bool {
        self.rows
            .iter()
            .filter(|r| r.nu == m + 1)
            .all(HadamardRow::holds)
    }
}

/// Checks the chain for `ν = 1..=M+1` with `U_{M+1} = 0`.
///
/// Every chain is checked against the Hadamard recursion. Homogeneous chains are
/// also checked against the transport identity `-2(ξ,∇_x)U_ν + L[U_{ν-1}] = 0`, the
/// Euler identity `(x,∇_x)U_ν + νU_ν = 0` that turns one into the other, and the
/// symmetry `U_ν(x,ξ) = U_ν(ξ,x)`.
pub fn verify_hadamard_chain(chain: &HadamardChain) -> HadamardReport {
    let n = chain.n;
    let nv = 2 * n;
    let names = x_xi_names(n);
    let var = |i: usize| MultiPoly::var(nv, i);
    let mut rows = Vec::new();
    let mut push = |nu: usize, identity: &'static str, r: RationalFn| {
        rows.push(HadamardRow {
            nu,
            identity,
            residual: r.fmt_with(&names),
        });
    };
    push(
        0,
        "hadamard",
        chain.coefficient(0).sub(&RationalFn::one(nv)),
    );
    for nu in 1..=chain.m() + 1 {
        let u_nu = chain.coefficient(nu);
        let l_prev = chain.schrodinger(&chain.coefficient(nu - 1));
        let grad: Vec<RationalFn> = (0..n).map(|i| u_nu.derivative(i)).collect();
        let mut had: Vec<RationalFn> = grad
            .iter()
            .enumerate()
            .map(|(i, g)| g.mul_poly(&var(i).sub(&var(n + i))))
            .collect();
        had.push(u_nu.scale_int(nu as i64));
        had.push(l_prev.scale(&TowerScalar::from_frac(1, 2)));
        push(nu, "hadamard", sum_all(&had, nv));
        if chain.homogeneous {
            let mut transport: Vec<RationalFn> = grad
                .iter()
                .enumerate()
                .map(|(i, g)| g.mul_poly(&var(n + i)).scale_int(-2))
                .collect();
            transport.push(l_prev);
            push(nu, "transport", sum_all(&transport, nv));
            let mut euler: Vec<RationalFn> = grad
                .iter()
                .enumerate()
                .map(|(i, g)| g.mul_poly(&var(i)))
                .collect();
            euler.push(u_nu.scale_int(nu as i64));
            push(nu, "euler", sum_all(&euler, nv));
        }
    }
    if chain.homogeneous {
        let swap: Vec<usize> = (0..nv).map(|i| if i < n { i + n } else { i - n }).collect();
        for (nu, u_nu) in chain.coefficients.iter().enumerate() {
            push(nu, "symmetry", u_nu.sub(&u_nu.remap(&swap, nv)));
        }
    }
    HadamardReport {
        pass: rows.iter().all(HadamardRow::holds),
        rows,
    }
}

/// Whether every `U_ν` is finite at `x = ξ = ξ₀` approached along `x = ξ₀ + t v`.
pub fn regular_at_diagonal(
    chain: &HadamardChain,
    xi0: &[TowerScalar],
    v: &[TowerScalar],
) -> Result<bool, HuygensError> {
    let n = chain.n;
    assert!(
        xi0.len() == n && v.len() == n,
        "point and direction need {n} coordinates"
    );
    let mut images = Vec::with_capacity(2 * n);
    for i in 0..n {
        images.push(LinearForm::new(vec![v[i].clone()], xi0[i].clone()));
    }
    for p in xi0 {
        images.push(LinearForm::constant_form(1, p.clone()));
    }
    for u_nu in &chain.coefficients {
        let line = u_nu.substitute(&images, 1)?;
        if line
            .denominator()
            .iter()
            .any(|(f, _)| f.constant().is_zero())
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Chain, termination and the smallest odd dimension the criterion allows.
#[derive(Clone, Debug)]
pub struct HuygensCertificate {
    pub chain: HadamardChain,
    pub report: HadamardReport,
    /// `2M + 3`.
    pub minimal_n: usize,
    /// `U_{M+1} = 0`.
    pub terminates: bool,
}

#[derive(Serialize)]
struct CertificateDoc<'a> {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "minimal_N")]
    minimal_n: usize,
    terminates: bool,
    chain_verified: bool,
    coefficients: Vec<String>,
    rows: &'a [HadamardRow],
}

impl HuygensCertificate {
    pub fn to_json(&self) -> String {
        let doc = CertificateDoc {
            m: self.chain.m(),
            minimal_n: self.minimal_n,
            terminates: self.terminates,
            chain_verified: self.report.pass,
            coefficients: self.chain.coefficient_texts(),
            rows: &self.report.rows,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "M = {}\nminimal N = {}\nterminates: {}\nchain verified: {}\n",
            self.chain.m(),
            self.minimal_n,
            self.terminates,
            self.report.pass
        );
        for (nu, t) in self.chain.coefficient_texts().iter().enumerate() {
            out.push_str(&format!("U{nu} = {t}\n"));
        }
        for r in self.report.rows.iter().filter(|r| !r.holds()) {
            out.push_str(&format!(
                "FAIL {} row {}: {}\n",
                r.identity, r.nu, r.residual
            ));
        }
        out
    }
}

/// Builds and checks the Hadamard chain of a locus configuration.
pub fn huygens_certificate(c: &Configuration) -> Result<HuygensCertificate, HuygensError> {
    let chain = if c.is_linear() {
        hadamard_from_psi(&berest_psi(c)?)?
    } else {
        affine_hadamard_via_projectivisation(c)?
    };
    let report = verify_hadamard_chain(&chain);
    let m = chain.m();
    Ok(HuygensCertificate {
        terminates: report.terminates(m),
        minimal_n: 2 * m + 3,
        chain,
        report,
    })
}

/// Hadamard chain of an affine configuration from the linear chain of its isotropic
/// projectivisation in `C^{n+2}`, restricted to `x_{n+1} + i x_{n+2} = ξ_{n+1} + i ξ_{n+2} = 1`.
pub fn affine_hadamard_via_projectivisation(
    c: &Configuration,
) -> Result<HadamardChain, HuygensError> {
    let n = c.dimension();
    let lifted = isotropic_projectivisation(c);
    let tilde = hadamard_from_psi(&berest_psi(&lifted)?)?;
    // target space: x (0..n), ξ (n..2n), x_{n+1} (2n), ξ_{n+1} (2n+1)
    let nt = 2 * n + 2;
    let i = TowerScalar::i();
    let var = |k: usize| LinearForm::var(nt, k);
    // x_{n+2} = i (x_{n+1} - 1)
    let partner = |k: usize| {
        let mut coeffs = vec![TowerScalar::zero(); nt];
        coeffs[k] = i.clone();
        LinearForm::new(coeffs, i.neg())
    };
    let mut images: Vec<LinearForm> = (0..n).map(var).collect();
    images.push(var(2 * n));
    images.push(partner(2 * n));
    images.extend((n..2 * n).map(var));
    images.push(var(2 * n + 1));
    images.push(partner(2 * n + 1));
    let drop: Vec<LinearForm> = (0..2 * n)
        .map(|k| LinearForm::var(2 * n, k))
        .chain([LinearForm::zero(2 * n), LinearForm::zero(2 * n)])
        .collect();
    let mut coefficients = Vec::with_capacity(tilde.coefficients.len());
    for (nu, u_nu) in tilde.coefficients.iter().enumerate() {
        let restricted = u_nu.substitute(&images, nt)?;
        if restricted.depends_on(2 * n..nt) {
            return Err(HuygensError::ProjectiveDependence(nu));
        }
        coefficients.push(restricted.substitute(&drop, 2 * n)?);
    }
    let chain = HadamardChain {
        n,
        potential: potential_from_config(c).u,
        coefficients,
        homogeneous: c.is_linear(),
    };
    let report = verify_hadamard_chain(&chain);
    if let Some(row) = report.rows.iter().find(|r| !r.holds()) {
        return Err(HuygensError::HadamardFailed(row.nu));
    }
    Ok(chain)
}
