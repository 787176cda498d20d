//! Polynomials, linear forms and rational functions with linear-form denominators.
//!
//! Functions of `(x, k)` use `2n` variables: `x_1..x_n` at indices `0..n` and
//! `k_1..k_n` at `n..2n`.

mod linear;
mod local;
mod poly;
mod rational;
mod zero;

use thiserror::Error;

pub use linear::LinearForm;
pub use local::{
    laurent_coefficient, laurent_normal_expansion, reassemble, restrict_to_hyperplane,
    restrict_unchecked, HyperplaneChart,
};
pub use poly::{Monomial, MultiPoly, MAX_EXP, MAX_VARS};
pub(crate) use rational::divide_by_linear;
pub use rational::RationalFn;
pub use zero::{is_zero, is_zero_sum, sum_all, Certificate, ZeroMode, ZeroTest, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("a denominator vanishes identically")]
    VanishingDenominator,
    #[error("a denominator form is proportional to the restriction hyperplane")]
    ProportionalDenominator,
    #[error("hyperplane normal is isotropic")]
    Isotropic,
    #[error("hyperplane equation has no variable part")]
    ConstantHyperplane,
}

/// `v1, v2, ...`
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("v{i}")).collect()
}

fn block(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }
}

/// `x1..xn` (or `x` when `n = 1`).
pub fn x_names(n: usize) -> Vec<String> {
    block("x", n)
}

/// `x1..xn, k1..kn` for functions of position and spectral parameter.
pub fn xk_names(n: usize) -> Vec<String> {
    let mut v = block("x", n);
    v.extend(block("k", n));
    v
}

/// `x1..xn, xi1..xin`: position and second point of Hadamard coefficients.
pub fn x_xi_names(n: usize) -> Vec<String> {
    let mut v = block("x", n);
    v.extend(block("xi", n));
    v
}

/// Hyperplane parameters `t1..tm`.
pub fn t_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("t{i}")).collect()
}

/// Prefactor of `(L + k²)[P e^{(k,x)}] = (-Δ_x P - 2(k,∇_x P) + uP) e^{(k,x)}`.
///
/// `p` and `u` live in the `2n`-variable `(x, k)` space; `u` must not involve `k`.
pub fn apply_l_plus_k2(p: &RationalFn, u: &RationalFn, n: usize) -> RationalFn {
    debug_assert!(!u.depends_on(n..2 * n));
    let nv = p.nvars();
    let mut terms = Vec::with_capacity(2 * n + 1);
    for i in 0..n {
        let d = p.derivative(i);
        terms.push(d.derivative(i).neg());
        let k = MultiPoly::var(nv, n + i).scale_int(-2);
        terms.push(d.mul_poly(&k));
    }
    terms.push(u.mul(p));
    sum_all(&terms, nv)
}

#[cfg(test)]
mod tests;
