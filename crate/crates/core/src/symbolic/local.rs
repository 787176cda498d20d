//! Restriction to a hyperplane and expansion in its normal direction.

use crate::scalar::TowerScalar;

use super::linear::LinearForm;
use super::rational::RationalFn;
use super::SymbolicError;

/// Parametrization of `h = 0` by the non-pivot variables.
///
/// The pivot is the largest-index variable with a nonzero coefficient; the
/// parameters `t_1..t_{n-1}` are the remaining variables in their original order.
#[derive(Clone, Debug)]
pub struct HyperplaneChart {
    pub pivot: usize,
    /// Image of each original variable as an affine form in the parameters.
    pub images: Vec<LinearForm>,
}

impl HyperplaneChart {
    pub fn new(h: &LinearForm) -> Result<Self, SymbolicError> {
        let n = h.nvars();
        let pivot = h.last_var().ok_or(SymbolicError::ConstantHyperplane)?;
        let inv = h.coeff(pivot).inv().expect("pivot coefficient is nonzero");
        let param = |i: usize| if i < pivot { i } else { i - 1 };
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            if i == pivot {
                // v_p = -(c + Σ_{j≠p} a_j t_j) / a_p
                let mut coeffs = vec![TowerScalar::zero(); n - 1];
                for j in (0..n).filter(|&j| j != pivot) {
                    coeffs[param(j)] = h.coeff(j).mul(&inv).neg();
                }
                images.push(LinearForm::new(coeffs, h.constant().mul(&inv).neg()));
            } else {
                images.push(LinearForm::var(n - 1, param(i)));
            }
        }
        Ok(HyperplaneChart { pivot, images })
    }

    /// Point of the original space for parameter values `t`.
    pub fn point(&self, t: &[TowerScalar]) -> Vec<TowerScalar> {
        self.images.iter().map(|f| f.evaluate(t)).collect()
    }
}

fn check_non_isotropic(h: &LinearForm) -> Result<TowerScalar, SymbolicError> {
    let nn = h.dot(h);
    if nn.is_zero() {
        return Err(SymbolicError::Isotropic);
    }
    Ok(nn)
}

/// Restricts `f` to the non-isotropic hyperplane `h = 0`; the result lives in `n - 1` parameters.
pub fn restrict_to_hyperplane(f: &RationalFn, h: &LinearForm) -> Result<RationalFn, SymbolicError> {
    check_non_isotropic(h)?;
    restrict_unchecked(f, h)
}

/// Restriction without the isotropy check (used for the projective slice).
pub fn restrict_unchecked(f: &RationalFn, h: &LinearForm) -> Result<RationalFn, SymbolicError> {
    let chart = HyperplaneChart::new(h)?;
    f.substitute(&chart.images, h.nvars() - 1)
        .map_err(|_| SymbolicError::ProportionalDenominator)
}

/// Laurent coefficients of `f` along `h`: pairs `(s, c_s)` for `s = -ord ..= -ord + depth`,
/// with `f = Σ c_s · (h)^s` and `c_s` functions of the hyperplane parameters.
pub fn laurent_normal_expansion(
    f: &RationalFn,
    h: &LinearForm,
    depth: usize,
) -> Result<Vec<(i64, RationalFn)>, SymbolicError> {
    let n = f.nvars();
    assert_eq!(h.nvars(), n, "hyperplane space mismatch");
    let nn = check_non_isotropic(h)?;
    let chart = HyperplaneChart::new(h)?;
    let lam = n - 1;
    let step = nn.inv().expect("non-isotropic");
    // v_i = y_i(t) + λ a_i / (a,a), so that h = λ
    let images: Vec<LinearForm> = chart
        .images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let mut g = img.extend(n);
            let a = h.coeff(i).mul(&step);
            if !a.is_zero() {
                g = g.add(&LinearForm::var(n, lam).scale(&a));
            }
            g
        })
        .collect();
    let m = n - 1;
    let num = f.numerator().substitute(&images, n);
    let parts = num.split_var(lam);
    let mut series: Vec<RationalFn> = (0..=depth)
        .map(|r| match parts.get(r) {
            Some(p) => RationalFn::from_poly(p.shrink(m)),
            None => RationalFn::zero(m),
        })
        .collect();
    let mut order: i64 = 0;
    let mut lead = TowerScalar::one();
    for (form, pw) in f.denominator() {
        let g = form.substitute(&images, n);
        let b = g.coeff(lam).clone();
        let mut coeffs = g.coeffs().to_vec();
        coeffs[lam] = TowerScalar::zero();
        let a = LinearForm::new(coeffs, g.constant().clone()).extend(m);
        let pw = *pw as i64;
        if a.is_constant() && a.constant().is_zero() {
            order += pw;
            lead = lead.mul(&b.pow(pw as u32));
            continue;
        }
        if b.is_zero() {
            let factor = RationalFn::linear_power(&a, -pw)?;
            series = series.iter().map(|s| s.mul(&factor)).collect();
            continue;
        }
        // (a + bλ)^{-p} = Σ_r binom(-p, r) b^r a^{-p-r} λ^r
        let mut factor = Vec::with_capacity(depth + 1);
        let mut binom = TowerScalar::one();
        let mut bpow = TowerScalar::one();
        for r in 0..=depth as i64 {
            if r > 0 {
                binom = binom.mul(&TowerScalar::from_frac(-pw - r + 1, r));
                bpow = bpow.mul(&b);
            }
            factor.push(RationalFn::linear_power(&a, -pw - r)?.scale(&binom.mul(&bpow)));
        }
        series = truncated_product(&series, &factor, m);
    }
    let lead_inv = lead.inv().expect("nonzero normal coefficient");
    Ok(series
        .into_iter()
        .enumerate()
        .map(|(r, c)| (r as i64 - order, c.scale(&lead_inv)))
        .collect())
}

fn truncated_product(a: &[RationalFn], b: &[RationalFn], m: usize) -> Vec<RationalFn> {
    let len = a.len();
    (0..len)
        .map(|r| {
            (0..=r).fold(RationalFn::zero(m), |acc, i| {
                if a[i].is_zero() || b[r - i].is_zero() {
                    acc
                } else {
                    acc.add(&a[i].mul(&b[r - i]))
                }
            })
        })
        .collect()
}

/// Coefficient of `(h)^s` from an expansion, zero when absent.
pub fn laurent_coefficient(expansion: &[(i64, RationalFn)], s: i64, m: usize) -> RationalFn {
    expansion
        .iter()
        .find(|(k, _)| *k == s)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(|| RationalFn::zero(m))
}

/// `Σ_s c_s · h^s` back in the original variables, where the parameters are
/// read off from the projection of `x` onto `h = 0` along the normal.
pub fn reassemble(
    expansion: &[(i64, RationalFn)],
    h: &LinearForm,
) -> Result<RationalFn, SymbolicError> {
    let n = h.nvars();
    let nn = check_non_isotropic(h)?;
    let chart = HyperplaneChart::new(h)?;
    let step = nn.inv().expect("non-isotropic");
    let images: Vec<LinearForm> = (0..n)
        .filter(|&i| i != chart.pivot)
        .map(|i| LinearForm::var(n, i).sub(&h.scale(&h.coeff(i).mul(&step))))
        .collect();
    let mut acc = RationalFn::zero(n);
    for (s, c) in expansion {
        let c = c.substitute(&images, n)?;
        acc = acc.add(&c.mul(&RationalFn::linear_power(h, *s)?));
    }
    Ok(acc)
}
