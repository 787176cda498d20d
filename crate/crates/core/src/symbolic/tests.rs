use super::*;
use crate::scalar::TowerScalar;

fn int(n: i64) -> TowerScalar {
    TowerScalar::from_int(n)
}

fn form(coeffs: &[i64], c: i64) -> LinearForm {
    LinearForm::new(coeffs.iter().map(|&a| int(a)).collect(), int(c))
}

fn recip_pow(f: &LinearForm, p: i64) -> RationalFn {
    RationalFn::linear_power(f, -p).unwrap()
}

#[test]
fn plane_wave_is_eigenfunction() {
    let p = RationalFn::one(2);
    let u = RationalFn::zero(2);
    assert!(apply_l_plus_k2(&p, &u, 1).is_zero());
}

#[test]
fn l_plus_k2_on_rational_lame() {
    // n = 1, variables (x, k); P = x, u = 2/x²
    let p = RationalFn::var(2, 0);
    let u = recip_pow(&form(&[1, 0], 0), 2).scale_int(2);
    let got = apply_l_plus_k2(&p, &u, 1);
    // oracle: -P'' - 2kP' + uP = 0 - 2k + 2/x
    let expect = RationalFn::var(2, 1)
        .scale_int(-2)
        .add(&recip_pow(&form(&[1, 0], 0), 1).scale_int(2));
    assert_eq!(got, expect);
}

#[test]
fn l_plus_k2_on_harmonic_product() {
    // n = 2, variables (x1, x2, k1, k2)
    let p = RationalFn::var(4, 0).mul(&RationalFn::var(4, 1));
    let got = apply_l_plus_k2(&p, &RationalFn::zero(4), 2);
    let expect = RationalFn::var(4, 2)
        .mul(&RationalFn::var(4, 1))
        .add(&RationalFn::var(4, 3).mul(&RationalFn::var(4, 0)))
        .scale_int(-2);
    assert_eq!(got, expect);
}

#[test]
fn restriction_examples() {
    let f = RationalFn::var(2, 0).add(&RationalFn::var(2, 1));
    let r = restrict_to_hyperplane(&f, &form(&[1, 0], 0)).unwrap();
    assert_eq!(r, RationalFn::var(1, 0));
    assert_eq!(r.fmt_with(&t_names(1)), "t1");

    let f = recip_pow(&form(&[0, 1], 0), 1);
    let r = restrict_to_hyperplane(&f, &form(&[1, -1], 0)).unwrap();
    assert_eq!(r, recip_pow(&form(&[1], 0), 1));

    let f = RationalFn::from_poly(MultiPoly::from_linear(&form(&[1, -1], 0)));
    assert!(restrict_to_hyperplane(&f, &form(&[1, -1], 0))
        .unwrap()
        .is_zero());
}

#[test]
fn restriction_rejects_poles_on_the_hyperplane() {
    let f = recip_pow(&form(&[2, -2], 0), 1);
    assert_eq!(
        restrict_to_hyperplane(&f, &form(&[1, -1], 0)),
        Err(SymbolicError::ProportionalDenominator)
    );
    let iso = LinearForm::new(vec![int(1), TowerScalar::i()], int(0));
    assert_eq!(
        restrict_to_hyperplane(&RationalFn::one(2), &iso),
        Err(SymbolicError::Isotropic)
    );
}

#[test]
fn zero_tests() {
    let x = RationalFn::var(1, 0);
    let d = x.mul(&x).sub(&x.mul(&x));
    assert!(is_zero(&d, ZeroMode::Exact, DEFAULT_SEED).zero);
    assert!(is_zero(&d, ZeroMode::Probabilistic, DEFAULT_SEED).zero);
    let e = recip_pow(&form(&[1], 0), 1).sub(&recip_pow(&form(&[1], 1), 1));
    assert!(!is_zero(&e, ZeroMode::Exact, DEFAULT_SEED).zero);
    let t = is_zero(&e, ZeroMode::Probabilistic, DEFAULT_SEED);
    assert!(!t.zero && t.witness.is_some());
}

#[test]
fn laurent_of_single_pole() {
    let f = recip_pow(&form(&[1], 0), 2).scale_int(2);
    let ex = laurent_normal_expansion(&f, &form(&[1], 0), 3).unwrap();
    assert_eq!(ex[0].0, -2);
    assert_eq!(ex[0].1.as_constant(), Some(int(2)));
    assert!(ex[1..].iter().all(|(_, c)| c.is_zero()));
}

#[test]
fn laurent_geometric_series() {
    // 1/(x(x-1)) = -1/x · 1/(1-x) = -Σ x^{s}, s ≥ -1
    let f = recip_pow(&form(&[1], 0), 1).mul(&recip_pow(&form(&[1], -1), 1));
    let ex = laurent_normal_expansion(&f, &form(&[1], 0), 4).unwrap();
    for (s, c) in &ex {
        assert!(*s >= -1);
        assert_eq!(c.as_constant(), Some(int(-1)), "coefficient {s}");
    }
}

#[test]
fn laurent_of_a2_potential_at_a_mirror() {
    // A₂ in C³: u = Σ 2·2/(e_i - e_j, x)²
    let mirrors = [
        form(&[1, -1, 0], 0),
        form(&[1, 0, -1], 0),
        form(&[0, 1, -1], 0),
    ];
    let u = mirrors.iter().fold(RationalFn::zero(3), |acc, m| {
        acc.add(&recip_pow(m, 2).scale_int(4))
    });
    let ex = laurent_normal_expansion(&u, &mirrors[0], 3).unwrap();
    assert_eq!(ex[0].0, -2);
    // c_{-2} = m(m+1)(α,α) = 2·2
    assert_eq!(ex[0].1.as_constant(), Some(int(4)));
    assert!(ex[1].1.is_zero());
    assert!(ex[3].1.is_zero());
}

#[test]
fn laurent_reassembles_to_original() {
    let h = form(&[1, 2], -1);
    let f = recip_pow(&h, 2)
        .mul(&recip_pow(&form(&[1, 0], 3), 1))
        .add(&RationalFn::var(2, 1).mul(&recip_pow(&form(&[0, 1], 0), 1)));
    let depth = 4;
    let ex = laurent_normal_expansion(&f, &h, depth).unwrap();
    let back = reassemble(&ex, &h).unwrap();
    let diff = f.sub(&back);
    let re = laurent_normal_expansion(&diff, &h, depth + 2).unwrap();
    let top = ex[0].0 + depth as i64;
    for (s, c) in re {
        if s <= top {
            assert!(c.is_zero(), "order {s} survived");
        }
    }
}

#[test]
fn laurent_constant_term_matches_restriction() {
    let h = form(&[1, -1], 0);
    let f = recip_pow(&form(&[1, 1], 0), 1).mul(&RationalFn::var(2, 0));
    let ex = laurent_normal_expansion(&f, &h, 2).unwrap();
    let c0 = laurent_coefficient(&ex, 0, 1);
    assert_eq!(c0, restrict_to_hyperplane(&f, &h).unwrap());
}

#[test]
fn homogeneous_components_in_k_block() {
    // A(k) + k1 for A₂ in C³ with variables (x1..x3, k1..k3)
    let k = |i: usize| MultiPoly::var(6, 3 + i);
    let a = k(0).sub(&k(1)).mul(&k(0).sub(&k(2))).mul(&k(1).sub(&k(2)));
    let f = a.add(&k(0));
    let parts = f.homogeneous_components(3..6);
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[0], (1, k(0)));
    assert_eq!(parts[1], (3, a));
}
