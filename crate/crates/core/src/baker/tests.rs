use super::*;
use crate::config::{deformed_an, make_coxeter, points_1d, CoxeterFamily, Hyperplane};
use crate::locus::verify_affine_locus;
use crate::symbolic::DEFAULT_SEED;

const EXACT: ZeroMode = ZeroMode::Exact;

fn s(src: &str) -> TowerScalar {
    TowerScalar::parse_free(src).unwrap()
}

fn int(n: i64) -> TowerScalar {
    TowerScalar::from_int(n)
}

fn lines(normals: &[[&str; 2]], mults: &[u32]) -> Configuration {
    let hs = normals
        .iter()
        .zip(mults)
        .map(|(n, &m)| Hyperplane::linear(vec![s(n[0]), s(n[1])], m))
        .collect();
    Configuration::new(2, hs).unwrap()
}

fn point(z: i64, m: u32) -> Configuration {
    points_1d(&[(int(z), m)]).unwrap()
}

fn perturbed_a2() -> Configuration {
    lines(&[["1", "0"], ["1/2", "1/2*r3"], ["1", "1/2"]], &[1, 1, 1])
}

/// `1/(k (x + a))` over the variables `(x, k)`.
fn inv_kx(a: i64) -> RationalFn {
    let k = LinearForm::var(2, 1);
    let x = LinearForm::new(vec![int(1), int(0)], int(a));
    RationalFn::linear_power(&k, -1)
        .unwrap()
        .mul_linear_power(&x, -1)
        .unwrap()
}

#[test]
fn potential_of_a_point() {
    let l = potential_from_config(&point(0, 1));
    let x = LinearForm::var(1, 0);
    assert_eq!(l.u, RationalFn::linear_power(&x, -2).unwrap().scale_int(2));
}

#[test]
fn potential_of_deformed_a2() {
    // oracle: terms written out by hand for e1-e2 (m=2), e_i - √2 e3 (m=1, norm 3)
    let c = deformed_an(2, 2).unwrap();
    let l = potential_from_config(&c);
    let f = |a: &[&str]| LinearForm::new(a.iter().map(|v| s(v)).collect(), int(0));
    let want = RationalFn::linear_power(&f(&["1", "-1", "0"]), -2)
        .unwrap()
        .scale_int(12)
        .add(
            &RationalFn::linear_power(&f(&["1", "0", "-r2"]), -2)
                .unwrap()
                .scale_int(6),
        )
        .add(
            &RationalFn::linear_power(&f(&["0", "1", "-r2"]), -2)
                .unwrap()
                .scale_int(6),
        );
    assert!(l.u.sub(&want).is_zero());
}

#[test]
fn rational_lame_psi() {
    let psi = berest_psi(&point(0, 1)).unwrap();
    assert_eq!(psi.prefactor, RationalFn::one(2).sub(&inv_kx(0)));
    assert_eq!(psi.prefactor_text(), "(x*k - 1)/(k*x)");
}

#[test]
fn shifted_point_is_translated() {
    // hyperplane x + 3 = 0
    let psi = berest_psi(&point(-3, 1)).unwrap();
    assert_eq!(psi.prefactor, RationalFn::one(2).sub(&inv_kx(3)));
}

#[test]
fn higher_multiplicity_point() {
    // oracle: ψ = (1 - 3/(kx) + 3/(kx)²) e^{kx} for u = 6/x²
    let psi = berest_psi(&point(0, 2)).unwrap();
    let t = inv_kx(0);
    let want = RationalFn::one(2)
        .sub(&t.scale_int(3))
        .add(&t.mul(&t).scale_int(3));
    assert_eq!(psi.prefactor, want);
}

#[test]
fn perturbed_configuration_does_not_terminate() {
    match berest_psi(&perturbed_a2()) {
        Err(BakerError::NonTerminating { steps, phi }) => {
            assert_eq!(steps, 3);
            assert!(!phi.is_zero());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn termination_matches_locus_verdict() {
    let configs = [
        point(0, 2),
        points_1d(&[(int(0), 1), (int(1), 1)]).unwrap(),
        make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap(),
        make_coxeter(CoxeterFamily::I2(4), 2, &[1, 2]).unwrap(),
        deformed_an(2, 2).unwrap(),
        perturbed_a2(),
        lines(&[["1", "2*i"], ["1", "i + r2"], ["0", "1"]], &[1, 1, 1]),
    ];
    for c in &configs {
        let locus = verify_affine_locus(c, EXACT, DEFAULT_SEED).unwrap().pass;
        assert_eq!(berest_psi(c).is_ok(), locus, "{c:?}");
    }
}

#[test]
fn leading_term_is_a_of_k() {
    for c in [
        make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap(),
        deformed_an(2, 2).unwrap(),
    ] {
        let psi = berest_psi(&c).unwrap();
        let n = c.dimension();
        let parts = psi.p.homogeneous_components(n..2 * n);
        let (deg, top) = parts.last().unwrap();
        assert_eq!(*deg, c.total_multiplicity() as i64);
        assert!(top.sub(&RationalFn::from_poly(psi.a_k.clone())).is_zero());
        // unnormalized: R_M = (-2)^M M! A(k)
        let m = c.total_multiplicity();
        let raw = berest_iterates(&c, m).pop().unwrap();
        let scale: i64 = (1..=m as i64).map(|i| -2 * i).product();
        let top_raw = raw.homogeneous_components(n..2 * n).pop().unwrap().1;
        assert!(top_raw
            .sub(&RationalFn::from_poly(psi.a_k.scale_int(scale)))
            .is_zero());
    }
}

#[test]
fn berest_iterates_lose_one_x_degree_per_step() {
    let c = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    let n = 3;
    let its = berest_iterates(&c, 3);
    for (i, p) in its.iter().enumerate() {
        // top k-degree component has x-degree M - i
        let (kdeg, top) = p.homogeneous_components(n..2 * n).pop().unwrap();
        assert_eq!(kdeg, i as i64);
        let (xdeg, _) = top.homogeneous_components(0..n).pop().unwrap();
        assert_eq!(xdeg, 3 - i as i64);
    }
}

#[test]
fn asymptotic_normalization() {
    for c in [
        point(0, 3),
        make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap(),
        deformed_an(2, 2).unwrap(),
    ] {
        let psi = berest_psi(&c).unwrap();
        let n = c.dimension();
        let parts = psi.prefactor.homogeneous_components(n..2 * n);
        assert!(parts.iter().all(|(d, _)| *d <= 0));
        let zero = &parts.iter().find(|(d, _)| *d == 0).unwrap().1;
        assert!(zero.sub(&RationalFn::one(2 * n)).is_zero());
        // k^{-1} part: Σ a1((α,x)) (α,α)/(α,k) with a1 read off the 1D function of multiplicity m
        let minus_one = &parts.iter().find(|(d, _)| *d == -1).unwrap().1;
        let mut want = RationalFn::zero(2 * n);
        for (j, h) in c.hyperplanes().iter().enumerate() {
            let one_d = berest_psi(&point(0, h.multiplicity)).unwrap();
            let a1 = one_d
                .prefactor
                .homogeneous_components(1..2)
                .into_iter()
                .find(|(d, _)| *d == -1)
                .unwrap()
                .1;
            // a1 = q / (x k): take q
            let q = a1
                .mul(&RationalFn::from_poly(
                    MultiPoly::var(2, 0).mul(&MultiPoly::var(2, 1)),
                ))
                .as_constant()
                .unwrap();
            let term = RationalFn::linear_power(&c.form(j, 2 * n), -1)
                .unwrap()
                .mul_linear_power(&c.normal_form(j, 2 * n, n), -1)
                .unwrap()
                .scale(&q.mul(&h.norm()));
            want = want.add(&term);
        }
        assert!(minus_one.sub(&want).is_zero());
    }
}

#[test]
fn axioms() {
    let one_d = berest_psi(&point(0, 1)).unwrap();
    assert!(verify_ba_axioms(&one_d, EXACT, DEFAULT_SEED).unwrap().pass);

    let a2 = berest_psi(&make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap()).unwrap();
    let r = verify_ba_axioms(&a2, EXACT, DEFAULT_SEED).unwrap();
    assert!(r.pass);
    assert_eq!(r.items.len(), 3);

    let a22 = berest_psi(&deformed_an(2, 2).unwrap()).unwrap();
    let r = verify_ba_axioms(&a22, EXACT, DEFAULT_SEED).unwrap();
    assert!(r.pass);
    assert_eq!(r.items.len(), 4);

    let empty = berest_psi(&Configuration::empty(2)).unwrap();
    let r = verify_ba_axioms(&empty, EXACT, DEFAULT_SEED).unwrap();
    assert!(r.pass && r.items.is_empty());

    // the plane wave alone violates the axioms of a nonempty configuration
    let mut fake = one_d.clone();
    fake.prefactor = RationalFn::one(2);
    assert!(!verify_ba_axioms(&fake, EXACT, DEFAULT_SEED).unwrap().pass);

    let shifted = berest_psi(&point(-3, 1)).unwrap();
    assert!(matches!(
        verify_ba_axioms(&shifted, EXACT, DEFAULT_SEED),
        Err(BakerError::NotLinear)
    ));
}

#[test]
fn axioms_by_hand_in_1d() {
    // ∂/∂k [(k - 1/x) e^{kx}] at k = 0 is 1 + (-1/x)·x
    let g =
        RationalFn::var(2, 1).sub(&RationalFn::linear_power(&LinearForm::var(2, 0), -1).unwrap());
    let x = RationalFn::var(2, 0);
    let d = g.derivative(1).add(&g.mul(&x));
    let at0 = d
        .substitute(&[LinearForm::var(1, 0), LinearForm::zero(1)], 1)
        .unwrap();
    assert!(at0.is_zero());
}

#[test]
fn eigen_equation() {
    for c in [
        point(0, 1),
        point(-3, 2),
        Configuration::empty(2),
        deformed_an(2, 2).unwrap(),
        points_1d(&[
            (int(-1), 1),
            (s("1/2 + 1/2*i*r3"), 1),
            (s("1/2 - 1/2*i*r3"), 1),
        ])
        .unwrap(),
    ] {
        let psi = berest_psi(&c).unwrap();
        let l = potential_from_config(&c);
        assert!(verify_eigen(&psi, &l, EXACT, DEFAULT_SEED));
        assert!(verify_eigen(&psi, &l, ZeroMode::Probabilistic, 5));
    }
    // wrong potential
    let psi = berest_psi(&point(0, 1)).unwrap();
    let l = potential_from_config(&point(0, 2));
    assert!(!verify_eigen(&psi, &l, EXACT, DEFAULT_SEED));
}

#[test]
fn symmetry() {
    for c in [
        point(0, 1),
        Configuration::empty(2),
        make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap(),
        deformed_an(2, 2).unwrap(),
    ] {
        let psi = berest_psi(&c).unwrap();
        assert!(verify_symmetry(&psi, EXACT, DEFAULT_SEED).unwrap());
    }
    let psi = berest_psi(&point(-3, 1)).unwrap();
    assert!(verify_symmetry(&psi, EXACT, DEFAULT_SEED).is_err());
}

#[test]
fn quasi_invariants() {
    let a2 = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    let k = |i: usize| MultiPoly::var(3, i);
    let k2 = (0..3).fold(MultiPoly::zero(3), |acc, i| acc.add(&k(i).pow(2)));
    assert!(is_quasi_invariant(&k2, &a2).unwrap());
    assert!(!is_quasi_invariant(&k(0), &a2).unwrap());

    let m = 2;
    let c = deformed_an(2, m).unwrap();
    let r2 = TowerScalar::sqrt_int(4, m);
    // p3 = k1³ + k2³ + √m k3³
    let p3 = k(0).pow(3).add(&k(1).pow(3)).add(&k(2).pow(3).scale(&r2));
    assert!(is_quasi_invariant(&p3, &c).unwrap());
    assert!(!is_quasi_invariant(&k(0).pow(3).add(&k(1).pow(3)).add(&k(2).pow(3)), &c).unwrap());
    let k2_c = (0..3).fold(MultiPoly::zero(3), |acc, i| acc.add(&k(i).pow(2)));
    assert!(is_quasi_invariant(&k2_c, &c).unwrap());
}

#[test]
fn ad_formula_recovers_minus_l() {
    for c in [
        point(0, 1),
        make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap(),
    ] {
        let n = c.dimension();
        let l = potential_from_config(&c);
        let k2 = (0..n).fold(MultiPoly::zero(n), |acc, i| {
            acc.add(&MultiPoly::var(n, i).pow(2))
        });
        let op = operator_from_ad_formula(&l, &k2).unwrap();
        assert_eq!(op, l.diffop().neg());
        let psi = berest_psi(&c).unwrap();
        assert!(verify_operator_eigen(&op, &k2, &psi, EXACT, DEFAULT_SEED));
    }
}

#[test]
fn ad_formula_in_flat_space() {
    let l = potential_from_config(&Configuration::empty(2));
    let op = operator_from_ad_formula(&l, &MultiPoly::var(2, 0)).unwrap();
    assert_eq!(op, DiffOp::derivative(4, vec![0, 1], 0));
}

#[test]
fn ad_formula_for_cubic_integral_of_a2() {
    let c = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    let l = potential_from_config(&c);
    let p3 = (0..3).fold(MultiPoly::zero(3), |acc, i| {
        acc.add(&MultiPoly::var(3, i).pow(3))
    });
    let op = operator_from_ad_formula(&l, &p3).unwrap();
    assert_eq!(op.order(), 3);
    let psi = berest_psi(&c).unwrap();
    assert!(verify_operator_eigen(&op, &p3, &psi, EXACT, DEFAULT_SEED));
    assert!(op.commutator(&l.diffop()).is_zero());
    assert_eq!(op.commutator(&l.diffop()).first_surviving_monomial(3), None);
}

#[test]
fn surviving_monomials() {
    let d = DiffOp::derivative(4, vec![0, 1], 1);
    assert_eq!(d.first_surviving_monomial(2), Some(vec![0, 1]));
    let dd = d.compose(&d);
    assert_eq!(dd.first_surviving_monomial(1), None);
    assert_eq!(dd.first_surviving_monomial(3), Some(vec![0, 2]));
}

#[test]
fn bispectral() {
    for c in [
        Configuration::empty(2),
        point(0, 1),
        make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap(),
    ] {
        let psi = berest_psi(&c).unwrap();
        assert!(verify_bispectral(&psi, EXACT, DEFAULT_SEED).unwrap());
    }
    let mut fake = berest_psi(&point(0, 1)).unwrap();
    fake.prefactor = RationalFn::one(2).sub(&inv_kx(0).scale_int(2));
    assert!(!verify_bispectral(&fake, EXACT, DEFAULT_SEED).unwrap());
}

#[test]
fn monodromy() {
    let l = potential_from_config(&point(0, 1));
    let r = trivial_monodromy_check(&l, &LinearForm::var(1, 0)).unwrap();
    assert!(r.pass);
    assert_eq!(r.m, 1);

    let c = deformed_an(2, 2).unwrap();
    let l = potential_from_config(&c);
    let j = c
        .hyperplanes()
        .iter()
        .position(|h| h.multiplicity == 2)
        .unwrap();
    let r = trivial_monodromy_check(&l, &c.form(j, 3)).unwrap();
    assert!(r.pass);
    assert_eq!(r.m, 2);
    assert_eq!(r.coefficients.len(), 3);

    let bad = perturbed_a2();
    let l = potential_from_config(&bad);
    let r = trivial_monodromy_check(&l, &bad.form(0, 2)).unwrap();
    assert!(!r.pass);

    let l = potential_from_config(&point(0, 1));
    assert!(matches!(
        trivial_monodromy_check(&l, &LinearForm::new(vec![int(1)], int(1))),
        Err(BakerError::NotPole)
    ));
}

#[test]
fn ba_json() {
    let psi = berest_psi(&point(0, 1)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&psi.to_json()).unwrap();
    assert_eq!(v["M"], 1);
    assert_eq!(v["prefactor"].as_str().unwrap(), psi.prefactor_text());
}
