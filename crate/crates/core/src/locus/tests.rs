use super::*;
use crate::config::{
    deformed_an, deformed_cn, make_coxeter, orthogonal_union, points_1d, CoxeterFamily, Hyperplane,
};
use crate::scalar::TowerScalar;
use crate::symbolic::DEFAULT_SEED;

const EXACT: ZeroMode = ZeroMode::Exact;

fn s(src: &str) -> TowerScalar {
    TowerScalar::parse_free(src).unwrap()
}

fn lines(normals: &[[&str; 2]], mults: &[u32]) -> Configuration {
    let hs = normals
        .iter()
        .zip(mults)
        .map(|(n, &m)| Hyperplane::linear(vec![s(n[0]), s(n[1])], m))
        .collect();
    Configuration::new(2, hs).unwrap()
}

fn passes(c: &Configuration) -> bool {
    verify_affine_locus(c, EXACT, DEFAULT_SEED).unwrap().pass
}

type C64 = (f64, f64);

fn cmul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C64, b: C64) -> C64 {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn cpow(a: C64, e: u32) -> C64 {
    (0..e).fold((1.0, 0.0), |acc, _| cmul(acc, a))
}

/// Direct floating-point evaluation of the left side of equation `(i, j)` at `x`.
fn brute_force(c: &Configuration, i: usize, j: u32, x: &[TowerScalar]) -> C64 {
    let c64 = |v: &TowerScalar| v.to_c64();
    let dot = |a: &[TowerScalar], b: &[C64]| {
        a.iter().zip(b).fold((0.0, 0.0), |acc, (p, q)| {
            let t = cmul(c64(p), *q);
            (acc.0 + t.0, acc.1 + t.1)
        })
    };
    let xf: Vec<C64> = x.iter().map(c64).collect();
    let alpha = &c.hyperplanes()[i];
    let af: Vec<C64> = alpha.normal.iter().map(c64).collect();
    let mut total = (0.0, 0.0);
    for (b, beta) in c.hyperplanes().iter().enumerate() {
        if b == i {
            continue;
        }
        let m = beta.multiplicity as f64;
        let bb = dot(
            &beta.normal,
            &beta.normal.iter().map(c64).collect::<Vec<_>>(),
        );
        let ab = dot(&beta.normal, &af);
        let bx = dot(&beta.normal, &xf);
        let den = (bx.0 + c64(&beta.offset).0, bx.1 + c64(&beta.offset).1);
        let num = cmul(cmul((m * (m + 1.0), 0.0), bb), cpow(ab, 2 * j - 1));
        let t = cdiv(num, cpow(den, 2 * j + 1));
        total = (total.0 + t.0, total.1 + t.1);
    }
    total
}

/// Compares the exact residual with brute force at points of hyperplane `i`.
fn check_against_oracle(c: &Configuration, i: usize, j: u32) {
    let r = equation_residual(c, i, j).unwrap();
    let n = c.dimension();
    let chart = HyperplaneChart::new(&c.form(i, n)).unwrap();
    for trial in 0..3i64 {
        let t: Vec<TowerScalar> = (0..n - 1)
            .map(|k| TowerScalar::from_frac(3 * trial + 2 * k as i64 + 1, 7))
            .collect();
        let x = chart.point(&t);
        let Ok(v) = r.evaluate(&t) else { continue };
        let want = brute_force(c, i, j, &x);
        let got = v.to_c64();
        let scale = 1.0 + want.0.abs() + want.1.abs();
        assert!(
            (got.0 - want.0).abs() < 1e-9 * scale && (got.1 - want.1).abs() < 1e-9 * scale,
            "hyperplane {i}, j={j}: {got:?} vs {want:?}"
        );
    }
}

#[test]
fn a2_passes() {
    let a2 = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    let r = verify_linear_locus(&a2, EXACT, DEFAULT_SEED).unwrap();
    assert!(r.pass);
    assert_eq!(r.items.len(), 3);
    assert!(r.items.iter().all(|it| it.residual == "0" && it.j == 1));
}

#[test]
fn single_hyperplane_is_vacuous() {
    for m in 1..4 {
        let c = lines(&[["1", "2"]], &[m]);
        let r = verify_linear_locus(&c, EXACT, DEFAULT_SEED).unwrap();
        assert!(r.pass);
        assert_eq!(r.items.len(), m as usize);
    }
}

#[test]
fn three_line_family_with_complex_slopes() {
    // a = 2i, b = i + √2 satisfy a² - ab + b² + 1 = 0
    let a = s("2*i");
    let b = s("i + r2");
    assert!(a
        .square()
        .sub(&a.mul(&b))
        .add(&b.square())
        .add(&TowerScalar::one())
        .is_zero());
    let c = lines(&[["1", "2*i"], ["1", "i + r2"], ["0", "1"]], &[1, 1, 1]);
    assert!(passes(&c));
    for i in 0..3 {
        check_against_oracle(&c, i, 1);
    }
    // perturbing b breaks it
    let bad = lines(&[["1", "2*i"], ["1", "i + r3"], ["0", "1"]], &[1, 1, 1]);
    assert!(!passes(&bad));
}

#[test]
fn rotated_normal_fails_at_j1() {
    let c = lines(&[["1", "0"], ["1/2", "1/2*r3"], ["1", "1/2"]], &[1, 1, 1]);
    let r = verify_linear_locus(&c, EXACT, DEFAULT_SEED).unwrap();
    assert!(!r.pass);
    assert!(r.failures().all(|it| it.j == 1));
    assert!(r.failures().count() > 0);
    for i in 0..3 {
        check_against_oracle(&c, i, 1);
    }
}

#[test]
fn residuals_match_brute_force() {
    let configs = [
        deformed_an(2, 2).unwrap(),
        deformed_cn(1, 2, 0).unwrap(),
        make_coxeter(CoxeterFamily::B, 2, &[2, 1]).unwrap(),
        lines(&[["1", "0"], ["1", "1"], ["1", "3"]], &[2, 1, 1]),
    ];
    for c in &configs {
        for (i, h) in c.hyperplanes().iter().enumerate() {
            for j in 1..=h.multiplicity {
                check_against_oracle(c, i, j);
            }
        }
    }
}

#[test]
fn coxeter_configurations_pass() {
    for m in 1..=3 {
        assert!(passes(&make_coxeter(CoxeterFamily::A, 2, &[m]).unwrap()));
        assert!(passes(&make_coxeter(CoxeterFamily::B, 2, &[m, 1]).unwrap()));
        for p in 1..=6 {
            assert!(
                passes(&make_coxeter(CoxeterFamily::I2(p), 2, &[m]).unwrap()),
                "I2({p}) m={m}"
            );
        }
    }
    assert!(passes(&make_coxeter(CoxeterFamily::A, 3, &[1]).unwrap()));
    assert!(passes(
        &make_coxeter(CoxeterFamily::I2(6), 2, &[1, 3]).unwrap()
    ));
}

#[test]
fn deformed_families_pass() {
    for m in [1, 2, 3, -2, -3] {
        assert!(passes(&deformed_an(2, m).unwrap()), "A2({m})");
    }
    assert!(passes(&deformed_an(3, 2).unwrap()));
    for (m, l) in [(1, 0), (2, 0), (0, 1), (2, 1), (-2, 0)] {
        assert!(passes(&deformed_cn(1, m, l).unwrap()), "C2({m},{l})");
    }
    assert!(passes(&deformed_cn(2, 1, 0).unwrap()));
}

#[test]
fn three_points_pass() {
    let c = points_1d(&[
        (s("-1"), 1),
        (s("1/2 + 1/2*i*r3"), 1),
        (s("1/2 - 1/2*i*r3"), 1),
    ])
    .unwrap();
    assert!(passes(&c));
    assert!(verify_linear_locus(&c, EXACT, DEFAULT_SEED).is_err());
}

#[test]
fn two_points_fail_with_direct_substitution_values() {
    let c = points_1d(&[(s("0"), 1), (s("1"), 1)]).unwrap();
    let r = verify_affine_locus(&c, EXACT, DEFAULT_SEED).unwrap();
    assert!(!r.pass);
    // oracle: m(m+1)/(z_i - z_j)³ with m = 1
    let oracle = |zi: f64, zj: f64| 2.0 / (zi - zj).powi(3);
    let want = [oracle(0.0, 1.0), oracle(1.0, 0.0)];
    for (it, w) in r.items.iter().zip(want) {
        assert_eq!(it.residual, format!("{}", w as i64));
    }
}

#[test]
fn orthogonal_union_of_locus_configurations() {
    let tri = points_1d(&[
        (s("-1"), 1),
        (s("1/2 + 1/2*i*r3"), 1),
        (s("1/2 - 1/2*i*r3"), 1),
    ])
    .unwrap();
    let u = orthogonal_union(&tri, &tri).unwrap();
    assert!(passes(&u));
    let three = points_1d(&[(s("0"), 1), (s("r3"), 1), (s("-r3"), 1)]).unwrap();
    assert!(!passes(&three));
    assert!(!passes(&orthogonal_union(&tri, &three).unwrap()));
}

#[test]
fn two_dim_decomposition_agrees() {
    let configs = [
        make_coxeter(CoxeterFamily::A, 3, &[1]).unwrap(),
        make_coxeter(CoxeterFamily::A, 2, &[2]).unwrap(),
        deformed_an(3, 2).unwrap(),
        deformed_cn(2, 1, 0).unwrap(),
        lines(&[["1", "0"], ["1/2", "1/2*r3"], ["1", "1/2"]], &[1, 1, 1]),
        lines(&[["1", "2*i"], ["1", "i + r2"], ["0", "1"]], &[1, 1, 1]),
    ];
    for c in &configs {
        let a = verify_linear_locus(c, EXACT, DEFAULT_SEED).unwrap();
        let b = verify_via_2d_decomposition(c, EXACT, DEFAULT_SEED).unwrap();
        assert_eq!(a.pass, b.pass);
    }
    let a3 = make_coxeter(CoxeterFamily::A, 3, &[1]).unwrap();
    assert_eq!(two_dim_decomposition(&a3).planes().count(), 7);
}

#[test]
fn generic_lines_in_space_agree() {
    // three lines whose normals are independent: every plane holds two of them
    let hs = [["1", "0", "1"], ["0", "1", "2"], ["1", "1", "0"]]
        .iter()
        .map(|n| Hyperplane::linear(n.iter().map(|x| s(x)).collect(), 1))
        .collect();
    let c = Configuration::new(3, hs).unwrap();
    let a = verify_linear_locus(&c, EXACT, DEFAULT_SEED).unwrap();
    let b = verify_via_2d_decomposition(&c, EXACT, DEFAULT_SEED).unwrap();
    assert_eq!(a.pass, b.pass);
}

#[test]
fn probabilistic_mode_agrees() {
    let good = deformed_an(2, 2).unwrap();
    let bad = lines(&[["1", "0"], ["1/2", "1/2*r3"], ["1", "1/2"]], &[1, 1, 1]);
    for (c, want) in [(good, true), (bad, false)] {
        let r = verify_linear_locus(&c, ZeroMode::Probabilistic, 11).unwrap();
        assert_eq!(r.pass, want);
        assert!(r.items.iter().all(|it| it.mode == ZeroMode::Probabilistic));
    }
}

#[test]
fn large_multiplicities_of_deformed_a2() {
    let c = deformed_an(2, 2).unwrap();
    let r = large_multiplicity_coxeter_check(&c, true).unwrap();
    assert!(r.pass);
    assert_eq!(r.large.len(), 1);
    assert_eq!(c.hyperplanes()[r.large[0]].multiplicity, 2);

    let a2 = make_coxeter(CoxeterFamily::A, 2, &[2]).unwrap();
    let r = large_multiplicity_coxeter_check(&a2, true).unwrap();
    assert_eq!(r.large, vec![0, 1, 2]);
    assert!(r.pass);

    let tri = lines(&[["1", "2*i"], ["1", "i + r2"], ["0", "1"]], &[1, 1, 1]);
    let r = large_multiplicity_coxeter_check(&tri, true).unwrap();
    assert!(r.large.is_empty() && r.pass);
    // not counting β makes every line large, and the reflections fail
    let r = large_multiplicity_coxeter_check(&tri, false).unwrap();
    assert_eq!(r.large.len(), 3);
    assert!(!r.pass);
}

#[test]
fn structure_check_on_linear_configuration() {
    let a2 = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    let r = structure_check_affine(&a2, EXACT, DEFAULT_SEED).unwrap();
    assert!(r.pass);
    assert_eq!(r.flats.len(), 1);
    assert_eq!(r.flats[0].hyperplanes, vec![0, 1, 2]);
    assert!(r.parallel_classes.is_empty());
}

#[test]
fn structure_check_on_shifted_triple_point() {
    let c = make_coxeter(CoxeterFamily::I2(3), 2, &[1]).unwrap();
    let shifted = c.translated(&[s("1"), s("1")]).unwrap();
    let r = structure_check_affine(&shifted, EXACT, DEFAULT_SEED).unwrap();
    assert!(r.pass);
    assert_eq!(r.flats.len(), 1);
    assert_eq!(r.flats[0].point, vec!["1".to_string(), "1".to_string()]);
    assert!(passes(&shifted));
}

#[test]
fn structure_check_on_product_of_triples() {
    let tri = points_1d(&[
        (s("-1"), 1),
        (s("1/2 + 1/2*i*r3"), 1),
        (s("1/2 - 1/2*i*r3"), 1),
    ])
    .unwrap();
    let u = orthogonal_union(&tri, &tri).unwrap();
    let r = structure_check_affine(&u, EXACT, DEFAULT_SEED).unwrap();
    assert!(r.pass);
    assert_eq!(r.flats.len(), 9);
    assert!(r.flats.iter().all(|f| f.hyperplanes.len() == 2));
    assert_eq!(r.parallel_classes.len(), 2);

    let bad = orthogonal_union(&tri, &points_1d(&[(s("0"), 1), (s("1"), 1)]).unwrap()).unwrap();
    let r = structure_check_affine(&bad, EXACT, DEFAULT_SEED).unwrap();
    assert!(!r.pass);
    assert!(!passes(&bad));
}
