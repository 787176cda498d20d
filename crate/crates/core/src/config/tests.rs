use super::*;
use crate::scalar::TowerScalar;

fn s(src: &str) -> TowerScalar {
    TowerScalar::parse_free(src).unwrap()
}

fn vs(srcs: &[&str]) -> Vec<TowerScalar> {
    srcs.iter().map(|x| s(x)).collect()
}

fn normals(c: &Configuration) -> Vec<Vec<TowerScalar>> {
    c.hyperplanes().iter().map(|h| h.normal.clone()).collect()
}

#[test]
fn a2_mirrors() {
    let c = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    assert_eq!(
        normals(&c),
        vec![
            vs(&["0", "1", "-1"]),
            vs(&["1", "-1", "0"]),
            vs(&["1", "0", "-1"])
        ]
    );
    assert!(c.hyperplanes().iter().all(|h| h.multiplicity == 1));
}

#[test]
fn coxeter_counts() {
    for n in 1..5 {
        let c = make_coxeter(CoxeterFamily::A, n, &[1]).unwrap();
        assert_eq!(c.len(), n * (n + 1) / 2);
    }
    for p in 1..9 {
        let c = make_coxeter(CoxeterFamily::I2(p), 2, &[1]).unwrap();
        assert_eq!(c.len(), p as usize);
    }
    assert_eq!(make_coxeter(CoxeterFamily::B, 3, &[1, 2]).unwrap().len(), 9);
    assert_eq!(make_coxeter(CoxeterFamily::D, 4, &[1]).unwrap().len(), 12);
}

#[test]
fn dihedral_normals_are_unit_and_at_the_right_angles() {
    for p in [3u32, 4, 5, 6, 7, 8] {
        let c = make_coxeter(CoxeterFamily::I2(p), 2, &[1]).unwrap();
        for h in c.hyperplanes() {
            assert!(h.norm().is_one(), "I2({p})");
        }
        // oracle: cos πj/p in floating point
        for j in 0..p {
            let (cs, sn) = cos_sin_pi(j as i64, p);
            let t = std::f64::consts::PI * j as f64 / p as f64;
            assert!((cs.to_c64().0 - t.cos()).abs() < 1e-12);
            assert!((sn.to_c64().0 - t.sin()).abs() < 1e-12);
        }
    }
}

#[test]
fn i2_2_takes_independent_multiplicities() {
    let c = make_coxeter(CoxeterFamily::I2(2), 2, &[3, 5]).unwrap();
    let mut ms: Vec<u32> = c.hyperplanes().iter().map(|h| h.multiplicity).collect();
    ms.sort();
    assert_eq!(ms, vec![3, 5]);
    assert!(linalg::dot(&c.hyperplanes()[0].normal, &c.hyperplanes()[1].normal).is_zero());
}

#[test]
fn i2_3_is_a2_up_to_rotation() {
    let c = make_coxeter(CoxeterFamily::I2(3), 2, &[2]).unwrap();
    let a2 = make_coxeter(CoxeterFamily::A, 2, &[2]).unwrap();
    // Gram matrices agree up to the scale (α,α) = 2 and signs of normals
    let g = c.gram();
    let ga = a2.gram();
    for (i, row) in g.iter().enumerate() {
        assert_eq!(row[i].scale_int(2), ga[i][i]);
        for (j, gij) in row.iter().enumerate() {
            if i != j {
                let x = gij.scale_int(2);
                assert!(x == TowerScalar::one() || x == TowerScalar::from_int(-1));
            }
        }
    }
    assert!(make_coxeter(CoxeterFamily::I2(3), 2, &[1, 2]).is_err());
}

#[test]
fn deformed_an_examples() {
    let a = deformed_an(2, 1).unwrap();
    assert_eq!(a.len(), 3);
    assert!(a.hyperplanes().iter().all(|h| h.multiplicity == 1));

    let c = deformed_an(2, 2).unwrap();
    let r2 = s("r2");
    let mut found = 0;
    for h in c.hyperplanes() {
        if h.normal == vs(&["1", "-1", "0"]) {
            assert_eq!(h.multiplicity, 2);
            found += 1;
        } else {
            assert_eq!(h.multiplicity, 1);
            assert_eq!(h.normal[2], r2.neg());
            found += 1;
        }
    }
    assert_eq!(found, 3);

    let n = deformed_an(2, -2).unwrap();
    let leg = s("i*r2").neg();
    for h in n.hyperplanes() {
        assert_eq!(h.multiplicity, 1);
        if h.normal[2] != TowerScalar::zero() {
            assert_eq!(h.normal[2], leg);
        }
    }
    assert!(deformed_an(2, 0).is_err());
    assert!(deformed_an(2, -1).is_err());
}

#[test]
fn deformed_cn_examples() {
    let c = deformed_cn(1, 1, 1).unwrap();
    let cox = make_coxeter(CoxeterFamily::C, 2, &[1]).unwrap();
    assert_eq!(c.len(), 4);
    assert_eq!(c.canonical(), cox.canonical());

    let k3 = deformed_cn(1, 1, 0).unwrap();
    assert_eq!(
        normals(&k3),
        vec![vs(&["1", "-r3"]), vs(&["1", "r3"]), vs(&["2", "0"])]
    );
    assert!(k3.hyperplanes().iter().all(|h| h.multiplicity == 1));
    assert!(matches!(
        deformed_cn(2, 2, 1),
        Err(ConfigError::InvalidParameters(_))
    ));
}

#[test]
fn validation_errors() {
    let iso = Hyperplane::linear(vs(&["1", "i"]), 1);
    assert_eq!(
        Configuration::new(2, vec![iso]),
        Err(ConfigError::Isotropic(0))
    );
    let a = Hyperplane::linear(vs(&["1", "1"]), 1);
    let b = Hyperplane::linear(vs(&["2", "2"]), 2);
    assert_eq!(
        Configuration::new(2, vec![a.clone(), b]),
        Err(ConfigError::Conflict(0, 1))
    );
    let b = Hyperplane::linear(vs(&["-3", "-3"]), 1);
    assert_eq!(Configuration::new(2, vec![a.clone(), b]).unwrap().len(), 1);
    let w = Hyperplane::linear(vs(&["1"]), 1);
    assert!(matches!(
        Configuration::new(2, vec![w]),
        Err(ConfigError::WrongLength { .. })
    ));
    assert_eq!(
        Configuration::new(2, vec![Hyperplane::linear(vs(&["0", "0"]), 1)]),
        Err(ConfigError::ZeroNormal(0))
    );
}

#[test]
fn tower_covers_entries() {
    let c = deformed_an(2, 2).unwrap();
    assert!(c.tower().contains_radical(2));
    let c = deformed_cn(1, 1, 0).unwrap();
    assert!(c.tower().contains_radical(3));
}

#[test]
fn json_round_trip() {
    let c = deformed_an(3, 2).unwrap();
    let text = c.to_json();
    assert_eq!(Configuration::from_json(&text).unwrap(), c);
    let c5 = make_coxeter(CoxeterFamily::I2(5), 2, &[1]).unwrap();
    let text = c5.to_json();
    assert!(text.contains("cyclotomic_order"));
    assert_eq!(Configuration::from_json(&text).unwrap(), c5);
}

#[test]
fn json_errors_carry_positions() {
    let bad = "{\"dimension\": 1,\n \"tower\": [],\n \"hyperplanes\": [{\"normal\": [\"r2\"], \"offset\": \"0\", \"multiplicity\": 1}]}";
    match Configuration::from_json(bad) {
        Err(ConfigError::Parse { line, column, .. }) => {
            assert_eq!(line, 3);
            // the literal opens at column 30; "r2" starts one later
            assert_eq!(column, 31);
        }
        other => panic!("{other:?}"),
    }
    match Configuration::from_json("{\"dimension\": 1,\n  \"tower\": [}") {
        Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn projectivisation_of_a_point() {
    let c = points_1d(&[(s("-1"), 1)]).unwrap();
    let p = isotropic_projectivisation(&c);
    assert_eq!(p.dimension(), 3);
    assert!(p.is_linear());
    assert_eq!(normals(&p), vec![vs(&["1", "1", "i"])]);

    let lin = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    let p = isotropic_projectivisation(&lin);
    for (h, g) in p.hyperplanes().iter().zip(lin.hyperplanes()) {
        assert_eq!(&h.normal[..3], &g.normal[..]);
        assert!(h.normal[3].is_zero() && h.normal[4].is_zero());
    }
}

fn cube_roots_of_minus_one() -> Configuration {
    // z³ + 1 = 0
    points_1d(&[
        (s("-1"), 1),
        (s("1/2 + 1/2*i*r3"), 1),
        (s("1/2 - 1/2*i*r3"), 1),
    ])
    .unwrap()
}

#[test]
fn projectivisation_preserves_gram() {
    let c = cube_roots_of_minus_one();
    let p = isotropic_projectivisation(&c);
    assert_eq!(p.gram(), c.gram());
    let aff = direct_sum(&c, &points_1d(&[(s("2"), 3)]).unwrap()).unwrap();
    assert_eq!(isotropic_projectivisation(&aff).gram(), aff.gram());
}

#[test]
fn reduction_inverts_projectivisation() {
    let c = cube_roots_of_minus_one();
    let p = isotropic_projectivisation(&c);
    let r = isotropic_reduction(&p, 7).unwrap();
    assert_eq!(r.config.dimension(), 1);
    assert!(related_by_similarity(&c, &r.config));
    // the kernel is spanned by an isotropic vector
    assert_eq!(r.kernel.len(), 1);
    assert!(linalg::dot(&r.kernel[0], &r.kernel[0]).is_zero());
}

#[test]
fn reduction_of_degenerate_triple() {
    let w = s("-1/2 + 1/2*i*r3");
    let w2 = w.mul(&w);
    let i = TowerScalar::i();
    let hs = [TowerScalar::one(), w, w2]
        .into_iter()
        .map(|z| Hyperplane::linear(vec![TowerScalar::one(), z.clone(), z.mul(&i)], 1))
        .collect();
    let c = Configuration::new(3, hs).unwrap();
    let r = isotropic_reduction(&c, 1).unwrap();
    assert_eq!(r.config.len(), 3);
}

#[test]
fn reduction_rejects_nondegenerate() {
    let a2 = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    assert!(matches!(
        isotropic_reduction(&a2, 0),
        Err(ConfigError::NonDegenerate)
    ));
}

#[test]
fn similarity_detects_changed_offsets() {
    let a = points_1d(&[(s("0"), 1), (s("1"), 1), (s("3"), 1)]).unwrap();
    let b = points_1d(&[(s("2"), 1), (s("4"), 1), (s("8"), 1)]).unwrap();
    assert!(related_by_similarity(&a, &b));
    let c = points_1d(&[(s("0"), 1), (s("1"), 1), (s("5"), 1)]).unwrap();
    assert!(!related_by_similarity(&a, &c));
}

#[test]
fn unions() {
    let p = points_1d(&[(s("0"), 1)]).unwrap();
    let q = points_1d(&[(s("1"), 2)]).unwrap();
    let u = orthogonal_union(&p, &q).unwrap();
    assert_eq!(u.dimension(), 2);
    assert_eq!(u.len(), 2);

    let x = Configuration::new(2, vec![Hyperplane::linear(vs(&["1", "0"]), 1)]).unwrap();
    let y = Configuration::new(2, vec![Hyperplane::linear(vs(&["0", "1"]), 4)]).unwrap();
    let i22 = union_in_place(&x, &y).unwrap();
    assert_eq!(
        i22.canonical(),
        make_coxeter(CoxeterFamily::I2(2), 2, &[1, 4])
            .unwrap()
            .canonical()
    );
    let z = Configuration::new(2, vec![Hyperplane::linear(vs(&["1", "1"]), 1)]).unwrap();
    assert_eq!(union_in_place(&x, &z), Err(ConfigError::NotOrthogonal));
}

#[test]
fn plane_decompositions() {
    let a2 = make_coxeter(CoxeterFamily::A, 2, &[1]).unwrap();
    let d = two_dim_decomposition(&a2);
    assert_eq!(d.classes.len(), 1);
    assert_eq!(d.classes[0].indices, vec![0, 1, 2]);

    let i22 = make_coxeter(CoxeterFamily::I2(2), 2, &[1]).unwrap();
    let sum = direct_sum(&i22, &i22).unwrap();
    let d = two_dim_decomposition(&sum);
    let mut sizes: Vec<usize> = d.planes().map(|c| c.indices.len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![2; 6]);
    assert_eq!(d.singletons().count(), 0);

    let a3 = make_coxeter(CoxeterFamily::A, 3, &[1]).unwrap();
    let d = two_dim_decomposition(&a3);
    // four A₂ planes and three A₁×A₁ planes
    let mut sizes: Vec<usize> = d.planes().map(|c| c.indices.len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![2, 2, 2, 3, 3, 3, 3]);

    let one = Configuration::new(2, vec![Hyperplane::linear(vs(&["1", "0"]), 1)]).unwrap();
    let d = two_dim_decomposition(&one);
    assert_eq!(d.singletons().count(), 1);
}
