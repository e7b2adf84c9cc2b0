mod common;

use common::{basis_eval, cfg0, eval, hermite_series, phi, Oracle};
use proptest::prelude::*;
use superclt::moments::semigroup_apply;
use superclt::spectral::{
    classify, eigenfunction_eval, eigenvalue, inner_product, multiplicity, project, triple_product, Gamma, Regime,
};
use superclt::{EigenIndex, Error, SpectralFunction, SuperOUConfig};

fn cfg2() -> SuperOUConfig {
    SuperOUConfig::new(2, 1.0, 2.0, 2.0, 1.0, 1.0).unwrap().with_max_order(6).unwrap()
}

#[test]
fn eigenfunctions_are_orthonormal_in_one_dimension() {
    let cfg = cfg0();
    let oracle = Oracle::new(40, 20);
    for i in 0..=12u32 {
        for j in 0..=12u32 {
            let (a, b) = (EigenIndex::new(vec![i]), EigenIndex::new(vec![j]));
            let ip = oracle.stationary(&cfg, |x| {
                eigenfunction_eval(&cfg, &a, x).unwrap() * eigenfunction_eval(&cfg, &b, x).unwrap()
            });
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((ip - expected).abs() < 1e-10, "<phi_{i}, phi_{j}> = {ip}");
        }
    }
}

#[test]
fn eigenfunctions_are_orthonormal_in_two_dimensions() {
    let cfg = cfg2();
    let oracle = Oracle::new(20, 20);
    let all: Vec<EigenIndex> = (0..=4).flat_map(|k| EigenIndex::of_order(2, k)).collect();
    for a in &all {
        for b in &all {
            let ip = oracle.stationary(&cfg, |x| {
                eigenfunction_eval(&cfg, a, x).unwrap() * eigenfunction_eval(&cfg, b, x).unwrap()
            });
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!((ip - expected).abs() < 1e-10, "<{a}, {b}> = {ip}");
        }
    }
}

#[test]
fn library_eigenfunctions_match_series_hermite() {
    let cfg = cfg0();
    for n in 0..=12u32 {
        for &x in &[-3.1, -0.4, 0.0, 0.9, 2.5] {
            let got = eigenfunction_eval(&cfg, &EigenIndex::new(vec![n]), &[x]).unwrap();
            let want = hermite_series(n, x);
            assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "n={n} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn semigroup_matches_ou_kernel() {
    let cfg = cfg0();
    let oracle = Oracle::new(40, 20);
    let f = phi(1).scaled(0.3).plus(&phi(3)).plus(&phi(5).scaled(-0.7));
    for &t in &[0.1, 0.5, 1.0, 2.0] {
        let tf = semigroup_apply(&f, t, &cfg).unwrap();
        for &x in &[-1.5, 0.0, 0.8] {
            let got = tf.eval(&cfg, &[x]).unwrap();
            let want = oracle.semigroup(&cfg, &f, t, &[x]);
            assert!((got - want).abs() < 1e-8 * want.abs().max(1.0), "t={t} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn eigenvalue_table_cfg0_and_two_dimensions() {
    let cfg = cfg0();
    assert_eq!(eigenvalue(&cfg, 2).unwrap(), -1.0);
    assert_eq!(multiplicity(&cfg, 4).unwrap(), 1);
    let cfg = cfg2();
    for k in 1..=5 {
        assert_eq!(multiplicity(&cfg, k).unwrap(), k as usize);
    }
    assert!(matches!(eigenvalue(&cfg, 8), Err(Error::IndexRange(_))));
}

#[test]
fn projection_recovers_polynomials() {
    let cfg = cfg0();
    // x³ = s³(He_3 + 3 He_1) with s = 1: √6 φ_3 + 3 φ_1.
    let f = project(|x| x[0].powi(3), 6, &cfg).unwrap();
    assert!((f.coeff(&EigenIndex::new(vec![3])) - 6f64.sqrt()).abs() < 1e-12);
    assert!((f.coeff(&EigenIndex::new(vec![1])) - 3.0).abs() < 1e-12);
    assert_eq!(f.len(), 2);
}

#[test]
fn triple_product_matches_quadrature() {
    let cfg = cfg0();
    let oracle = Oracle::new(40, 20);
    for a in 0..6u32 {
        for b in 0..6u32 {
            for c in 0..6u32 {
                let (i, j, k) = (EigenIndex::new(vec![a]), EigenIndex::new(vec![b]), EigenIndex::new(vec![c]));
                let want = oracle.stationary(&cfg, |x| basis_eval(&cfg, &i, x) * basis_eval(&cfg, &j, x) * basis_eval(&cfg, &k, x));
                let got = triple_product(&cfg, &i, &j, &k).unwrap();
                assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "({a},{b},{c}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn product_expansion_matches_pointwise_product() {
    let cfg = cfg2();
    let f = SpectralFunction::from_terms([(EigenIndex::new(vec![1, 0]), 1.0), (EigenIndex::new(vec![0, 2]), -0.5)]);
    let g = SpectralFunction::from_terms([(EigenIndex::new(vec![1, 1]), 2.0), (EigenIndex::new(vec![0, 0]), 0.25)]);
    let fg = f.product(&g, &cfg).unwrap();
    for x in [[0.3, -1.2], [1.7, 0.4], [-0.5, 2.2]] {
        let want = eval(&cfg, &f, &x) * eval(&cfg, &g, &x);
        assert!((fg.eval(&cfg, &x).unwrap() - want).abs() < 1e-12);
    }
}

fn small_function() -> impl Strategy<Value = SpectralFunction> {
    prop::collection::vec((0u32..8, -2.0f64..2.0), 0..5)
        .prop_map(|terms| SpectralFunction::from_terms(terms.into_iter().map(|(n, v)| (EigenIndex::new(vec![n]), v))))
}

proptest! {
    #[test]
    fn triple_product_is_symmetric_with_parity(a in 0u32..10, b in 0u32..10, c in 0u32..10) {
        let cfg = cfg0();
        let (i, j, k) = (EigenIndex::new(vec![a]), EigenIndex::new(vec![b]), EigenIndex::new(vec![c]));
        let v = triple_product(&cfg, &i, &j, &k).unwrap();
        prop_assert_eq!(v, triple_product(&cfg, &j, &i, &k).unwrap());
        prop_assert_eq!(v, triple_product(&cfg, &k, &j, &i).unwrap());
        prop_assert_eq!(v, triple_product(&cfg, &i, &k, &j).unwrap());
        if (a + b + c) % 2 == 1 || a > b + c || b > a + c || c > a + b {
            prop_assert_eq!(v, 0.0);
        } else {
            prop_assert!(v > 0.0);
        }
    }

    #[test]
    fn classification_partitions_the_function(f in small_function()) {
        let cfg = cfg0();
        let c = classify(&f, &cfg);
        let rebuilt = c.large.plus(&c.critical).plus(&c.small);
        prop_assert_eq!(rebuilt, f.clone());
        prop_assert!(inner_product(&c.large, &c.critical) == 0.0);
        prop_assert!(inner_product(&c.large, &c.small) == 0.0);
        prop_assert!(inner_product(&c.critical, &c.small) == 0.0);
        match c.gamma {
            Gamma::Infinite => prop_assert_eq!(c.regime, Regime::Zero),
            Gamma::Finite(k) => {
                prop_assert!(f.indices().all(|i| i.level() >= k));
                prop_assert!(!c.leading.is_zero());
                prop_assert!(c.leading.indices().all(|i| i.level() == k));
            }
        }
    }

    #[test]
    fn inner_product_is_bilinear(f in small_function(), g in small_function(), s in -3.0f64..3.0) {
        let lhs = inner_product(&f.scaled(s).plus(&g), &g);
        let rhs = s * inner_product(&f, &g) + inner_product(&g, &g);
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn labels_round_trip(n1 in 0u32..6, n2 in 0u32..6) {
        let idx = EigenIndex::new(vec![n1, n2]);
        let (k, j) = idx.label();
        prop_assert_eq!(EigenIndex::from_label(2, k, j).unwrap(), idx);
    }
}
