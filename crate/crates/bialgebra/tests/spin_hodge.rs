use bialgebra::blade::{self, parity};
use bialgebra::error::Error;
use bialgebra::hodge::{
    exterior_metric_block, minor_block, scalar_product, star, star_clifford, star_inv, volume,
};
use bialgebra::metric::{determinant, Metric};
use bialgebra::multivector::Multivector;
use bialgebra::sample;
use bialgebra::spin::{adjoint_action, factor_isometry, is_spin_member, isometry_of, SpinElement};
use bialgebra::table::ProductTable;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn close(a: &Multivector, b: &Multivector, tol: f64) -> bool {
    a.distance(b) <= tol * a.norm_max().max(b.norm_max()).max(1.0)
}

fn setup(seed: u64, n: usize, negative: usize) -> (sample::SampleRng, Metric, ProductTable) {
    let mut rng = sample::rng(seed);
    let metric = sample::metric_with_signature(&mut rng, n, negative.min(n));
    let table = ProductTable::new(&metric).unwrap();
    (rng, metric, table)
}

#[test]
fn plane_rotation_from_half_angle_element() {
    let table = ProductTable::new(&Metric::euclidean(2).unwrap()).unwrap();
    for theta in [0.3f64, 1.1, -2.4] {
        let f = Multivector::scalar(2, Complex64::new((theta / 2.0).cos(), 0.0))
            - Multivector::blade(2, 0b11) * (theta / 2.0).sin();
        assert!(is_spin_member(&f, &table));
        let p = isometry_of(&f, &table);
        let expected =
            DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
        assert!((p - expected).amax() < 1e-14);
    }
}

#[test]
fn membership_predicate() {
    let table = ProductTable::new(&Metric::minkowski()).unwrap();
    let e = Multivector::scalar(4, 1.0.into());
    assert!(is_spin_member(&e, &table));
    assert!(!is_spin_member(&Multivector::generator(4, 0), &table));
    assert!(!is_spin_member(&(e.clone() * 2.0), &table));
    assert!(!is_spin_member(&(e.clone() * Complex64::i()), &table));
    assert!(SpinElement::new(Multivector::generator(4, 1), &table).is_err());
}

#[test]
fn kernel_is_plus_minus_unit() {
    let table = ProductTable::new(&Metric::euclidean(3).unwrap()).unwrap();
    let e = Multivector::scalar(3, 1.0.into());
    let id = DMatrix::<f64>::identity(3, 3);
    assert!((isometry_of(&-e.clone(), &table) - &id).amax() < 1e-15);
    let back = factor_isometry(&id, &table).unwrap().into_value();
    assert!(close(&back, &e, 1e-12));
    let f = table
        .exp(&(Multivector::wedge_of(3, &[0, 1]) * 0.4))
        .unwrap();
    assert!((isometry_of(&f, &table) - &id).amax() > 0.1);
}

#[test]
fn reflections_and_non_isometries() {
    let table = ProductTable::new(&Metric::euclidean(2).unwrap()).unwrap();
    let reflection = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    assert!(matches!(
        factor_isometry(&reflection, &table),
        Err(Error::NotSpinIsometry)
    ));
    let scaling = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
    assert!(factor_isometry(&scaling, &table).is_err());
    assert!(!matches!(
        factor_isometry(&scaling, &table),
        Err(Error::NotSpinIsometry)
    ));
}

#[test]
fn metric_block_closed_forms() {
    let mut rng = sample::rng(17);
    for n in 1..=5 {
        let metric = sample::metric(&mut rng, n);
        let table = ProductTable::new(&metric).unwrap();
        assert_eq!(exterior_metric_block(&table, 0).unwrap()[(0, 0)], 1.0);
        assert!((exterior_metric_block(&table, 1).unwrap() - metric.upper()).amax() < 1e-14);
        let top = exterior_metric_block(&table, n).unwrap()[(0, 0)];
        assert!((top - metric.upper().clone().lu().determinant()).abs() < 1e-12);
        assert!(exterior_metric_block(&table, n + 1).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spin_element_properties(seed in any::<u64>(), n in 2usize..=4, negative in 0usize..=4) {
        let (mut rng, metric, table) = setup(seed, n, negative);
        let f = sample::spin_element(&mut rng, &table, 0.6);
        let e = Multivector::scalar(n, 1.0.into());
        prop_assert!(is_spin_member(&f, &table));
        prop_assert!(close(&table.mul(&f, &f.star_conj()), &e, 1e-10));
        let u = sample::multivector(&mut rng, n, true);
        let v = sample::multivector(&mut rng, n, true);
        let lu = adjoint_action(&f, &u, &table);
        prop_assert!(close(&adjoint_action(&e, &u, &table), &u, 1e-12));
        for k in 0..=n {
            prop_assert!(close(&lu.grade_part(k), &adjoint_action(&f, &u.grade_part(k), &table), 1e-9));
        }
        let before = scalar_product(&u, &v, &table);
        let after = scalar_product(&lu, &adjoint_action(&f, &v, &table), &table);
        prop_assert!((before - after).norm() < 1e-9 * before.norm().max(1.0));
        let p = isometry_of(&f, &table);
        prop_assert!(metric.is_isometry(&p).unwrap());
        prop_assert!((determinant(&p) - 1.0).abs() < 1e-9);
        let back = factor_isometry(&p, &table).unwrap().into_value();
        prop_assert!(close(&back, &f, 1e-8) || close(&back, &-f.clone(), 1e-8));
    }

    #[test]
    fn isometry_of_is_a_homomorphism(seed in any::<u64>(), n in 2usize..=4, negative in 0usize..=4) {
        let (mut rng, _, table) = setup(seed, n, negative);
        let f = sample::spin_element(&mut rng, &table, 0.6);
        let g = sample::spin_element(&mut rng, &table, 0.6);
        let fg = table.mul(&f, &g);
        prop_assert!(is_spin_member(&fg, &table));
        let lhs = isometry_of(&fg, &table);
        let rhs = isometry_of(&f, &table) * isometry_of(&g, &table);
        prop_assert!((lhs - rhs).amax() < 1e-9);
    }

    #[test]
    fn star_identities(seed in any::<u64>(), n in 1usize..=5, negative in 0usize..=5) {
        let (mut rng, metric, table) = setup(seed, n, negative);
        let s = metric.sign();
        let vol = volume(&metric);
        let e = Multivector::scalar(n, 1.0.into());
        prop_assert!(close(&star(&e, &metric), &vol, 1e-12));
        prop_assert!(close(&table.mul(&vol, &vol.star_conj()), &(e.clone() * s), 1e-12));
        prop_assert!(close(&table.mul(&vol, &vol), &(e * (parity(n * (n - 1) / 2) * s)), 1e-12));
        for k in 0..=n {
            let u = sample::form(&mut rng, n, k, true);
            let su = star(&u, &metric);
            prop_assert!(close(&su, &star_clifford(&u, &table), 1e-12));
            prop_assert!(close(&star(&su, &metric), &(u.clone() * (parity(k * (n + 1)) * s)), 1e-12));
            prop_assert!(close(&star_inv(&su, &metric), &u, 1e-12));
            prop_assert!(close(&table.mul(&vol, &u), &(table.mul(&u, &vol) * parity(k * (n + 1))), 1e-12));
        }
    }

    #[test]
    fn metric_blocks_are_minor_matrices(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = sample::rng(seed);
        let metric = sample::metric(&mut rng, n);
        let table = ProductTable::new(&metric).unwrap();
        for k in 0..=n {
            let block = exterior_metric_block(&table, k).unwrap();
            prop_assert!((&block - minor_block(&metric, k)).amax() < 1e-10);
            prop_assert_eq!(block.nrows(), blade::blades_of_grade(n, k).len());
        }
        let positive = sample::metric_with_signature(&mut rng, n, 0);
        let pt = ProductTable::new(&positive).unwrap();
        for k in 0..=n {
            prop_assert!(exterior_metric_block(&pt, k).unwrap().cholesky().is_some());
        }
    }

    #[test]
    fn isometries_form_a_group(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = sample::rng(seed);
        let metric = sample::metric(&mut rng, n);
        let table = ProductTable::new(&metric).unwrap();
        let p = isometry_of(&sample::spin_element(&mut rng, &table, 0.5), &table);
        let q = isometry_of(&sample::spin_element(&mut rng, &table, 0.5), &table);
        prop_assert!(metric.is_isometry(&(&p * &q)).unwrap());
        prop_assert!(metric.is_isometry(&DMatrix::identity(n, n)).unwrap());
        prop_assert!(!metric.is_isometry(&(DMatrix::identity(n, n) * 1.5)).unwrap());
    }
}
