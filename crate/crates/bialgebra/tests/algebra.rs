use bialgebra::blade::{self, Basis, Blade};
use bialgebra::decomposition::{clifford_via_star, com};
use bialgebra::hodge::{scalar_product, trace};
use bialgebra::metric::Metric;
use bialgebra::multivector::{basis_convert, Multivector};
use bialgebra::sample;
use bialgebra::table::ProductTable;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn close(a: &Multivector, b: &Multivector) -> bool {
    a.distance(b) <= TOL * a.norm_max().max(b.norm_max()).max(1.0)
}

/// Clifford product computed in an orthogonal eigenbasis of `g^{ij}`, where blades multiply
/// by the sign rule, then mapped back through the exterior powers of the eigenvectors.
struct EigenOracle {
    n: usize,
    q: DMatrix<f64>,
    lambda: Vec<f64>,
}

impl EigenOracle {
    fn new(metric: &Metric) -> Self {
        let eig = SymmetricEigen::new(metric.upper().clone());
        EigenOracle {
            n: metric.dim(),
            q: eig.eigenvectors,
            lambda: eig.eigenvalues.iter().copied().collect(),
        }
    }

    fn minor(&self, rows: Blade, cols: Blade) -> f64 {
        let r = blade::indices(rows);
        let k = r.len();
        if k == 0 {
            return 1.0;
        }
        let cl = blade::indices(cols);
        DMatrix::from_fn(k, k, |i, j| self.q[(r[i], cl[j])]).determinant()
    }

    fn change(&self, u: &[Complex64], forward: bool) -> Vec<Complex64> {
        let size = 1usize << self.n;
        let mut out = vec![c(0.0); size];
        for (a, &x) in u.iter().enumerate() {
            if x == c(0.0) {
                continue;
            }
            for (b, slot) in out.iter_mut().enumerate() {
                if (a as Blade).count_ones() == (b as Blade).count_ones() {
                    let m = if forward {
                        self.minor(a as Blade, b as Blade)
                    } else {
                        self.minor(b as Blade, a as Blade)
                    };
                    *slot += x * m;
                }
            }
        }
        out
    }

    fn mul(&self, u: &Multivector, v: &Multivector) -> Multivector {
        let (fu, fv) = (self.change(u.coeffs(), true), self.change(v.coeffs(), true));
        let mut w = vec![c(0.0); 1 << self.n];
        for (a, &x) in fu.iter().enumerate() {
            for (b, &y) in fv.iter().enumerate() {
                let (a, b) = (a as Blade, b as Blade);
                let swaps: u32 = blade::bits(a)
                    .map(|i| (b & ((1 << i) - 1)).count_ones())
                    .sum();
                let mut factor = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
                for i in blade::bits(a & b) {
                    factor *= self.lambda[i];
                }
                w[(a ^ b) as usize] += x * y * factor;
            }
        }
        Multivector::from_coeffs(self.n, self.change(&w, false))
    }
}

fn random_setup(seed: u64, n: usize) -> (sample::SampleRng, Metric, ProductTable) {
    let mut rng = sample::rng(seed);
    let metric = sample::metric(&mut rng, n);
    let table = ProductTable::new(&metric).unwrap();
    (rng, metric, table)
}

#[test]
fn metric_constructor_examples() {
    let m = Metric::diagonal(&[1.0, -1.0, -1.0, 1.0]).unwrap();
    assert_eq!((m.sign(), m.sqrt_abs_det()), (1.0, 1.0));
    let mink = Metric::minkowski();
    assert_eq!((mink.sign(), mink.sqrt_abs_det()), (-1.0, 1.0));
    let m = Metric::from_upper_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let expected = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 2.0]);
    assert!((m.lower() - expected).amax() < 1e-15);
    assert!((m.det_lower() - 1.0).abs() < 1e-15);
}

#[test]
fn metric_constructor_rejects_bad_input() {
    assert!(Metric::from_upper_rows(&[vec![1.0, 0.0], vec![0.5, 1.0]]).is_err());
    assert!(Metric::from_upper_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
    assert!(Metric::from_upper_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).is_err());
    assert!(Metric::from_json_str(
        r#"{"dim": 2, "g_upper": [[1, 0], [0, 1]], "g_lower": [[1, 0], [0, 1]]}"#
    )
    .is_err());
}

#[test]
fn minors_match_closed_forms_and_lu() {
    let (_, metric, _) = random_setup(1, 4);
    let g = |i: usize, j: usize| metric.g(i, j);
    let two = metric.minor(&[0, 2], &[1, 3]).unwrap();
    assert!((two - (g(0, 1) * g(2, 3) - g(2, 1) * g(0, 3))).abs() < 1e-14);
    assert!((metric.minor(&[2], &[2]).unwrap() - g(2, 2)).abs() < 1e-15);
    let full = metric.minor(&[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
    assert!((full - metric.upper().clone().lu().determinant()).abs() < 1e-12);
    assert!(metric.minor(&[1, 0], &[0, 1]).is_err());
    assert!(metric.minor(&[0, 4], &[0, 1]).is_err());
}

#[test]
fn worked_example_products() {
    for seed in 0..20 {
        let (_, metric, table) = random_setup(seed, 4);
        let g = |i: usize, j: usize| c(metric.g(i - 1, j - 1));
        let w = |idx: &[usize]| {
            Multivector::wedge_of(4, &idx.iter().map(|i| i - 1).collect::<Vec<_>>())
        };
        // (e1^e3)(e2^e3)
        let lhs = table.mul(&w(&[1, 3]), &w(&[2, 3]));
        let rhs = w(&[1, 2]) * -g(3, 3) + w(&[1, 3]) * g(2, 3) - w(&[2, 3]) * g(1, 3)
            + w(&[]) * (g(1, 3) * g(2, 3) - g(1, 2) * g(3, 3));
        assert!(close(&lhs, &rhs), "seed {seed}");

        // Clifford-basis coordinates: e^{13} e^{234} = -g^{33} e^{124} + 2 g^{23} e^{134}
        let cl = |idx: &[usize]| {
            let b = idx.iter().fold(0, |acc, i| acc | (1 << (i - 1)));
            Multivector::from_clifford_coords(&metric, Multivector::blade(4, b).coeffs())
        };
        let lhs = table.mul(&cl(&[1, 3]), &cl(&[2, 3, 4]));
        let rhs = cl(&[1, 2, 4]) * -g(3, 3) + cl(&[1, 3, 4]) * (g(2, 3) * 2.0);
        assert!(close(&lhs, &rhs), "seed {seed}");

        // e^{13} ∧ e^{23} = g^{23} e^{13} + g^{13} e^{23} - g^{13} g^{23} e
        let lhs = cl(&[1, 3]).wedge(&cl(&[2, 3]));
        let rhs = cl(&[1, 3]) * g(2, 3) + cl(&[2, 3]) * g(1, 3) - cl(&[]) * (g(1, 3) * g(2, 3));
        assert!(close(&lhs, &rhs), "seed {seed}");

        // e^{i1 i2} = e^{i1} ∧ e^{i2} + g^{i1 i2} e and the three-index expansion
        assert!(close(&cl(&[2, 4]), &(w(&[2, 4]) + w(&[]) * g(2, 4))));
        let three = w(&[1, 2, 3]) + w(&[1]) * g(2, 3) - w(&[2]) * g(1, 3) + w(&[3]) * g(1, 2);
        assert!(close(&cl(&[1, 2, 3]), &three));
    }
}

#[test]
fn named_small_algebras() {
    let complex = ProductTable::new(&Metric::diagonal(&[-1.0]).unwrap()).unwrap();
    let i = Multivector::generator(1, 0);
    assert!(close(
        &complex.mul(&i, &i),
        &Multivector::scalar(1, c(-1.0))
    ));

    let quat = ProductTable::new(&Metric::diagonal(&[-1.0, -1.0]).unwrap()).unwrap();
    let (i, j) = (Multivector::generator(2, 0), Multivector::generator(2, 1));
    let k = quat.mul(&i, &j);
    let minus_one = Multivector::scalar(2, c(-1.0));
    for x in [&i, &j, &k] {
        assert!(close(&quat.mul(x, x), &minus_one));
    }
    assert!(close(&quat.mul(&j, &k), &i));
    assert!(close(&quat.mul(&k, &i), &j));
    assert!(close(&quat.mul_all(&[&i, &j, &k]), &minus_one));
}

#[test]
fn diagonal_metric_bases_coincide() {
    let metric = Metric::diagonal(&[2.0, -0.5, 1.5, -1.0]).unwrap();
    for b in 0..16 {
        let u = Multivector::blade(4, b);
        assert_eq!(
            basis_convert(u.coeffs(), Basis::Grassmann, Basis::Clifford, &metric),
            u.coeffs()
        );
    }
}

#[test]
fn exponential_of_plane_bivector() {
    let table = ProductTable::new(&Metric::euclidean(2).unwrap()).unwrap();
    let theta = 0.83;
    let got = table.exp(&(Multivector::blade(2, 0b11) * theta)).unwrap();
    let expected =
        Multivector::scalar(2, c(theta.cos())) + Multivector::blade(2, 0b11) * theta.sin();
    assert!(close(&got, &expected));
    assert!(close(
        &table.exp(&Multivector::zero(2)).unwrap(),
        &Multivector::scalar(2, c(1.0))
    ));
}

#[test]
fn scalar_products_of_blades() {
    let (_, metric, table) = random_setup(9, 4);
    let g = |i: usize, j: usize| metric.g(i, j);
    let sp = scalar_product(
        &Multivector::wedge_of(4, &[0, 2]),
        &Multivector::wedge_of(4, &[1, 3]),
        &table,
    );
    assert!((sp - c(g(0, 1) * g(2, 3) - g(2, 1) * g(0, 3))).norm() < 1e-14);
    let cross = scalar_product(
        &Multivector::wedge_of(4, &[0, 2]),
        &Multivector::wedge_of(4, &[1]),
        &table,
    );
    assert!(cross.norm() < 1e-15);
    assert_eq!(trace(&Multivector::scalar(4, c(1.0))), c(1.0));
}

#[test]
fn commutator_of_basis_two_forms() {
    let (_, metric, _) = random_setup(4, 4);
    let g = |i: usize, j: usize| c(metric.g(i, j));
    let w = |a: usize, b: usize| Multivector::wedge_of(4, &[a, b]);
    let (i1, i2, j1, j2) = (0, 2, 1, 3);
    let got = com(&w(i1, i2), &w(j1, j2), &metric).unwrap();
    let expected = w(i2, j2) * (g(i1, j1) * -2.0) - w(i1, j1) * (g(i2, j2) * 2.0)
        + w(i2, j1) * (g(i1, j2) * 2.0)
        + w(i1, j2) * (g(i2, j1) * 2.0);
    assert!(close(&got, &expected));
    assert!(com(&w(0, 1), &Multivector::generator(4, 0), &metric).is_err());
}

#[test]
fn star_decomposition_limits() {
    let metric = Metric::euclidean(5).unwrap();
    let u = Multivector::generator(5, 0);
    assert!(clifford_via_star(&u, &u, &metric).is_err());
    let metric = Metric::euclidean(3).unwrap();
    let mixed = Multivector::generator(3, 0) + Multivector::scalar(3, c(1.0));
    assert!(clifford_via_star(&mixed, &mixed, &metric).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_matches_eigenbasis_oracle(seed in any::<u64>(), n in 1usize..=4) {
        let (mut rng, metric, table) = random_setup(seed, n);
        let oracle = EigenOracle::new(&metric);
        let u = sample::multivector(&mut rng, n, true);
        let v = sample::multivector(&mut rng, n, true);
        prop_assert!(close(&table.mul(&u, &v), &oracle.mul(&u, &v)));
    }

    #[test]
    fn products_are_associative(seed in any::<u64>(), n in 1usize..=5) {
        let (mut rng, _, table) = random_setup(seed, n);
        let [u, v, w] = [0; 3].map(|_| sample::multivector(&mut rng, n, true));
        prop_assert!(close(&table.mul(&table.mul(&u, &v), &w), &table.mul(&u, &table.mul(&v, &w))));
        prop_assert!(close(&u.wedge(&v).wedge(&w), &u.wedge(&v.wedge(&w))));
        let e = Multivector::scalar(n, c(1.0));
        prop_assert!(close(&table.mul(&e, &u), &u));
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), n in 1usize..=5, r in 0usize..=5, s in 0usize..=5) {
        let (mut rng, _, _) = random_setup(seed, n);
        let (r, s) = (r.min(n), s.min(n));
        let u = sample::form(&mut rng, n, r, true);
        let v = sample::form(&mut rng, n, s, true);
        prop_assert!(close(&u.wedge(&v), &(v.wedge(&u) * blade::parity(r * s))));
        if r + s > n {
            prop_assert!(u.wedge(&v).norm_max() == 0.0);
        }
    }

    #[test]
    fn generators_anticommute_to_the_metric(seed in any::<u64>(), n in 1usize..=6) {
        let (mut rng, metric, table) = random_setup(seed, n);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (Multivector::generator(n, i), Multivector::generator(n, j));
                let sum = table.mul(&a, &b) + table.mul(&b, &a);
                prop_assert!(close(&sum, &Multivector::scalar(n, c(2.0 * metric.g(i, j)))));
            }
        }
        let u = sample::form(&mut rng, n, 1, false);
        let q: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| metric.g(i, j) * u.coeff(1 << i).re * u.coeff(1 << j).re).sum();
        prop_assert!(close(&table.mul(&u, &u), &Multivector::scalar(n, c(q))));
    }

    #[test]
    fn one_form_times_k_form_has_two_grades(seed in any::<u64>(), n in 2usize..=5, k in 0usize..=5) {
        let (mut rng, _, table) = random_setup(seed, n);
        let k = k.min(n);
        let p = table.mul(&sample::form(&mut rng, n, 1, true), &sample::form(&mut rng, n, k, true));
        for j in 0..=n {
            if j + 1 != k && j != k + 1 {
                prop_assert!(p.grade_part(j).norm_max() < TOL);
            }
        }
    }

    #[test]
    fn even_part_is_a_subalgebra(seed in any::<u64>(), n in 1usize..=5) {
        let (mut rng, _, table) = random_setup(seed, n);
        let even = |m: Multivector| m.map_blades(|b, x| if blade::grade(b).is_multiple_of(2) { x } else { c(0.0) });
        let u = even(sample::multivector(&mut rng, n, true));
        let v = even(sample::multivector(&mut rng, n, true));
        let p = table.mul(&u, &v);
        prop_assert!(close(&p, &even(p.clone())));
        let w = u.wedge(&v);
        prop_assert!(close(&w, &even(w.clone())));
    }

    #[test]
    fn involutions(seed in any::<u64>(), n in 1usize..=5) {
        let (mut rng, _, table) = random_setup(seed, n);
        let u = sample::multivector(&mut rng, n, true);
        let v = sample::multivector(&mut rng, n, true);
        prop_assert!(close(&table.mul(&u, &v).star_conj(), &table.mul(&v.star_conj(), &u.star_conj())));
        prop_assert!(close(&u.star_conj().star_conj(), &u));
        let real = sample::multivector(&mut rng, n, false);
        prop_assert!(close(&real.star_conj(), &real.reversion()));
        let total = (0..=n).fold(Multivector::zero(n), |acc, k| acc + u.grade_part(k));
        prop_assert!(close(&total, &u));
    }

    #[test]
    fn trace_identities(seed in any::<u64>(), n in 1usize..=5) {
        let (mut rng, _, table) = random_setup(seed, n);
        let a = sample::multivector(&mut rng, n, true);
        let b = sample::spin_element(&mut rng, &table, 0.5);
        let comm = trace(&(table.mul(&a, &b) - table.mul(&b, &a)));
        prop_assert!(comm.norm() < TOL);
        let conj = trace(&table.mul_all(&[&b.star_conj(), &a, &b]));
        prop_assert!((conj - trace(&a)).norm() < TOL * trace(&a).norm().max(1.0));
        let u = sample::multivector(&mut rng, n, true);
        prop_assert!((scalar_product(&a, &u, &table) - scalar_product(&u, &a, &table).conj()).norm() < TOL);
    }

    #[test]
    fn two_form_commutator(seed in any::<u64>(), n in 2usize..=5) {
        let (mut rng, metric, table) = random_setup(seed, n);
        let [u, v, w] = [0; 3].map(|_| sample::form(&mut rng, n, 2, true));
        let uv = com(&u, &v, &metric).unwrap();
        prop_assert!(close(&uv, &table.commutator(&u, &v)));
        prop_assert!(close(&uv, &uv.grade_part(2)));
        prop_assert!(com(&u, &u, &metric).unwrap().norm_max() < TOL);
        let jacobi = com(&u, &com(&v, &w, &metric).unwrap(), &metric).unwrap()
            + com(&v, &com(&w, &u, &metric).unwrap(), &metric).unwrap()
            + com(&w, &com(&u, &v, &metric).unwrap(), &metric).unwrap();
        prop_assert!(jacobi.norm_max() < 1e-9);
    }

    #[test]
    fn exponential_inverse(seed in any::<u64>(), n in 1usize..=4) {
        let (mut rng, _, table) = random_setup(seed, n);
        let u = sample::multivector(&mut rng, n, true) * 0.3;
        let e = Multivector::scalar(n, c(1.0));
        prop_assert!(close(&table.mul(&table.exp(&u).unwrap(), &table.exp(&-u.clone()).unwrap()), &e));
    }

    #[test]
    fn basis_conversion_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let (mut rng, metric, _) = random_setup(seed, n);
        let u = sample::multivector(&mut rng, n, true);
        let there = basis_convert(u.coeffs(), Basis::Grassmann, Basis::Clifford, &metric);
        let back = Multivector::from_coeffs(n, basis_convert(&there, Basis::Clifford, Basis::Grassmann, &metric));
        prop_assert!(close(&back, &u));
    }

    #[test]
    fn star_decomposition_matches_product(seed in any::<u64>(), n in 2usize..=4, ku in 0usize..=4, kv in 0usize..=4) {
        let (mut rng, metric, table) = random_setup(seed, n);
        let u = sample::form(&mut rng, n, ku.min(n), true);
        let v = sample::form(&mut rng, n, kv.min(n), true);
        prop_assert!(close(&clifford_via_star(&u, &v, &metric).unwrap(), &table.mul(&u, &v)));
    }

    #[test]
    fn minors_are_symmetric(seed in any::<u64>(), n in 2usize..=5) {
        let (_, metric, _) = random_setup(seed, n);
        let rows: Vec<usize> = (0..n).step_by(2).collect();
        let cols: Vec<usize> = (0..rows.len()).map(|i| i + n - rows.len()).collect();
        prop_assert!((metric.minor(&rows, &cols).unwrap() - metric.minor(&cols, &rows).unwrap()).abs() < 1e-12);
        let id = metric.upper() * metric.lower();
        prop_assert!((id - DMatrix::identity(n, n)).amax() < 1e-12);
    }
}
