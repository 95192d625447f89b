//! Spin group membership, the adjoint action, induced isometries and their factoring.

use nalgebra::DMatrix;

use super::{relative, Case, Worst};
use crate::error::{Error, Result};
use crate::hodge::scalar_product;
use crate::metric::{determinant, Metric};
use crate::multivector::Multivector;
use crate::sample;
use crate::spin::{adjoint_action, factor_isometry, is_spin_member, isometry_of};
use crate::table::ProductTable;

const TOL: f64 = 1e-8;

fn matrix_defect(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / a.amax().max(b.amax()).max(1.0)
}

/// The spin identities for `per_signature` random exponentials of bivectors in every
/// signature with `2 <= n <= 4`.
pub fn spin_identities(seed: u64, per_signature: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let names = [
        "unit_norm",
        "grade_preservation",
        "scalar_product_preservation",
        "isometry_determinant",
        "factor_round_trip",
        "isometry_homomorphism",
        "sign_invariance",
        "basis_change",
    ];
    let mut w = vec![Worst::default(); names.len()];
    let mut membership_failures = 0;
    for n in 2..=4 {
        for negative in 0..=n {
            for _ in 0..per_signature {
                let metric = sample::metric_with_signature(&mut rng, n, negative);
                let table = ProductTable::new(&metric)?;
                let f = sample::spin_element(&mut rng, &table, 0.5);
                let g = sample::spin_element(&mut rng, &table, 0.5);
                let e = Multivector::scalar(n, 1.0.into());
                if !is_spin_member(&f, &table) || !is_spin_member(&table.mul(&f, &g), &table) {
                    membership_failures += 1;
                }
                w[0].add_mv(&table.mul(&f, &f.star_conj()), &e);
                let u = sample::multivector(&mut rng, n, true);
                let v = sample::multivector(&mut rng, n, true);
                let lu = adjoint_action(&f, &u, &table);
                for k in 0..=n {
                    w[1].add_mv(
                        &lu.grade_part(k),
                        &adjoint_action(&f, &u.grade_part(k), &table),
                    );
                }
                let (before, after) = (
                    scalar_product(&u, &v, &table),
                    scalar_product(&lu, &adjoint_action(&f, &v, &table), &table),
                );
                w[2].add((before - after).norm() / before.norm().max(1.0));
                let p = isometry_of(&f, &table);
                if !metric.is_isometry(&p)? {
                    membership_failures += 1;
                }
                w[3].add((determinant(&p) - 1.0).abs());
                let back = factor_isometry(&p, &table)?.into_value();
                w[4].add(relative(&back, &f).min(relative(&back, &-f.clone())));
                let q = isometry_of(&g, &table);
                w[5].add(matrix_defect(
                    &isometry_of(&table.mul(&f, &g), &table),
                    &(&p * &q),
                ));
                w[6].add_mv(&adjoint_action(&-f.clone(), &u, &table), &lu);
                // rebuild U from its coefficients on the moved basis F* e^I F
                let moved: Vec<Multivector> = (0..n)
                    .map(|i| adjoint_action(&f, &Multivector::generator(n, i), &table))
                    .collect();
                let mut tilde = Multivector::zero(n);
                for (b, c) in u.terms() {
                    let blade =
                        crate::blade::bits(b).fold(e.clone(), |acc, i| acc.wedge(&moved[i]));
                    tilde = tilde + blade * c;
                }
                w[7].add_mv(&table.mul_all(&[&f, &tilde, &f.star_conj()]), &u);
            }
        }
    }
    let mut cases: Vec<Case> = names
        .iter()
        .zip(w)
        .map(|(name, x)| Case::new(format!("spin/{name}"), x.0, TOL))
        .collect();
    cases.push(Case::count("spin/membership", membership_failures));
    Ok(cases)
}

/// Fixed cases: the unit, odd elements, the kernel `±e`, a plane rotation and a reflection.
pub fn spin_examples() -> Result<Vec<Case>> {
    let plane = Metric::euclidean(2)?;
    let table = ProductTable::new(&plane)?;
    let e = Multivector::scalar(2, 1.0.into());
    let mut failures = 0;
    if !is_spin_member(&e, &table) || is_spin_member(&Multivector::generator(2, 0), &table) {
        failures += 1;
    }
    let id = DMatrix::<f64>::identity(2, 2);
    let mut worst = Worst::default();
    worst.add(matrix_defect(&isometry_of(&e, &table), &id));
    worst.add(matrix_defect(&isometry_of(&-e.clone(), &table), &id));
    worst.add_mv(&factor_isometry(&id, &table)?.into_value(), &e);
    let theta: f64 = 0.7;
    let f = e.clone() * (theta / 2.0).cos() - Multivector::blade(2, 0b11) * (theta / 2.0).sin();
    let rotation =
        DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
    worst.add(matrix_defect(&isometry_of(&f, &table), &rotation));
    let reflection = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    if !matches!(
        factor_isometry(&reflection, &table),
        Err(Error::NotSpinIsometry)
    ) {
        failures += 1;
    }
    Ok(vec![
        Case::new("spin/fixed_examples", worst.0, 1e-12),
        Case::count("spin/fixed_predicates", failures),
    ])
}

pub fn suite(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut cases = spin_identities(seed, count.div_ceil(12).max(1))?;
    cases.extend(spin_examples()?);
    Ok(cases)
}
