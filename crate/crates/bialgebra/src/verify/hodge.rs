//! Hodge star, volume form, exterior metric blocks and metric minors.

use nalgebra::DMatrix;
use rand::Rng;

use super::{Case, Worst};
use crate::blade::{self, parity};
use crate::error::Result;
use crate::hodge::{exterior_metric_block, minor_block, star, star_clifford, star_inv, volume};
use crate::metric::{determinant, Metric};
use crate::multivector::Multivector;
use crate::sample;
use crate::table::ProductTable;

const TOL: f64 = 1e-12;

fn matrix_defect(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / a.amax().max(b.amax()).max(1.0)
}

/// Star and volume identities on every basis blade of `metrics` random metrics, `n <= 5`.
pub fn star_identities(seed: u64, metrics: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let names = [
        "component_vs_clifford",
        "double_star",
        "inverse",
        "volume_conjugate",
        "volume_square",
        "volume_commutation",
        "star_of_unit",
    ];
    let mut w = vec![Worst::default(); names.len()];
    for s in 0..metrics {
        let n = 1 + s % 5;
        let metric = sample::metric(&mut rng, n);
        let table = ProductTable::new(&metric)?;
        let vol = volume(&metric);
        let e = Multivector::scalar(n, 1.0.into());
        let sg = metric.sign();
        w[3].add_mv(&table.mul(&vol, &vol.star_conj()), &(e.clone() * sg));
        w[3].add_mv(&table.mul(&vol.star_conj(), &vol), &(e.clone() * sg));
        w[4].add_mv(
            &table.mul(&vol, &vol),
            &(e.clone() * (parity(n * (n - 1) / 2) * sg)),
        );
        w[6].add_mv(&star(&e, &metric), &vol);
        for b in 0..(1u32 << n) {
            let k = blade::grade(b);
            let u = Multivector::blade(n, b);
            let su = star(&u, &metric);
            w[0].add_mv(&su, &star_clifford(&u, &table));
            w[1].add_mv(
                &star(&su, &metric),
                &(u.clone() * (parity(k * (n + 1)) * sg)),
            );
            w[2].add_mv(&star_inv(&su, &metric), &u);
            w[5].add_mv(
                &table.mul(&vol, &u),
                &(table.mul(&u, &vol) * parity(k * (n + 1))),
            );
        }
    }
    Ok(names
        .iter()
        .zip(w)
        .map(|(name, x)| Case::new(format!("hodge/{name}"), x.0, TOL))
        .collect())
}

/// The scalar-product blocks against the compound matrices of `g^{ij}`, `n <= 5`, with the
/// named special cases: `k = 0, 1, n`, diagonal metrics and positive-definite metrics.
pub fn metric_blocks(seed: u64, metrics: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let mut minors = Worst::default();
    let mut ends = Worst::default();
    let mut diagonal = Worst::default();
    let mut positive_failures = 0;
    let mut symmetric = Worst::default();
    for s in 0..metrics {
        let n = 1 + s % 5;
        let metric = sample::metric(&mut rng, n);
        let table = ProductTable::new(&metric)?;
        for k in 0..=n {
            let block = exterior_metric_block(&table, k)?;
            minors.add(matrix_defect(&block, &minor_block(&metric, k)));
            if k == 0 {
                ends.add(matrix_defect(&block, &DMatrix::from_element(1, 1, 1.0)));
            } else if k == 1 {
                ends.add(matrix_defect(&block, metric.upper()));
            }
            if k == n {
                ends.add((block[(0, 0)] - determinant(metric.upper())).abs());
            }
        }
        let rows: Vec<usize> = pick(&mut rng, n);
        let cols: Vec<usize> = {
            let mut c = pick(&mut rng, n);
            c.truncate(rows.len());
            while c.len() < rows.len() {
                c = pick(&mut rng, n);
                c.truncate(rows.len());
            }
            c
        };
        symmetric.add((metric.minor(&rows, &cols)? - metric.minor(&cols, &rows)?).abs());

        let d: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let dm = Metric::diagonal(&d)?;
        let dt = ProductTable::new(&dm)?;
        let pm = sample::metric_with_signature(&mut rng, n, 0);
        let pt = ProductTable::new(&pm)?;
        for k in 0..=n {
            let block = exterior_metric_block(&dt, k)?;
            let off = DMatrix::from_fn(block.nrows(), block.ncols(), |i, j| {
                if i == j {
                    0.0
                } else {
                    block[(i, j)]
                }
            });
            diagonal.add(off.amax());
            if exterior_metric_block(&pt, k)?.cholesky().is_none() {
                positive_failures += 1;
            }
        }
    }
    Ok(vec![
        Case::new("hodge/blocks_are_minors", minors.0, 1e-10),
        Case::new("hodge/block_ends", ends.0, 1e-10),
        Case::new("hodge/diagonal_blocks", diagonal.0, 1e-12),
        Case::count("hodge/positive_definite_blocks", positive_failures),
        Case::new("hodge/minor_symmetry", symmetric.0, 1e-12),
    ])
}

/// A random nonempty increasing index list.
fn pick(rng: &mut sample::SampleRng, n: usize) -> Vec<usize> {
    loop {
        let v: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !v.is_empty() {
            return v;
        }
    }
}

/// Isometry checks: the identity and spin-induced maps pass and compose, scalings fail.
pub fn isometries(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let mut failures = 0;
    let mut preserved = Worst::default();
    for s in 0..count {
        let n = 1 + s % 4;
        let metric = sample::metric(&mut rng, n);
        let table = ProductTable::new(&metric)?;
        let p = crate::spin::isometry_of(&sample::spin_element(&mut rng, &table, 0.5), &table);
        let q = crate::spin::isometry_of(&sample::spin_element(&mut rng, &table, 0.5), &table);
        let id = DMatrix::identity(n, n);
        for (m, expected) in [
            (&id, true),
            (&p, true),
            (&(&p * &q), true),
            (&(&id * 2.0), false),
        ] {
            if metric.is_isometry(m)? != expected {
                failures += 1;
            }
        }
        preserved.add(matrix_defect(
            metric.transform(&(&p * &q))?.upper(),
            metric.upper(),
        ));
    }
    let plane = Metric::euclidean(2)?;
    let (c, s) = (30f64.to_radians().cos(), 30f64.to_radians().sin());
    let rotation = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    if !plane.is_isometry(&rotation)?
        || plane.is_isometry(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            2.0, 1.0,
        ])))?
    {
        failures += 1;
    }
    Ok(vec![
        Case::count("hodge/isometry_predicate", failures),
        Case::new("hodge/isometry_group_closure", preserved.0, 1e-10),
    ])
}

pub fn suite(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut cases = star_identities(seed, count)?;
    cases.extend(metric_blocks(seed.wrapping_add(1), count)?);
    cases.extend(isometries(seed.wrapping_add(2), count)?);
    Ok(cases)
}
