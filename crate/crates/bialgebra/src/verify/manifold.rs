//! Christoffel symbols, curvature and the operators `d`, `δ`, `Υ`, `Δ` on random fields.

use rand::Rng;

use super::{Case, Worst};
use crate::error::Result;
use crate::manifold::{gradient, Chart, TensorJet};
use crate::multivector::Multivector;
use crate::sample::{self, SampleRng};
use crate::table::ProductTable;

const TOL: f64 = 1e-8;

fn polar_point(rng: &mut SampleRng) -> Vec<f64> {
    vec![rng.gen_range(0.3..4.0), rng.gen_range(-3.0..3.0)]
}

/// Polar coordinates on the plane: the Christoffel symbols match the hand values and the
/// curvature vanishes at `points` random points.
pub fn polar_chart(seed: u64, points: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let chart = Chart::polar_plane();
    let mut flat = Worst::default();
    let mut symbols = Worst::default();
    for _ in 0..points {
        let p = polar_point(&mut rng);
        let curv = chart.frame(&p, 2)?.curvature()?;
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for l in 0..2 {
                        flat.add(curv.r_lower(i, j, r, l).abs());
                    }
                }
            }
        }
        let gamma = chart.christoffel(&p)?;
        let r = p[0];
        let expected = [[[0.0, 0.0], [0.0, -r]], [[0.0, 1.0 / r], [1.0 / r, 0.0]]];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    symbols.add((gamma[k][i][j] - expected[k][i][j]).abs());
                }
            }
        }
    }
    Ok(vec![
        Case::new("manifold/polar_flat", flat.0, 1e-9),
        Case::new("manifold/polar_christoffel", symbols.0, 1e-12),
    ])
}

/// On the round sphere: `[Υ_i, Υ_j] dx^k = R^k_{ij,r} dx^r`, `[Υ_i, Υ_j] U = ½[D_ij, U]`,
/// the symmetries of `R_{ij,rl}` and scalar curvature 2.
pub fn sphere_chart(seed: u64, points: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let chart = Chart::round_sphere();
    let mut commutator = Worst::default();
    let mut symmetry = Worst::default();
    let mut scalar = Worst::default();
    for _ in 0..points {
        let p = vec![rng.gen_range(0.3..2.8), rng.gen_range(-3.0..3.0)];
        let frame = chart.frame(&p, 3)?;
        let curv = frame.curvature()?;
        let table = ProductTable::new(&frame.metric())?;
        let u = sample::form_field(&mut rng, 2, &[0, 1, 2], true).jet(&p, 3)?;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let ek = frame.generator(k);
                    let comm = frame
                        .upsilon_k(i, &frame.upsilon_k(j, &ek))
                        .sub(&frame.upsilon_k(j, &frame.upsilon_k(i, &ek)))
                        .value();
                    let mut expected = Multivector::zero(2);
                    for r in 0..2 {
                        expected.set(1 << r, curv.r_upper(k, i, j, r).into());
                    }
                    commutator.add_mv(&comm, &expected);
                }
                let comm = frame
                    .upsilon_k(i, &frame.upsilon_k(j, &u))
                    .sub(&frame.upsilon_k(j, &frame.upsilon_k(i, &u)))
                    .value();
                commutator.add_mv(
                    &comm,
                    &(table.commutator(&curv.d_form(i, j), &u.value()) * 0.5),
                );
                for r in 0..2 {
                    for l in 0..2 {
                        let x = curv.r_lower(i, j, r, l);
                        symmetry.add((x + curv.r_lower(j, i, r, l)).abs());
                        symmetry.add((x + curv.r_lower(i, j, l, r)).abs());
                        symmetry.add((x - curv.r_lower(r, l, i, j)).abs());
                    }
                }
            }
        }
        scalar.add((curv.scalar(&frame.metric()) - 2.0).abs());
    }
    Ok(vec![
        Case::new("manifold/sphere_commutators", commutator.0, TOL),
        Case::new("manifold/curvature_symmetries", symmetry.0, 1e-10),
        Case::new("manifold/sphere_scalar_curvature", scalar.0, 1e-10),
    ])
}

/// Operator identities on `fields` random mixed-grade fields, alternating between a curved
/// Riemannian 3-chart and a curved Lorentzian 4-chart.
pub fn operator_identities(seed: u64, fields: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let names = [
        "d_squared",
        "delta_squared",
        "delta_via_star",
        "scalar_laplacian",
        "laplacian_via_d_delta",
        "d_via_partials",
        "volume_parallel",
        "upsilon_conjugation",
        "upsilon_leibniz",
        "upsilon_star",
        "upsilon_trace",
        "upsilon_scalar_product",
        "metric_parallel",
        "christoffel_trace",
    ];
    let mut w = vec![Worst::default(); names.len()];
    let charts = [sample::warped_chart(), sample::lorentz_chart()];
    for s in 0..fields {
        let chart = &charts[s % 2];
        let n = chart.dim();
        let p = sample::point(&mut rng, n, 0.6);
        let frame = chart.frame(&p, 2)?;
        let all: Vec<usize> = (0..=n).collect();
        let field = sample::form_field(&mut rng, n, &all, true);
        let u = field.jet(&p, 2)?;
        let v = sample::form_field(&mut rng, n, &all, true).jet(&p, 2)?;
        w[0].add(frame.d(&frame.d(&u)).value().norm_max() / u.norm_max().max(1.0));
        w[1].add(frame.delta(&frame.delta(&u)).value().norm_max() / u.norm_max().max(1.0));
        for k in 0..=n {
            let uk = u.grade_part(k);
            let other =
                frame.star_inv(&frame.d(&frame.star(&uk))).value() * crate::blade::parity(k);
            w[2].add_mv(&frame.delta(&uk).value(), &other);
        }
        let phi = u.scalar_part().clone();
        let lap = frame.laplacian(&u.grade_part(0)).value();
        w[3].add(
            (lap.scalar_part() - frame.scalar_laplacian(&phi).value()).norm()
                / lap.norm_max().max(1.0),
        );
        w[3].add((lap.clone() - lap.grade_part(0)).norm_max() / lap.norm_max().max(1.0));
        let minus = frame
            .d(&frame.delta(&u))
            .add(&frame.delta(&frame.d(&u)))
            .value();
        w[4].add_mv(&frame.laplacian(&u).value(), &-minus);
        w[5].add_mv(&frame.d(&u).value(), &field.d().eval(&p)?);
        let u1 = u.truncate(1);
        let v1 = v.truncate(1);
        for k in 0..n {
            w[6].add(
                frame
                    .upsilon_k(k, &frame.volume().truncate(1))
                    .value()
                    .norm_max(),
            );
            let yu = frame.upsilon_k(k, &u1);
            w[7].add_mv(
                &frame.upsilon_k(k, &u1.star_conj()).value(),
                &yu.value().star_conj(),
            );
            let leibniz = frame
                .mul(&yu, &v1.truncate(0))
                .add(&frame.mul(&u1.truncate(0), &frame.upsilon_k(k, &v1)));
            w[8].add_mv(
                &frame.upsilon_k(k, &frame.mul(&u1, &v1)).value(),
                &leibniz.value(),
            );
            w[9].add_mv(
                &frame.upsilon_k(k, &frame.star(&u1)).value(),
                &frame.star(&yu).value(),
            );
            w[10].add((u1.scalar_part().partial(k) - yu.value().scalar_part()).norm());
            let lhs = frame.scalar_product(&u1, &v1).partial(k);
            let rhs = frame.scalar_product(&yu, &v1.truncate(0)).value()
                + frame
                    .scalar_product(&u1.truncate(0), &frame.upsilon_k(k, &v1))
                    .value();
            w[11].add((lhs - rhs).norm() / lhs.norm().max(1.0));
        }
        for t in [
            TensorJet::metric_lower(&frame),
            TensorJet::metric_upper(&frame),
        ] {
            w[12].add(gradient(&frame, &t).value_norm_max());
        }
        let sg = frame.sqrt_det();
        for l in 0..n {
            let trace: f64 = (0..n).map(|k| frame.gamma(k, k, l).value().re).sum();
            w[13].add((trace - sg.partial(l).re / sg.value().re).abs());
        }
    }
    Ok(names
        .iter()
        .zip(w)
        .map(|(name, x)| Case::new(format!("manifold/{name}"), x.0, TOL))
        .collect())
}

pub fn suite(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut cases = polar_chart(seed, count)?;
    cases.extend(sphere_chart(seed.wrapping_add(1), count)?);
    cases.extend(operator_identities(seed.wrapping_add(2), count)?);
    Ok(cases)
}
