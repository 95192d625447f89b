//! The Dirac matrices and the correspondence between spinor columns and wave forms.

use num_complex::Complex64;
use rand::Rng;

use super::{Case, Worst};
use crate::error::Result;
use crate::field::dirac::{
    column_embed, dirac_residual, embed_spinor, gamma_matrices, rep_inverse, rep_map, CMatrix4,
};
use crate::field::fixtures::minkowski_chart;
use crate::field::{main_residual, LocalFields};
use crate::manifold::{ComplexExpr, JetForm};
use crate::metric::Metric;
use crate::multivector::Multivector;
use crate::sample;
use crate::table::ProductTable;

fn max_abs(m: &CMatrix4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `γ^k γ^l + γ^l γ^k = 2 g^{kl}` exactly, and `rep_map(e) = 1`.
pub fn anticommutators() -> Result<Case> {
    let g = gamma_matrices();
    let metric = Metric::minkowski();
    let mut worst = Worst::default();
    for k in 0..4 {
        for l in 0..4 {
            let expected = CMatrix4::identity() * Complex64::from(2.0 * metric.g(k, l));
            worst.add(max_abs(&(g[k] * g[l] + g[l] * g[k] - expected)));
        }
    }
    worst.add(max_abs(
        &(rep_map(&Multivector::scalar(4, 1.0.into()))? - CMatrix4::identity()),
    ));
    Ok(Case::new("dirac/anticommutators", worst.0, 0.0))
}

/// `rep_map(UV) = rep_map(U) rep_map(V)` and `rep_inverse ∘ rep_map = id` on random pairs.
pub fn homomorphism(seed: u64, pairs: usize) -> Result<Vec<Case>> {
    let table = ProductTable::new(&Metric::minkowski())?;
    let mut rng = sample::rng(seed);
    let mut hom = Worst::default();
    let mut inverse = Worst::default();
    for _ in 0..pairs {
        let u = sample::multivector(&mut rng, 4, true);
        let v = sample::multivector(&mut rng, 4, true);
        let lhs = rep_map(&table.mul(&u, &v))?;
        let rhs = rep_map(&u)? * rep_map(&v)?;
        hom.add(max_abs(&(lhs - rhs)) / max_abs(&rhs).max(1.0));
        inverse.add_mv(&rep_inverse(&rep_map(&u)?)?, &u);
    }
    Ok(vec![
        Case::new("dirac/homomorphism", hom.0, 1e-12),
        Case::new("dirac/inverse", inverse.0, 1e-12),
    ])
}

/// The matrix of the main residual of a column-embedded wave form equals the embedded
/// Dirac residual of the column, on random smooth columns and potentials.
pub fn column_correspondence(seed: u64, count: usize) -> Result<Case> {
    let chart = minkowski_chart(2.0);
    let mut rng = sample::rng(seed);
    let mut worst = Worst::default();
    for _ in 0..count {
        let p = sample::point(&mut rng, 4, 1.0);
        let frame = chart.frame(&p, 2)?;
        let mut column = Vec::with_capacity(4);
        for _ in 0..4 {
            let z = ComplexExpr::new(
                sample::smooth_expr(&mut rng, 4),
                sample::smooth_expr(&mut rng, 4),
            );
            column.push(z.jet(frame.space(), &p, 2)?);
        }
        let theta: [_; 4] = column.try_into().expect("four components");
        let a = (0..4)
            .map(|_| ComplexExpr::imag(sample::smooth_expr(&mut rng, 4)).jet(frame.space(), &p, 2))
            .collect::<Result<Vec<_>>>()?;
        let m = rng.gen_range(0.0..2.0);
        let zero = JetForm::zero(frame.space(), 4, 2);
        let f = LocalFields {
            psi: embed_spinor(&theta)?,
            psi_bar: None,
            a: a.clone(),
            b: vec![zero.clone(); 4],
            h: zero,
            m,
            c1: 1.0,
            c2: 1.0,
        };
        let matrix = rep_map(&main_residual(&frame, &f))?;
        let expected = column_embed(&dirac_residual(&theta, &a, m)?);
        worst.add(max_abs(&(matrix - expected)) / max_abs(&expected).max(1.0));
    }
    Ok(Case::new("dirac/column_correspondence", worst.0, 1e-12))
}

pub fn suite(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut cases = vec![anticommutators()?];
    cases.extend(homomorphism(seed, count)?);
    cases.push(column_correspondence(
        seed.wrapping_add(1),
        count.div_ceil(10).max(1),
    )?);
    Ok(cases)
}
