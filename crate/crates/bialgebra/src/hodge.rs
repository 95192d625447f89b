//! Hodge star, trace, scalar product and the induced metric on `Λ^k`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::blade::{self, parity, Blade};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::multivector::Multivector;
use crate::table::ProductTable;

/// The volume form `I = sqrt|g| e^1 ∧ ... ∧ e^n`.
pub fn volume(metric: &Metric) -> Multivector {
    let n = metric.dim();
    let full: Blade = ((1u64 << n) - 1) as Blade;
    Multivector::blade(n, full) * metric.sqrt_abs_det()
}

/// Hodge star from the component formula: indices of `U` are raised with `g^{ij}` and
/// contracted into `sqrt|g| ε`. Mixed-grade input is starred grade by grade.
pub fn star(u: &Multivector, metric: &Metric) -> Multivector {
    let n = metric.dim();
    assert_eq!(u.dim(), n, "dimension mismatch in star");
    let vol = metric.sqrt_abs_det();
    let full: Blade = ((1u64 << n) - 1) as Blade;
    let mut out = Multivector::zero(n);
    for k in 0..=n {
        let blades = blade::blades_of_grade(n, k);
        if !blades.iter().any(|&b| u.coeff(b).norm() != 0.0) {
            continue;
        }
        let block = minor_block(metric, k);
        for (a, &bi) in blades.iter().enumerate() {
            let raised: Complex64 = blades
                .iter()
                .enumerate()
                .map(|(c, &bj)| u.coeff(bj) * block[(a, c)])
                .sum();
            let target = full & !bi;
            let v = out.coeff(target) + raised * (vol * blade::complement_sign(n, bi));
            out.set(target, v);
        }
    }
    out
}

/// Hodge star as a Clifford product, `⋆U = U^rev I`.
pub fn star_clifford(u: &Multivector, table: &ProductTable) -> Multivector {
    table.mul(&u.reversion(), &volume(table.metric()))
}

/// Inverse Hodge star: on grade `j`, `⋆^{-1} = (-1)^{j(n+1)} sgn(g) ⋆`.
pub fn star_inv(u: &Multivector, metric: &Metric) -> Multivector {
    let n = metric.dim();
    let s = star(u, metric);
    let sg = metric.sign();
    // ⋆ maps grade j to n - j, so the sign is read off the input grade.
    s.map_blades(|b, c| {
        let j = n - blade::grade(b);
        c * (parity(j * (n + 1)) * sg)
    })
}

/// `Tr(U)`.
pub fn trace(u: &Multivector) -> Complex64 {
    u.scalar_part()
}

/// The scalar product `(U, V) = Tr(U V*)`.
pub fn scalar_product(u: &Multivector, v: &Multivector, table: &ProductTable) -> Complex64 {
    let vs = v.star_conj();
    let mut total = Complex64::new(0.0, 0.0);
    for (a, ua) in u.terms() {
        for (b, vb) in vs.terms() {
            if let Some(&(0, c)) = table.product(a, b).first() {
                total += ua * vb * c;
            }
        }
    }
    total
}

/// Matrix of `(e^I, e^J)` over grade-`k` blades, computed from scalar products.
pub fn exterior_metric_block(table: &ProductTable, k: usize) -> Result<DMatrix<f64>> {
    let n = table.dim();
    if k > n {
        return Err(Error::GradeOutOfRange { grade: k, dim: n });
    }
    let blades = blade::blades_of_grade(n, k);
    let mut m = DMatrix::zeros(blades.len(), blades.len());
    for (a, &bi) in blades.iter().enumerate() {
        for (c, &bj) in blades.iter().enumerate() {
            let e_i = Multivector::blade(n, bi);
            let e_j = Multivector::blade(n, bj);
            m[(a, c)] = scalar_product(&e_i, &e_j, table).re;
        }
    }
    Ok(m)
}

/// Matrix of `k x k` minors of `g^{ij}` over grade-`k` blades (the `k`-th compound matrix).
pub fn minor_block(metric: &Metric, k: usize) -> DMatrix<f64> {
    let n = metric.dim();
    let blades = blade::blades_of_grade(n, k);
    let idx: Vec<Vec<usize>> = blades.iter().map(|&b| blade::indices(b)).collect();
    DMatrix::from_fn(blades.len(), blades.len(), |a, c| {
        metric
            .minor(&idx[a], &idx[c])
            .expect("blade indices are valid")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_plane_star() {
        let m = Metric::euclidean(2).unwrap();
        let e1 = Multivector::generator(2, 0);
        assert_eq!(star(&e1, &m), Multivector::generator(2, 1));
        let e2 = Multivector::generator(2, 1);
        assert_eq!(star(&e2, &m), -Multivector::generator(2, 0));
        assert_eq!(
            star(&Multivector::scalar(2, 1.0.into()), &m),
            Multivector::blade(2, 0b11)
        );
    }

    #[test]
    fn star_inverse_undoes_star() {
        let m = Metric::from_upper_rows(&[
            vec![-1.0, 0.2, 0.0],
            vec![0.2, 2.0, 0.1],
            vec![0.0, 0.1, 1.5],
        ])
        .unwrap();
        let u = Multivector::from_real(3, &[0.5, 1.0, -2.0, 0.3, 0.7, -0.1, 0.4, 1.1]);
        assert!(star_inv(&star(&u, &m), &m).approx_eq(&u, 1e-12));
        assert!(star(&star_inv(&u, &m), &m).approx_eq(&u, 1e-12));
    }
}
