//! The spin group `Spin = {F even, real : F F* = e}` and its action on forms.

use nalgebra::DMatrix;

use crate::blade;
use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::table::ProductTable;

const MEMBER_TOL: f64 = 1e-9;

/// An element of the spin group of the table's metric.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinElement {
    value: Multivector,
}

impl SpinElement {
    /// Validates `f` as a spin group element.
    pub fn new(f: Multivector, table: &ProductTable) -> Result<Self> {
        match membership_defect(&f, table) {
            Ok(_) => Ok(SpinElement {
                value: real_part(&f),
            }),
            Err(reason) => Err(Error::NotSpin(reason)),
        }
    }

    /// Wraps `f` without validation.
    pub fn new_unchecked(f: Multivector) -> Self {
        SpinElement { value: f }
    }

    /// The identity element `e`.
    pub fn identity(dim: usize) -> Self {
        SpinElement {
            value: Multivector::scalar(dim, 1.0.into()),
        }
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    pub fn into_value(self) -> Multivector {
        self.value
    }

    /// `F^{-1} = F*`.
    pub fn inverse(&self) -> SpinElement {
        SpinElement {
            value: self.value.star_conj(),
        }
    }

    pub fn mul(&self, other: &SpinElement, table: &ProductTable) -> SpinElement {
        SpinElement {
            value: table.mul(&self.value, &other.value),
        }
    }

    /// `L_F(U) = F* U F`.
    pub fn adjoint_action(&self, u: &Multivector, table: &ProductTable) -> Multivector {
        adjoint_action(&self.value, u, table)
    }

    /// The matrix `a` with `L_F(e^i) = a^i_j e^j`.
    pub fn isometry(&self, table: &ProductTable) -> DMatrix<f64> {
        isometry_of(&self.value, table)
    }
}

/// `L_F(U) = F* U F`.
pub fn adjoint_action(f: &Multivector, u: &Multivector, table: &ProductTable) -> Multivector {
    table.mul(&table.mul(&f.star_conj(), u), f)
}

/// Whether `f` is even, real and satisfies `F F* = e`; in dimension 6 and above
/// `L_F` must also map `Λ^1` into itself.
pub fn is_spin_member(f: &Multivector, table: &ProductTable) -> bool {
    membership_defect(f, table).is_ok()
}

fn membership_defect(f: &Multivector, table: &ProductTable) -> std::result::Result<(), String> {
    let n = table.dim();
    if f.dim() != n {
        return Err(format!(
            "dimension {} does not match the metric dimension {n}",
            f.dim()
        ));
    }
    let scale = f.norm_max().max(1.0);
    if !f.is_real_within(MEMBER_TOL * scale) {
        return Err("coefficients are not real".into());
    }
    if f.terms()
        .any(|(b, c)| blade::grade(b) % 2 == 1 && c.norm() > MEMBER_TOL * scale)
    {
        return Err("element is not even".into());
    }
    let norm = table.mul(f, &f.star_conj());
    let defect = norm.distance(&Multivector::scalar(n, 1.0.into()));
    if defect > MEMBER_TOL * scale * scale {
        return Err(format!("F F* differs from e by {defect:e}"));
    }
    let preserves = || {
        (0..n).all(|i| {
            let image = adjoint_action(f, &Multivector::generator(n, i), table);
            let ok = image
                .terms()
                .all(|(b, c)| blade::grade(b) == 1 || c.norm() <= MEMBER_TOL * scale * scale);
            ok
        })
    };
    if n >= 6 {
        if !preserves() {
            return Err("adjoint action does not preserve 1-forms".into());
        }
    } else {
        debug_assert!(
            preserves(),
            "even F with F F* = e must preserve 1-forms in dimension <= 5"
        );
    }
    Ok(())
}

fn real_part(f: &Multivector) -> Multivector {
    f.map_blades(|_, c| c.re.into())
}

/// The isometry induced by `F`: row `i` holds the coefficients of `F* e^i F`.
pub fn isometry_of(f: &Multivector, table: &ProductTable) -> DMatrix<f64> {
    let n = table.dim();
    DMatrix::from_fn(n, n, |i, j| {
        adjoint_action(f, &Multivector::generator(n, i), table)
            .coeff(1 << j)
            .re
    })
}

/// Recovers `F` (up to sign) from an isometry `p` with `F* e^i F = p^i_j e^j`.
///
/// Solves `e^i F - F (p^i_j e^j) = 0` on the even subalgebra, normalizes to `F F* = e`
/// and fixes the sign so the largest coefficient is positive.
pub fn factor_isometry(p: &DMatrix<f64>, table: &ProductTable) -> Result<SpinElement> {
    let n = table.dim();
    if n > 4 {
        return Err(Error::UnsupportedDimension { dim: n, max: 4 });
    }
    if !table.metric().is_isometry(p)? {
        return Err(Error::NotIsometry);
    }
    let even: Vec<u32> = (0..1u32 << n)
        .filter(|&b| blade::grade(b).is_multiple_of(2))
        .collect();
    let odd: Vec<u32> = (0..1u32 << n)
        .filter(|&b| blade::grade(b) % 2 == 1)
        .collect();
    let images: Vec<Multivector> = (0..n)
        .map(|i| {
            let mut v = Multivector::zero(n);
            for j in 0..n {
                v.set(1 << j, p[(i, j)].into());
            }
            v
        })
        .collect();
    let mut system = DMatrix::zeros(n * odd.len(), even.len());
    for (col, &b) in even.iter().enumerate() {
        let eb = Multivector::blade(n, b);
        for i in 0..n {
            let lhs = table.mul(&Multivector::generator(n, i), &eb) - table.mul(&eb, &images[i]);
            for (row, &o) in odd.iter().enumerate() {
                system[(i * odd.len() + row, col)] = lhs.coeff(o).re;
            }
        }
    }
    let svd = system.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma = &svd.singular_values;
    let (imin, smin) =
        sigma.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (i, &s)| {
                if s < acc.1 {
                    (i, s)
                } else {
                    acc
                }
            },
        );
    let smax = sigma.max().max(1.0);
    if smin > 1e-8 * smax {
        return Err(Error::NotSpinIsometry);
    }
    let mut f = Multivector::zero(n);
    for (col, &b) in even.iter().enumerate() {
        f.set(b, v_t[(imin, col)].into());
    }
    let norm = table.mul(&f, &f.star_conj());
    let c = norm.scalar_part().re;
    let residual = (norm - Multivector::scalar(n, c.into())).norm_max();
    if c <= 0.0 || residual > 1e-8 * c.abs() {
        return Err(Error::NotSpinIsometry);
    }
    let mut f = f * (1.0 / c.sqrt());
    let lead =
        f.coeffs()
            .iter()
            .map(|z| z.re)
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if lead < 0.0 {
        f = -f;
    }
    let check = isometry_of(&f, table);
    if (&check - p).amax() > 1e-8 * p.amax().max(1.0) {
        return Err(Error::NotSpinIsometry);
    }
    Ok(SpinElement { value: f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Metric;

    #[test]
    fn plane_rotation_round_trip() {
        let t = ProductTable::new(&Metric::euclidean(2).unwrap()).unwrap();
        let theta: f64 = 0.3;
        let f = Multivector::from_real(2, &[theta.cos(), 0.0, 0.0, theta.sin()]);
        assert!(is_spin_member(&f, &t));
        let a = isometry_of(&f, &t);
        assert!((a.determinant() - 1.0).abs() < 1e-12);
        let back = factor_isometry(&a, &t).unwrap();
        assert!(back.value().approx_eq(&f, 1e-10));
    }

    #[test]
    fn reflection_is_not_a_spin_isometry() {
        let t = ProductTable::new(&Metric::euclidean(2).unwrap()).unwrap();
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(factor_isometry(&p, &t), Err(Error::NotSpinIsometry));
        let stretch = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert_eq!(factor_isometry(&stretch, &t), Err(Error::NotIsometry));
    }

    #[test]
    fn time_reversal_has_negative_norm_factor() {
        let t = ProductTable::new(&Metric::minkowski()).unwrap();
        let p = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[-1.0, 1.0, 1.0, -1.0]));
        assert_eq!(factor_isometry(&p, &t), Err(Error::NotSpinIsometry));
    }

    #[test]
    fn odd_or_complex_elements_are_rejected() {
        let t = ProductTable::new(&Metric::euclidean(3).unwrap()).unwrap();
        assert!(!is_spin_member(&Multivector::generator(3, 0), &t));
        let c = Multivector::scalar(3, num_complex::Complex64::new(0.0, 1.0));
        assert!(!is_spin_member(&c, &t));
        assert!(SpinElement::new(Multivector::scalar(3, 2.0.into()), &t).is_err());
    }
}
