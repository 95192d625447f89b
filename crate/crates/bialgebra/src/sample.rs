//! Seeded random generators for metrics, multivectors and spin elements.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blade;
use crate::expr::Expr;
use crate::manifold::{Chart, ComplexExpr, FormField};
use crate::metric::Metric;
use crate::multivector::Multivector;
use crate::table::ProductTable;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random well-conditioned metric with `negative` negative eigenvalues.
///
/// `g^{ij} = A D A^T` with `A` a perturbed identity and `D` a signed diagonal.
pub fn metric_with_signature(rng: &mut SampleRng, n: usize, negative: usize) -> Metric {
    loop {
        let a = DMatrix::from_fn(n, n, |i, j| {
            let off = rng.gen_range(-0.4..0.4);
            if i == j {
                1.0 + off
            } else {
                off
            }
        });
        let d = DMatrix::from_fn(n, n, |i, j| {
            if i != j {
                0.0
            } else {
                let mag = rng.gen_range(0.5..2.0);
                if i < negative {
                    -mag
                } else {
                    mag
                }
            }
        });
        if let Ok(m) = Metric::from_upper(&a * d * a.transpose()) {
            if m.upper().clone().try_inverse().is_some() && m.det_lower().abs() > 1e-3 {
                return m;
            }
        }
    }
}

/// A random metric with a random signature.
pub fn metric(rng: &mut SampleRng, n: usize) -> Metric {
    let negative = rng.gen_range(0..=n);
    metric_with_signature(rng, n, negative)
}

/// A random metric whose determinant `det g_{ij}` has the requested sign.
pub fn metric_with_det_sign(rng: &mut SampleRng, n: usize, positive: bool) -> Metric {
    loop {
        let negative = rng.gen_range(0..=n);
        if (negative % 2 == 0) == positive {
            return metric_with_signature(rng, n, negative);
        }
    }
}

fn coeff(rng: &mut SampleRng, complex: bool) -> Complex64 {
    let re = rng.gen_range(-1.0..1.0);
    let im = if complex {
        rng.gen_range(-1.0..1.0)
    } else {
        0.0
    };
    Complex64::new(re, im)
}

/// A dense random multivector with coefficients in `[-1, 1)`.
pub fn multivector(rng: &mut SampleRng, n: usize, complex: bool) -> Multivector {
    Multivector::from_coeffs(n, (0..1usize << n).map(|_| coeff(rng, complex)).collect())
}

/// A random homogeneous form of grade `k`.
pub fn form(rng: &mut SampleRng, n: usize, k: usize, complex: bool) -> Multivector {
    let mut m = Multivector::zero(n);
    for b in blade::blades_of_grade(n, k) {
        m.set(b, coeff(rng, complex));
    }
    m
}

/// A random real bivector with coefficients in `[-scale, scale)`.
pub fn bivector(rng: &mut SampleRng, n: usize, scale: f64) -> Multivector {
    form(rng, n, 2, false) * scale
}

/// A random spin element `exp(B)` for a random real bivector `B`.
pub fn spin_element(rng: &mut SampleRng, table: &ProductTable, scale: f64) -> Multivector {
    let b = bivector(rng, table.dim(), scale);
    table
        .exp(&b)
        .expect("exponential of a bounded bivector converges")
}

/// A smooth random function of `n` coordinates: an affine part, one product term per
/// coordinate and a sine, with coefficients of order one.
pub fn smooth_expr(rng: &mut SampleRng, n: usize) -> Expr {
    let mut s = Expr::num(rng.gen_range(-1.0..1.0));
    for k in 0..n {
        let x = Expr::var(k);
        s = s.add(&Expr::num(rng.gen_range(-1.0..1.0)).mul(&x));
        let l = rng.gen_range(0..n);
        s = s.add(
            &Expr::num(rng.gen_range(-0.5..0.5))
                .mul(&x)
                .mul(&Expr::var(l)),
        );
    }
    s.add(&Expr::num(0.3).mul(&Expr::var(0)).sin())
}

/// A random form field with smooth coefficients on every blade of the listed grades.
pub fn form_field(rng: &mut SampleRng, n: usize, grades: &[usize], complex: bool) -> FormField {
    let mut f = FormField::zero(n);
    for b in 0..(1u32 << n) {
        if grades.contains(&blade::grade(b)) {
            let im = if complex {
                smooth_expr(rng, n)
            } else {
                Expr::zero()
            };
            f.set(b, ComplexExpr::new(smooth_expr(rng, n), im));
        }
    }
    f
}

/// A random point in the box `(-w, w)^n`.
pub fn point(rng: &mut SampleRng, n: usize, w: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-w..w)).collect()
}

/// A positive-definite chart on `(-1, 1)^3` with nonconstant off-diagonal terms.
pub fn warped_chart() -> Chart {
    Chart::parse(
        &[
            vec!["1 + 0.3*x2^2", "0.2*x1*x2", "0"],
            vec!["0.2*x1*x2", "2 + sin(x1)", "0.1*x3"],
            vec!["0", "0.1*x3", "1.5 + 0.2*x1*x3"],
        ],
        vec![(-1.0, 1.0); 3],
    )
    .expect("fixed chart is valid")
}

/// A curved Lorentzian chart on `(-1, 1)^4`, close to `diag(-1, -1, -1, 1)`.
pub fn lorentz_chart() -> Chart {
    Chart::parse(
        &[
            vec!["-1 - 0.1*x4^2", "0", "0", "0.05*x1"],
            vec!["0", "-1", "0", "0"],
            vec!["0", "0", "-(1 + 0.2*x2^2)", "0"],
            vec!["0.05*x1", "0", "0", "1 + 0.1*x3^2"],
        ],
        vec![(-1.0, 1.0); 4],
    )
    .expect("fixed chart is valid")
}
