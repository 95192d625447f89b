//! Dirac matrices and the correspondence between columns and wave forms in Minkowski space.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use num_complex::Complex64;

use crate::blade::{self, Blade};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::Jet;
use crate::manifold::{Chart, ComplexExpr, FormField, JetForm};
use crate::metric::Metric;
use crate::multivector::Multivector;

use super::FieldConfig;

pub type CMatrix4 = Matrix4<Complex64>;
pub type Spinor = Vector4<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    re.into()
}

/// `γ^1 .. γ^4` in Dirac's representation, for `g = diag(-1, -1, -1, 1)`.
pub fn gamma_matrices() -> [CMatrix4; 4] {
    let z = c(0.0);
    let one = c(1.0);
    let m1 = c(-1.0);
    [
        CMatrix4::new(z, z, z, m1, z, z, m1, z, z, one, z, z, one, z, z, z),
        CMatrix4::new(z, z, z, I, z, z, -I, z, z, -I, z, z, I, z, z, z),
        CMatrix4::new(z, z, m1, z, z, z, z, one, one, z, z, z, z, m1, z, z),
        CMatrix4::new(one, z, z, z, z, one, z, z, z, z, m1, z, z, z, z, m1),
    ]
}

/// `γ^{i1} ... γ^{ik}` for the indices of `b` in increasing order.
pub fn gamma_product(gammas: &[CMatrix4; 4], b: Blade) -> CMatrix4 {
    blade::bits(b).fold(CMatrix4::identity(), |acc, i| acc * gammas[i])
}

fn check_dim(u: &Multivector) -> Result<()> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: u.dim(),
        });
    }
    Ok(())
}

/// The matrix `Σ u_{i1..ik} γ^{i1} ... γ^{ik}` of a form on Minkowski space, using its
/// Clifford-basis coordinates.
pub fn rep_map(u: &Multivector) -> Result<CMatrix4> {
    check_dim(u)?;
    let gammas = gamma_matrices();
    let coords = u.clifford_coords(&Metric::minkowski());
    Ok(coords
        .iter()
        .enumerate()
        .fold(CMatrix4::zeros(), |acc, (b, &x)| {
            acc + gamma_product(&gammas, b as Blade) * x
        }))
}

/// The form whose matrix is `m`. The representation is an isomorphism of the complex
/// Clifford algebra of Minkowski space onto the 4x4 matrices.
pub fn rep_inverse(m: &CMatrix4) -> Result<Multivector> {
    let gammas = gamma_matrices();
    let mut system = DMatrix::<Complex64>::zeros(16, 16);
    for b in 0..16u32 {
        let g = gamma_product(&gammas, b);
        for (row, x) in g.iter().enumerate() {
            system[(row, b as usize)] = *x;
        }
    }
    let rhs = DVector::from_iterator(16, m.iter().copied());
    let coords = system.lu().solve(&rhs).ok_or(Error::SingularMatrix)?;
    Ok(Multivector::from_clifford_coords(
        &Metric::minkowski(),
        coords.as_slice(),
    ))
}

/// The matrix with `θ` as its first column and zeros elsewhere.
pub fn column_embed(theta: &Spinor) -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    m.set_column(0, theta);
    m
}

/// The wave form corresponding to a column of jets.
pub fn embed_spinor(theta: &[Jet; 4]) -> Result<JetForm> {
    let space = theta[0].space().clone();
    let order = theta.iter().map(Jet::order).min().unwrap_or(0);
    let len = space.len(order);
    let mut coeffs: Vec<Vec<Complex64>> = vec![vec![c(0.0); len]; 16];
    for t in 0..len {
        let column = Spinor::from_fn(|r, _| theta[r].coeffs()[t]);
        let form = rep_inverse(&column_embed(&column))?;
        for (b, x) in form.coeffs().iter().enumerate() {
            coeffs[b][t] = *x;
        }
    }
    let jets = coeffs
        .into_iter()
        .map(|cs| Jet::from_coeffs(&space, order, cs))
        .collect();
    Ok(JetForm::from_coeffs(4, jets))
}

/// `(i γ^k (∂_k - a_k) - m) θ` at the expansion point.
pub fn dirac_residual(theta: &[Jet; 4], a: &[Jet], m: f64) -> Result<Spinor> {
    if a.len() != 4 || theta[0].space().nvars() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: a.len(),
        });
    }
    let gammas = gamma_matrices();
    let value = Spinor::from_fn(|r, _| theta[r].value());
    let mut out = value * c(-m);
    for (k, g) in gammas.iter().enumerate() {
        let d = Spinor::from_fn(|r, _| theta[r].partial(k)) - value * a[k].value();
        out += g * d * I;
    }
    Ok(out)
}

/// A plane-wave solution `θ = u exp(-i p_k x^k)` of the free Dirac equation.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWave {
    /// Covariant momentum `p_k`.
    pub momentum: [f64; 4],
    pub mass: f64,
    pub amplitude: Spinor,
}

impl PlaneWave {
    /// Builds the amplitude from the column of `γ^k p_k + m` with the largest norm, which
    /// lies in the kernel of `γ^k p_k - m` on the mass shell `p_4² - |p|² = m²`.
    pub fn new(momentum: [f64; 4], mass: f64) -> Result<Self> {
        let shell = momentum[3].powi(2) - momentum[..3].iter().map(|x| x * x).sum::<f64>();
        if (shell - mass * mass).abs() > 1e-12 * (1.0 + shell.abs()) {
            return Err(Error::Invalid(format!(
                "momentum is off the mass shell: p² = {shell}, m² = {}",
                mass * mass
            )));
        }
        let gammas = gamma_matrices();
        let slash = gammas
            .iter()
            .zip(momentum)
            .fold(CMatrix4::zeros(), |acc, (g, p)| acc + g * c(p));
        let proj = slash + CMatrix4::identity() * c(mass);
        let col = (0..4)
            .max_by(|&i, &j| proj.column(i).norm().total_cmp(&proj.column(j).norm()))
            .expect("four columns");
        let u = proj.column(col).into_owned();
        let norm = u.norm();
        if norm == 0.0 {
            return Err(Error::Invalid(
                "zero momentum with zero mass has no plane wave".into(),
            ));
        }
        Ok(PlaneWave {
            momentum,
            mass,
            amplitude: u / c(norm),
        })
    }

    fn phase(&self) -> Expr {
        self.momentum
            .iter()
            .enumerate()
            .fold(Expr::zero(), |acc, (k, &p)| {
                acc.add(&Expr::num(p).mul(&Expr::var(k)))
            })
    }

    /// `z exp(-i φ)` as a complex expression.
    fn wave(&self, z: Complex64) -> ComplexExpr {
        let phi = self.phase();
        let (cos, sin) = (phi.cos(), phi.sin());
        let re = Expr::num(z.re).mul(&cos).add(&Expr::num(z.im).mul(&sin));
        let im = Expr::num(z.im).mul(&cos).sub(&Expr::num(z.re).mul(&sin));
        ComplexExpr::new(re, im)
    }

    /// The column `θ(x)` as expressions.
    pub fn column(&self) -> [ComplexExpr; 4] {
        std::array::from_fn(|r| self.wave(self.amplitude[r]))
    }

    /// The constant form `Ψ_0` with matrix `column_embed(u)`.
    pub fn amplitude_form(&self) -> Result<Multivector> {
        rep_inverse(&column_embed(&self.amplitude))
    }

    /// `Ψ = Ψ_0 exp(-i p_k x^k)`.
    pub fn form_field(&self) -> Result<FormField> {
        let psi0 = self.amplitude_form()?;
        let mut f = FormField::zero(4);
        for (b, z) in psi0.terms() {
            if z.norm() > 1e-15 {
                f.set(b, self.wave(z));
            }
        }
        Ok(f)
    }

    /// The field configuration on Minkowski space with `a = B = 0` and `H = dx^4`.
    pub fn config(&self, half_width: f64) -> Result<FieldConfig> {
        let chart = Chart::constant(&Metric::minkowski(), half_width);
        let mut h = FormField::zero(4);
        h.set(1 << 3, ComplexExpr::constant(c(1.0)));
        let mut cfg = FieldConfig::vacuum(chart, h, self.mass)?;
        cfg.psi = self.form_field()?;
        Ok(cfg)
    }
}
