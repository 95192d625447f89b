use num_complex::Complex64;

use crate::blade::{self, Blade};
use crate::error::{Error, Result};
use crate::manifold::Frame;

use super::{lagrangian, FieldConfig, LocalFields};

/// Which fields are varied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sectors {
    pub psi_bar: bool,
    pub a: bool,
    pub b: bool,
}

impl Sectors {
    pub const ALL: Sectors = Sectors {
        psi_bar: true,
        a: true,
        b: true,
    };
    pub const PSI_BAR: Sectors = Sectors {
        psi_bar: true,
        a: false,
        b: false,
    };
    pub const GAUGE: Sectors = Sectors {
        psi_bar: false,
        a: true,
        b: true,
    };
}

/// A real field component `u_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// Real or imaginary part of a `Ψ̄` coefficient.
    PsiBar { blade: Blade, imaginary: bool },
    /// `Im a_k`.
    A { k: usize },
    /// A coefficient of the real 2-form `B_k`.
    B { k: usize, blade: Blade },
}

impl Component {
    pub fn label(&self) -> String {
        let idx = |b: Blade| {
            blade::indices(b)
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join("")
        };
        match *self {
            Component::PsiBar { blade, imaginary } => {
                format!(
                    "{}(psi_bar[{}])",
                    if imaginary { "im" } else { "re" },
                    idx(blade)
                )
            }
            Component::A { k } => format!("im(a{})", k + 1),
            Component::B { k, blade } => format!("b{}[{}]", k + 1, idx(blade)),
        }
    }
}

/// The Euler-Lagrange expressions `∂L_R/∂u_α - ∂_k ∂L_R/∂u_{α;k}` at a point.
#[derive(Debug, Clone)]
pub struct VariationalReport {
    pub components: Vec<(Component, f64)>,
    /// Largest magnitude among the individual terms that enter the expressions.
    pub scale: f64,
}

impl VariationalReport {
    pub fn max_gradient(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.1.abs())
            .fold(0.0, f64::max)
    }

    pub fn relative(&self) -> f64 {
        self.max_gradient() / self.scale.max(f64::MIN_POSITIVE)
    }

    pub fn get(&self, c: Component) -> Option<f64> {
        self.components.iter().find(|x| x.0 == c).map(|x| x.1)
    }
}

/// Step for the derivative with respect to a field component. `L_R` is a polynomial of
/// degree at most 4 in each component, which the five-point stencil differentiates exactly.
const FIELD_STEP: f64 = 1e-2;
/// Step for the coordinate derivative of `∂L_R/∂u_{α;k}`.
const COORD_STEP: f64 = 1e-3;

fn stencil(f: impl Fn(f64) -> Result<f64>, h: f64) -> Result<f64> {
    Ok((-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h))
}

fn local(cfg: &FieldConfig, x: &[f64]) -> Result<(Frame, LocalFields)> {
    let (frame, mut fields) = cfg.local(x, 1)?;
    fields.psi_bar = Some(fields.bar_psi(&frame));
    Ok((frame, fields))
}

fn perturbed(fields: &LocalFields, c: Component, index: usize, delta: f64) -> LocalFields {
    let mut out = fields.clone();
    let bump = |jet: &mut crate::jet::Jet, z: Complex64| jet.coeffs_mut()[index] += z;
    match c {
        Component::PsiBar { blade, imaginary } => {
            let pb = out
                .psi_bar
                .as_mut()
                .expect("Ψ̄ is independent during variation");
            let mut coeff = pb.coeff(blade).clone();
            bump(
                &mut coeff,
                if imaginary {
                    Complex64::new(0.0, delta)
                } else {
                    delta.into()
                },
            );
            pb.set(blade, coeff);
        }
        Component::A { k } => bump(&mut out.a[k], Complex64::new(0.0, delta)),
        Component::B { k, blade } => {
            let mut coeff = out.b[k].coeff(blade).clone();
            bump(&mut coeff, delta.into());
            out.b[k].set(blade, coeff);
        }
    }
    out
}

/// `∂L_R / ∂(jet coefficient index of component c)`.
fn partial(frame: &Frame, fields: &LocalFields, c: Component, index: usize) -> Result<f64> {
    stencil(
        |d| Ok(lagrangian(frame, &perturbed(fields, c, index, d)).re),
        FIELD_STEP,
    )
}

/// Evaluates the Euler-Lagrange expressions of `L_R = Re L` by finite differences, with
/// `Ψ̄ = H Ψ*` treated as an independent field. `p` must lie at least two coordinate
/// steps inside the chart domain.
pub fn euler_lagrange(cfg: &FieldConfig, p: &[f64], sectors: Sectors) -> Result<VariationalReport> {
    let n = cfg.dim();
    let inside = cfg
        .chart
        .domain()
        .iter()
        .zip(p)
        .all(|(&(lo, hi), &x)| x - 2.0 * COORD_STEP >= lo && x + 2.0 * COORD_STEP <= hi);
    if p.len() != n || !inside {
        return Err(Error::OutsideDomain(p.to_vec()));
    }
    let mut comps = Vec::new();
    if sectors.psi_bar {
        for b in 0..(1 << n) as Blade {
            comps.push(Component::PsiBar {
                blade: b,
                imaginary: false,
            });
            comps.push(Component::PsiBar {
                blade: b,
                imaginary: true,
            });
        }
    }
    if sectors.a {
        comps.extend((0..n).map(|k| Component::A { k }));
    }
    if sectors.b {
        for k in 0..n {
            comps.extend(
                blade::blades_of_grade(n, 2)
                    .into_iter()
                    .map(|blade| Component::B { k, blade }),
            );
        }
    }
    let (frame0, fields0) = local(cfg, p)?;
    // neighbours along each axis at offsets -2h, -h, h, 2h
    let mut neighbours = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = Vec::with_capacity(4);
        for s in [-2.0, -1.0, 1.0, 2.0] {
            let mut x = p.to_vec();
            x[k] += s * COORD_STEP;
            row.push(local(cfg, &x)?);
        }
        neighbours.push(row);
    }
    let mut scale: f64 = 0.0;
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        let direct = partial(&frame0, &fields0, c, 0)?;
        scale = scale.max(direct.abs());
        let mut divergence = 0.0;
        for (k, row) in neighbours.iter().enumerate() {
            let phi = row
                .iter()
                .map(|(fr, fi)| partial(fr, fi, c, 1 + k))
                .collect::<Result<Vec<_>>>()?;
            let dk = (-phi[3] + 8.0 * phi[2] - 8.0 * phi[1] + phi[0]) / (12.0 * COORD_STEP);
            scale = scale.max(dk.abs());
            divergence += dk;
        }
        out.push((c, direct - divergence));
    }
    Ok(VariationalReport {
        components: out,
        scale,
    })
}
