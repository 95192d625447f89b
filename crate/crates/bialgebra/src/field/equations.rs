use num_complex::Complex64;

use crate::blade::{self, Blade};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::manifold::{Frame, JetForm};
use crate::multivector::Multivector;

/// Jets of the fields at one point. `psi_bar` overrides `H Ψ*` when the conjugate
/// wave form is treated as an independent field.
#[derive(Debug, Clone)]
pub struct LocalFields {
    pub psi: JetForm,
    pub psi_bar: Option<JetForm>,
    pub a: Vec<Jet>,
    pub b: Vec<JetForm>,
    pub h: JetForm,
    pub m: f64,
    pub c1: f64,
    pub c2: f64,
}

impl LocalFields {
    pub fn order(&self) -> usize {
        let mut o = self.psi.order().min(self.h.order());
        for a in &self.a {
            o = o.min(a.order());
        }
        for b in &self.b {
            o = o.min(b.order());
        }
        if let Some(pb) = &self.psi_bar {
            o = o.min(pb.order());
        }
        o
    }

    /// `Ψ̄`: the independent field if set, otherwise `H Ψ*`.
    pub fn bar_psi(&self, frame: &Frame) -> JetForm {
        match &self.psi_bar {
            Some(pb) => pb.clone(),
            None => frame.mul(&self.h, &self.psi.star_conj()),
        }
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `Υ_k Ψ - Ψ a_k - Ψ B_k`.
fn gauge_derivative(frame: &Frame, f: &LocalFields, k: usize) -> JetForm {
    let psi = &f.psi;
    frame
        .upsilon_k(k, psi)
        .sub(&psi.mul_jet(&f.a[k]))
        .sub(&frame.mul(psi, &f.b[k]))
}

/// `i dx^k (Υ_k Ψ - Ψ a_k - Ψ B_k) - m Ψ`, one order below the fields.
pub fn main_form(frame: &Frame, f: &LocalFields) -> JetForm {
    let n = frame.dim();
    let mut out = f.psi.scale((-f.m).into());
    for k in 0..n {
        out = out.add(
            &frame
                .mul_generator(k, &gauge_derivative(frame, f, k))
                .scale(I),
        );
    }
    out.truncate(f.psi.order() - 1)
}

/// The main-equation residual at the expansion point.
pub fn main_residual(frame: &Frame, f: &LocalFields) -> Multivector {
    main_form(frame, f).value()
}

/// `C = Ψ* (i dx^k (Υ_k Ψ - Ψ a_k - Ψ B_k) - m Ψ)`.
pub fn c_form(frame: &Frame, f: &LocalFields) -> JetForm {
    frame.mul(&f.psi.star_conj(), &main_form(frame, f))
}

/// `C*` from its expanded formula `(-(Υ_k Ψ* + a_k Ψ* + B_k Ψ*) i dx^k - m Ψ*) Ψ`.
pub fn c_star_form(frame: &Frame, f: &LocalFields) -> JetForm {
    let ps = f.psi.star_conj();
    conjugate_operator(frame, f, &ps, &f.psi)
}

/// `(-(Υ_k X + a_k X + B_k X) i dx^k - m X) Ψ`.
fn conjugate_operator(frame: &Frame, f: &LocalFields, x: &JetForm, psi: &JetForm) -> JetForm {
    let n = frame.dim();
    let mut left = x.scale((-f.m).into());
    for k in 0..n {
        let inner = frame
            .upsilon_k(k, x)
            .add(&x.mul_jet(&f.a[k]))
            .add(&frame.mul(&f.b[k], x));
        let term = frame.mul(&inner, &frame.generator(k)).scale(-I);
        left = left.add(&term);
    }
    frame.mul(&left.truncate(x.order() - 1), psi)
}

/// `H H - e` and the defects `Υ_k H - H B_k + B_k H`.
pub fn h_defects(frame: &Frame, f: &LocalFields) -> (Multivector, Vec<JetForm>) {
    let n = frame.dim();
    let square = frame.mul(&f.h, &f.h).value() - Multivector::scalar(n, 1.0.into());
    let defects = (0..n)
        .map(|k| {
            frame
                .upsilon_k(k, &f.h)
                .sub(&frame.mul(&f.h, &f.b[k]))
                .add(&frame.mul(&f.b[k], &f.h))
        })
        .collect();
    (square, defects)
}

/// Largest H-equation defect at the point.
pub fn h_defect_norm(frame: &Frame, f: &LocalFields) -> f64 {
    let (sq, d) = h_defects(frame, f);
    d.iter()
        .map(|e| e.value().norm_max())
        .fold(sq.norm_max(), f64::max)
}

/// The current `j^k = Tr(Ψ̄ dx^k Ψ)` as jets.
pub fn current(frame: &Frame, f: &LocalFields) -> Vec<Jet> {
    let bar = f.bar_psi(frame);
    (0..frame.dim())
        .map(|k| {
            frame
                .mul(&bar, &frame.mul_generator(k, &f.psi))
                .scalar_part()
                .clone()
        })
        .collect()
}

/// Both sides of the conservation identity
/// `∂_k(sqrt|g| j^k) / sqrt|g| = Tr(-i H (C - C*))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conservation {
    pub divergence: Complex64,
    pub source: Complex64,
    /// Largest imaginary part among the `j^k`.
    pub current_imag: f64,
}

impl Conservation {
    pub fn defect(&self) -> f64 {
        (self.divergence - self.source).norm()
    }
}

/// Evaluates the conservation identity; requires the H-equations to hold at the point.
pub fn conservation(frame: &Frame, f: &LocalFields, h_tolerance: f64) -> Result<Conservation> {
    let hd = h_defect_norm(frame, f);
    if hd > h_tolerance {
        return Err(Error::Invalid(format!(
            "H-equation defect {hd:e} exceeds {h_tolerance:e}"
        )));
    }
    let j = current(frame, f);
    let sg = frame.sqrt_det();
    let mut div = Complex64::new(0.0, 0.0);
    for (k, jk) in j.iter().enumerate() {
        div += sg.mul(jk).partial(k);
    }
    div /= sg.value();
    let c = c_form(frame, f);
    let cs = c_star_form(frame, f);
    let source = frame.mul(&f.h, &c.sub(&cs)).scalar_part().value() * (-I);
    let current_imag = j.iter().map(|x| x.value().im.abs()).fold(0.0, f64::max);
    Ok(Conservation {
        divergence: div,
        source,
        current_imag,
    })
}

/// Field strengths `f_{ij}` and `G_{ij}`, one order below the potentials.
#[derive(Debug, Clone)]
pub struct Strengths {
    dim: usize,
    pub f: Vec<Jet>,
    pub g: Vec<JetForm>,
}

impl Strengths {
    pub fn f(&self, i: usize, j: usize) -> &Jet {
        &self.f[i * self.dim + j]
    }

    pub fn g(&self, i: usize, j: usize) -> &JetForm {
        &self.g[i * self.dim + j]
    }

    /// `f^{ij} = g^{ir} g^{js} f_{rs}`.
    pub fn f_upper(&self, frame: &Frame, i: usize, j: usize) -> Jet {
        let n = self.dim;
        let mut s = self.f(0, 0).zero_of();
        for r in 0..n {
            for t in 0..n {
                s = s.add(
                    &frame
                        .g_upper(i, r)
                        .mul(frame.g_upper(j, t))
                        .mul(self.f(r, t)),
                );
            }
        }
        s
    }

    /// `G^{ij} = g^{ir} g^{js} G_{rs}`.
    pub fn g_upper(&self, frame: &Frame, i: usize, j: usize) -> JetForm {
        let n = self.dim;
        let mut s = self.g(0, 0).zero_like();
        for r in 0..n {
            for t in 0..n {
                let w = frame.g_upper(i, r).mul(frame.g_upper(j, t));
                s = s.add(&self.g(r, t).mul_jet(&w));
            }
        }
        s
    }
}

/// `f_{ij} = ∂_i a_j - ∂_j a_i` and `G_{ij} = Υ_i B_j - Υ_j B_i + B_i B_j - B_j B_i`.
pub fn field_strengths(frame: &Frame, f: &LocalFields) -> Strengths {
    let n = frame.dim();
    let mut fs = Vec::with_capacity(n * n);
    let mut gs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            fs.push(f.a[j].derivative(i).sub(&f.a[i].derivative(j)));
            let g = frame
                .upsilon_k(i, &f.b[j])
                .sub(&frame.upsilon_k(j, &f.b[i]))
                .add(&frame.commutator(&f.b[i], &f.b[j]));
            gs.push(g);
        }
    }
    Strengths {
        dim: n,
        f: fs,
        g: gs,
    }
}

/// `L1` in its expanded form, with `Ψ̄` from [`LocalFields::bar_psi`].
pub fn lagrangian_l1(frame: &Frame, f: &LocalFields) -> Complex64 {
    let bar = f.bar_psi(frame);
    let first = frame.mul(&bar, &main_form(frame, f)).scalar_part().value();
    let second = conjugate_operator(frame, f, &bar, &f.psi)
        .scalar_part()
        .value();
    first + second
}

/// `L1 = Tr(H (C + C*))`.
pub fn lagrangian_l1_h(frame: &Frame, f: &LocalFields) -> Complex64 {
    let c = c_form(frame, f);
    frame
        .mul(&f.h, &c.add(&c.star_conj()))
        .scalar_part()
        .value()
}

/// `L0 = Tr(c1 sqrt|g| f_{ij} f^{ij} + c2 sqrt|g| G_{ij} G^{ij})`.
pub fn lagrangian_l0(frame: &Frame, f: &LocalFields) -> Complex64 {
    let s = field_strengths(frame, f);
    let n = frame.dim();
    let sg = frame.sqrt_det().value();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let fu = s.f_upper(frame, i, j).value();
            total += s.f(i, j).value() * fu * f.c1;
            let gu = s.g_upper(frame, i, j);
            total += frame.mul(s.g(i, j), &gu).scalar_part().value() * f.c2;
        }
    }
    total * sg
}

/// `L = L0 + L1`.
pub fn lagrangian(frame: &Frame, f: &LocalFields) -> Complex64 {
    lagrangian_l0(frame, f) + lagrangian_l1(frame, f)
}

/// `J^j = i Ψ̄ dx^j Ψ` at the point.
pub fn source_forms(frame: &Frame, f: &LocalFields) -> Vec<Multivector> {
    let bar = f.bar_psi(frame);
    (0..frame.dim())
        .map(|j| frame.mul(&bar, &frame.mul_generator(j, &f.psi)).value() * I)
        .collect()
}

/// The projections `(i Im p, Σ Re p_{i1 i2} dx^{i1} ∧ dx^{i2})` of `J`.
pub fn projections(j: &Multivector) -> (Complex64, Multivector) {
    let scalar = Complex64::new(0.0, j.scalar_part().im);
    let two = j.map_blades(|b, c| {
        if blade::grade(b) == 2 {
            c.re.into()
        } else {
            0.0.into()
        }
    });
    (scalar, two)
}

/// Residuals of the complete system at one point.
#[derive(Debug, Clone)]
pub struct SystemResiduals {
    pub main: Multivector,
    /// `(∇_i a_j - ∇_j a_i) - f_{ij}`, largest over `i, j`.
    pub f_definition: f64,
    /// `G_{ij}` with tensor-covariant derivatives minus `G_{ij}`, largest over `i, j`.
    pub g_definition: f64,
    pub maxwell: Vec<Complex64>,
    pub yang_mills: Vec<Multivector>,
    pub h_square: Multivector,
    pub h_derivative: Vec<Multivector>,
    /// `D_{ij} + 2 G_{ij}` for `i < j`.
    pub curvature_link: Vec<Multivector>,
}

impl SystemResiduals {
    /// `(name, max-norm)` for every residual group, in a fixed order.
    pub fn norms(&self) -> Vec<(&'static str, f64)> {
        let max = |v: &[Multivector]| v.iter().map(Multivector::norm_max).fold(0.0, f64::max);
        vec![
            ("main", self.main.norm_max()),
            ("f_definition", self.f_definition),
            ("g_definition", self.g_definition),
            (
                "maxwell",
                self.maxwell.iter().map(|c| c.norm()).fold(0.0, f64::max),
            ),
            ("yang_mills", max(&self.yang_mills)),
            ("h_square", self.h_square.norm_max()),
            ("h_derivative", max(&self.h_derivative)),
            ("curvature_link", max(&self.curvature_link)),
        ]
    }

    /// Largest residual among the main equation, the strength definitions and the
    /// Maxwell and Yang-Mills equations.
    pub fn euler_lagrange_max(&self) -> f64 {
        self.norms().iter().take(5).map(|x| x.1).fold(0.0, f64::max)
    }

    pub fn max(&self) -> f64 {
        self.norms().iter().map(|x| x.1).fold(0.0, f64::max)
    }
}

/// Evaluates every equation of the system; needs field jets and a frame of order at least 2.
pub fn system_residuals(frame: &Frame, f: &LocalFields) -> Result<SystemResiduals> {
    if frame.order() < 2 || f.order() < 2 {
        return Err(Error::Invalid(
            "system residuals need jets of order 2".into(),
        ));
    }
    let n = frame.dim();
    let s = field_strengths(frame, f);
    let sg = frame.sqrt_det();
    let j_forms = source_forms(frame, f);
    let mut f_def: f64 = 0.0;
    let mut g_def: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut fa = f.a[j].derivative(i).sub(&f.a[i].derivative(j));
            let mut gb = frame
                .upsilon_k(i, &f.b[j])
                .sub(&frame.upsilon_k(j, &f.b[i]));
            for l in 0..n {
                let gij = frame.gamma(l, i, j);
                let gji = frame.gamma(l, j, i);
                fa = fa.sub(&gij.mul(&f.a[l])).add(&gji.mul(&f.a[l]));
                gb = gb.sub(&f.b[l].mul_jet(gij)).add(&f.b[l].mul_jet(gji));
            }
            gb = gb.add(&frame.commutator(&f.b[i], &f.b[j]));
            f_def = f_def.max((fa.value() - s.f(i, j).value()).norm());
            g_def = g_def.max(gb.value().distance(&s.g(i, j).value()));
        }
    }
    let mut maxwell = Vec::with_capacity(n);
    let mut yang_mills = Vec::with_capacity(n);
    for j in 0..n {
        let mut div = Complex64::new(0.0, 0.0);
        let mut ym = Multivector::zero(n);
        let mut bracket = Multivector::zero(n);
        for i in 0..n {
            div += sg.mul(&s.f_upper(frame, i, j)).partial(i);
            let gu = s.g_upper(frame, i, j);
            ym = ym + frame.upsilon_k(i, &gu.mul_jet(sg)).value();
            bracket = bracket + frame.commutator(&gu, &f.b[i]).value();
        }
        let (p0, p2) = projections(&j_forms[j]);
        maxwell.push(div / sg.value() - p0 / f.c1);
        yang_mills.push(ym * (1.0 / sg.value().re) - bracket - p2 * (1.0 / f.c2));
    }
    let (h_square, h_der) = h_defects(frame, f);
    let curv = frame.curvature()?;
    let mut link = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            link.push(curv.d_form(i, j) + s.g(i, j).value() * 2.0);
        }
    }
    Ok(SystemResiduals {
        main: main_residual(frame, f),
        f_definition: f_def,
        g_definition: g_def,
        maxwell,
        yang_mills,
        h_square,
        h_derivative: h_der.iter().map(JetForm::value).collect(),
        curvature_link: link,
    })
}

/// `max_{ij} |G_{ij} + D_{ij} / 2|`.
pub fn curvature_link_defect(frame: &Frame, f: &LocalFields) -> Result<f64> {
    let s = field_strengths(frame, f);
    let curv = frame.curvature()?;
    let n = frame.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = s.g(i, j).value() + curv.d_form(i, j) * 0.5;
            worst = worst.max(d.norm_max());
        }
    }
    Ok(worst)
}

/// The compatibility identity for `H`, exact for any `H` and `B`:
/// `[Υ_i, Υ_j] H - [H, G_{ij}] = Υ_i E_j - Υ_j E_i + [E_i, B_j] - [E_j, B_i]`
/// with `E_k` the H-equation defects. Returns the largest mismatch and the largest
/// value of the left side.
pub fn hg_identity(frame: &Frame, f: &LocalFields) -> (f64, f64) {
    let n = frame.dim();
    let s = field_strengths(frame, f);
    let (_, e) = h_defects(frame, f);
    let mut mismatch: f64 = 0.0;
    let mut size: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let comm = frame
                .upsilon_k(i, &frame.upsilon_k(j, &f.h))
                .sub(&frame.upsilon_k(j, &frame.upsilon_k(i, &f.h)));
            let lhs = comm.value() - frame.commutator(&f.h, s.g(i, j)).value();
            let rhs = frame.upsilon_k(i, &e[j]).value() - frame.upsilon_k(j, &e[i]).value()
                + frame.commutator(&e[i], &f.b[j]).value()
                - frame.commutator(&e[j], &f.b[i]).value();
            mismatch = mismatch.max(lhs.distance(&rhs));
            size = size.max(lhs.norm_max());
        }
    }
    (mismatch, size)
}

/// Coefficients `b_{kl,ij}` of `G_{ij} = ½ b_{kl,ij} dx^k ∧ dx^l`, indexed `[k][l][i][j]`.
pub fn strength_components(frame: &Frame, f: &LocalFields) -> Vec<Vec<Vec<Vec<f64>>>> {
    let n = frame.dim();
    let s = field_strengths(frame, f);
    (0..n)
        .map(|k| {
            (0..n)
                .map(|l| {
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| {
                                    if k == l {
                                        return 0.0;
                                    }
                                    let b: Blade = (1 << k) | (1 << l);
                                    let sign = if k < l { 1.0 } else { -1.0 };
                                    sign * s.g(i, j).value().coeff(b).re
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}
