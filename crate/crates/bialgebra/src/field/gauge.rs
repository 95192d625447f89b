use num_complex::Complex64;

use crate::blade;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::Jet;
use crate::manifold::{ComplexExpr, FormField, Frame, JetForm};
use crate::spin::is_spin_member;
use crate::table::ProductTable;

use super::LocalFields;

const GAUGE_TOL: f64 = 1e-9;

/// A gauge transformation `U = exp(β(x))`, `v = exp(i χ(x))` with `β` a real 2-form field.
#[derive(Debug, Clone)]
pub struct GaugeField {
    pub beta: FormField,
    pub chi: Expr,
}

impl GaugeField {
    pub fn new(beta: FormField, chi: Expr) -> Result<Self> {
        if beta
            .terms()
            .any(|(b, c)| blade::grade(b) != 2 || !c.im.is_zero())
        {
            return Err(Error::Invalid(
                "the spin gauge generator must be a real 2-form".into(),
            ));
        }
        Ok(GaugeField { beta, chi })
    }

    /// Jets of `U` and `v` at the frame's point.
    pub fn jets(&self, frame: &Frame, order: usize) -> Result<(JetForm, Jet)> {
        let beta = self.beta.jet(frame.point(), order)?;
        let u = frame.exp(&beta)?;
        let chi = ComplexExpr::real(self.chi.clone()).jet(frame.space(), frame.point(), order)?;
        let v = chi.scale_c(Complex64::i()).exp();
        Ok((u, v))
    }
}

/// Applies `Ψ' = Ψ U v`, `Ψ̄' = v^{-1} U^{-1} Ψ̄`, `a'_k = a_k + v^{-1} ∂_k v`,
/// `B'_k = U^{-1} B_k U + U^{-1} Υ_k U`, `H' = U^{-1} H U`.
///
/// `U` and `v` need one more jet order than the fields, and so does the frame.
pub fn gauge_transform(
    frame: &Frame,
    f: &LocalFields,
    u: &JetForm,
    v: &Jet,
) -> Result<LocalFields> {
    let order = f.order();
    if u.order() < order + 1 || v.order() < order + 1 || frame.order() < order + 1 {
        return Err(Error::Invalid(
            "gauge fields and frame need one jet order more than the fields".into(),
        ));
    }
    if (v.value().norm() - 1.0).abs() > GAUGE_TOL {
        return Err(Error::Invalid(format!(
            "|v| = {} is not 1",
            v.value().norm()
        )));
    }
    let table = ProductTable::new(&frame.metric())?;
    if !is_spin_member(&u.value(), &table) {
        return Err(Error::NotSpin("U is not spin-valued at the point".into()));
    }
    let n = frame.dim();
    let uinv = u.star_conj();
    let vinv = v.recip();
    let t = |x: &JetForm| x.truncate(order);
    let conj = |x: &JetForm| t(&frame.mul_all(&[&uinv, x, u]));
    let psi = t(&frame.mul(&f.psi, u).mul_jet(v));
    let psi_bar = f
        .psi_bar
        .as_ref()
        .map(|pb| t(&frame.mul(&uinv, pb).mul_jet(&vinv)));
    let a = (0..n)
        .map(|k| f.a[k].add(&vinv.mul(&v.derivative(k))).truncate(order))
        .collect();
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let bk = conj(&f.b[k]).add(&t(&frame.mul(&uinv, &frame.upsilon_k(k, u))));
        let value = bk.value();
        let scale = value.norm_max().max(1.0);
        let tol = GAUGE_TOL * scale;
        if value
            .terms()
            .any(|(bl, c)| (blade::grade(bl) != 2 && c.norm() > tol) || c.im.abs() > tol)
        {
            return Err(Error::Invalid(format!(
                "transformed B_{} left the real 2-forms",
                k + 1
            )));
        }
        b.push(bk);
    }
    Ok(LocalFields {
        psi,
        psi_bar,
        a,
        b,
        h: conj(&f.h),
        m: f.m,
        c1: f.c1,
        c2: f.c2,
    })
}
