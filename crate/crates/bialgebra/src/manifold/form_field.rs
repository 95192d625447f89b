use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blade::{self, Basis, Blade};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{Jet, JetSpace};
use crate::multivector::Multivector;
use crate::table::ProductTable;

use super::jetform::JetForm;

/// A complex-valued function `re + i im` of the coordinates.
#[derive(Debug, Clone)]
pub struct ComplexExpr {
    pub re: Expr,
    pub im: Expr,
}

impl ComplexExpr {
    pub fn new(re: Expr, im: Expr) -> Self {
        ComplexExpr { re, im }
    }

    pub fn real(re: Expr) -> Self {
        ComplexExpr {
            re,
            im: Expr::zero(),
        }
    }

    pub fn imag(im: Expr) -> Self {
        ComplexExpr {
            re: Expr::zero(),
            im,
        }
    }

    pub fn constant(c: Complex64) -> Self {
        ComplexExpr {
            re: Expr::num(c.re),
            im: Expr::num(c.im),
        }
    }

    pub fn parse(re: &str, im: &str, dim: usize) -> Result<Self> {
        Ok(ComplexExpr {
            re: Expr::parse(re, dim)?,
            im: Expr::parse(im, dim)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn arity(&self) -> usize {
        self.re.arity().max(self.im.arity())
    }

    pub fn eval(&self, p: &[f64]) -> Result<Complex64> {
        Ok(Complex64::new(self.re.eval(p)?, self.im.eval(p)?))
    }

    /// The jet of the function at `p`.
    pub fn jet(&self, space: &Arc<JetSpace>, p: &[f64], order: usize) -> Result<Jet> {
        let re = Jet::eval_expr(&self.re, space, p, order)?;
        if self.im.is_zero() {
            return Ok(re);
        }
        let im = Jet::eval_expr(&self.im, space, p, order)?;
        Ok(re.add(&im.scale_c(Complex64::i())))
    }

    pub fn diff(&self, k: usize) -> ComplexExpr {
        ComplexExpr {
            re: self.re.diff(k),
            im: self.im.diff(k),
        }
    }

    pub fn add(&self, o: &ComplexExpr) -> ComplexExpr {
        ComplexExpr {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn scale(&self, s: f64) -> ComplexExpr {
        let s = Expr::num(s);
        ComplexExpr {
            re: self.re.mul(&s),
            im: self.im.mul(&s),
        }
    }

    /// Product with a real function.
    pub fn mul_real(&self, f: &Expr) -> ComplexExpr {
        ComplexExpr {
            re: self.re.mul(f),
            im: self.im.mul(f),
        }
    }

    /// Product with a complex constant.
    pub fn scale_c(&self, z: Complex64) -> ComplexExpr {
        let (a, b) = (Expr::num(z.re), Expr::num(z.im));
        ComplexExpr {
            re: self.re.mul(&a).sub(&self.im.mul(&b)),
            im: self.re.mul(&b).add(&self.im.mul(&a)),
        }
    }

    pub fn substitute(&self, subs: &[Expr]) -> ComplexExpr {
        ComplexExpr {
            re: self.re.substitute(subs),
            im: self.im.substitute(subs),
        }
    }
}

/// A differential form whose Grassmann coefficients are expressions in the coordinates.
#[derive(Debug, Clone)]
pub struct FormField {
    dim: usize,
    coeffs: Vec<Option<ComplexExpr>>,
}

/// JSON form of a [`FormField`]: Grassmann terms with expression strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFieldJson {
    pub basis: Basis,
    pub terms: Vec<FieldTermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldTermJson {
    pub indices: Vec<usize>,
    #[serde(default = "zero_string")]
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

impl FormField {
    pub fn zero(dim: usize) -> Self {
        FormField {
            dim,
            coeffs: vec![None; 1 << dim],
        }
    }

    /// A form with constant coefficients.
    pub fn constant(u: &Multivector) -> Self {
        let mut f = FormField::zero(u.dim());
        for (b, c) in u.terms() {
            f.set(b, ComplexExpr::constant(c));
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, b: Blade, c: ComplexExpr) {
        self.coeffs[b as usize] = if c.is_zero() { None } else { Some(c) };
    }

    /// Adds `c e^I` for the ordered index list `idx` (0-based).
    pub fn add_term(&mut self, idx: &[usize], c: ComplexExpr) -> Result<()> {
        if let Some(&i) = idx.iter().find(|&&i| i >= self.dim) {
            return Err(Error::InvalidIndices(format!(
                "index {} outside 1..={}",
                i + 1,
                self.dim
            )));
        }
        let (sign, b) = blade::from_indices(idx);
        if sign == 0.0 {
            return Err(Error::InvalidIndices(format!("repeated index in {idx:?}")));
        }
        let c = c.scale(sign);
        let merged = match &self.coeffs[b as usize] {
            Some(old) => old.add(&c),
            None => c,
        };
        self.set(b, merged);
        Ok(())
    }

    fn accumulate(&mut self, b: Blade, c: ComplexExpr) {
        let merged = match self.coeffs[b as usize].take() {
            Some(old) => old.add(&c),
            None => c,
        };
        self.set(b, merged);
    }

    pub fn add(&self, o: &FormField) -> FormField {
        assert_eq!(self.dim, o.dim, "form dimensions differ");
        let mut out = self.clone();
        for (b, c) in o.terms() {
            out.accumulate(b, c.clone());
        }
        out
    }

    /// Product with a real function.
    pub fn mul_real(&self, f: &Expr) -> FormField {
        let mut out = FormField::zero(self.dim);
        for (b, c) in self.terms() {
            out.set(b, c.mul_real(f));
        }
        out
    }

    /// Substitutes expressions for the coordinates in every coefficient.
    pub fn substitute(&self, subs: &[Expr]) -> FormField {
        let mut out = FormField::zero(self.dim);
        for (b, c) in self.terms() {
            out.set(b, c.substitute(subs));
        }
        out
    }

    /// The Clifford product `U c` (or `c U` with `left`) with a constant multivector, using
    /// a table of the same dimension.
    pub fn mul_constant(&self, table: &ProductTable, c: &Multivector, left: bool) -> FormField {
        assert_eq!(
            table.dim(),
            self.dim,
            "table dimension differs from the form"
        );
        let mut out = FormField::zero(self.dim);
        for (b, u) in self.terms() {
            for (bc, z) in c.terms() {
                let prod = if left {
                    table.product(bc, b)
                } else {
                    table.product(b, bc)
                };
                for &(t, s) in prod {
                    out.accumulate(t, u.scale_c(z * s));
                }
            }
        }
        out
    }

    pub fn coeff(&self, b: Blade) -> Option<&ComplexExpr> {
        self.coeffs[b as usize].as_ref()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &ComplexExpr)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(b, c)| c.as_ref().map(|c| (b as Blade, c)))
    }

    pub fn eval(&self, p: &[f64]) -> Result<Multivector> {
        let mut out = Multivector::zero(self.dim);
        for (b, c) in self.terms() {
            out.set(b, c.eval(p)?);
        }
        Ok(out)
    }

    /// The jet of the form at `p`.
    pub fn jet(&self, p: &[f64], order: usize) -> Result<JetForm> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        let space = JetSpace::get(self.dim);
        let zero = Jet::real(&space, order, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match c {
                Some(c) => c.jet(&space, p, order),
                None => Ok(zero.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(JetForm::from_coeffs(self.dim, coeffs))
    }

    /// The exterior derivative from symbolic partials, `dU = Σ_k ∂_k u_I dx^k ∧ dx^I`.
    pub fn d(&self) -> FormField {
        let mut out = FormField::zero(self.dim);
        for (b, c) in self.terms() {
            for k in 0..self.dim {
                let bit: Blade = 1 << k;
                if b & bit != 0 {
                    continue;
                }
                let dc = c.diff(k);
                if dc.is_zero() {
                    continue;
                }
                let t = (b | bit) as usize;
                let term = dc.scale(blade::wedge_sign(bit, b));
                out.coeffs[t] = Some(match out.coeffs[t].take() {
                    Some(old) => old.add(&term),
                    None => term,
                });
            }
        }
        out
    }

    pub fn to_json(&self) -> FormFieldJson {
        FormFieldJson {
            basis: Basis::Grassmann,
            terms: self
                .terms()
                .map(|(b, c)| FieldTermJson {
                    indices: blade::indices(b).iter().map(|i| i + 1).collect(),
                    re: c.re.to_string(),
                    im: c.im.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &FormFieldJson, dim: usize) -> Result<Self> {
        if json.basis != Basis::Grassmann {
            return Err(Error::Invalid(
                "form fields are given in the Grassmann basis; the Clifford basis depends on the point".into(),
            ));
        }
        let mut f = FormField::zero(dim);
        for t in &json.terms {
            if let Some(&i) = t.indices.iter().find(|&&i| i == 0 || i > dim) {
                return Err(Error::InvalidIndices(format!(
                    "index {i} outside 1..={dim}"
                )));
            }
            let idx: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
            f.add_term(&idx, ComplexExpr::parse(&t.re, &t.im, dim)?)?;
        }
        Ok(f)
    }
}
