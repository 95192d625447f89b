use serde::{Deserialize, Serialize};

use crate::blade;
use crate::error::{Error, Result};
use crate::manifold::{Chart, ChartJson, ComplexExpr, FormField, FormFieldJson, Frame, JetForm};

use super::LocalFields;

/// The fields `(Ψ, a_k, B_k, H, m)` of the model on a chart, with the coupling constants.
#[derive(Debug, Clone)]
pub struct FieldConfig {
    pub chart: Chart,
    pub psi: FormField,
    /// Imaginary scalar potentials `a_k`.
    pub a: Vec<ComplexExpr>,
    /// Real 2-form potentials `B_k`.
    pub b: Vec<FormField>,
    /// The real 1-form `H`.
    pub h: FormField,
    pub m: f64,
    pub c1: f64,
    pub c2: f64,
}

/// JSON form of a [`FieldConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfigJson {
    pub chart: ChartJson,
    pub psi: FormFieldJson,
    pub a: Vec<ScalarJson>,
    pub b: Vec<FormFieldJson>,
    pub h: FormFieldJson,
    pub m: f64,
    #[serde(default = "one")]
    pub c1: f64,
    #[serde(default = "one")]
    pub c2: f64,
}

/// A complex scalar field as expression strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarJson {
    #[serde(default = "zero")]
    pub re: String,
    #[serde(default = "zero")]
    pub im: String,
}

fn one() -> f64 {
    1.0
}

fn zero() -> String {
    "0".into()
}

impl FieldConfig {
    /// Checks shapes and the structural constraints: `B_k` real 2-forms, `H` a real 1-form,
    /// `c1`, `c2` positive.
    pub fn new(
        chart: Chart,
        psi: FormField,
        a: Vec<ComplexExpr>,
        b: Vec<FormField>,
        h: FormField,
        m: f64,
    ) -> Result<Self> {
        let cfg = FieldConfig {
            chart,
            psi,
            a,
            b,
            h,
            m,
            c1: 1.0,
            c2: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_couplings(mut self, c1: f64, c2: f64) -> Result<Self> {
        self.c1 = c1;
        self.c2 = c2;
        self.validate()?;
        Ok(self)
    }

    /// All fields zero on `chart`, with `H` the constant 1-form `h`.
    pub fn vacuum(chart: Chart, h: FormField, m: f64) -> Result<Self> {
        let n = chart.dim();
        FieldConfig::new(
            chart,
            FormField::zero(n),
            vec![ComplexExpr::constant(0.0.into()); n],
            vec![FormField::zero(n); n],
            h,
            m,
        )
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn validate(&self) -> Result<()> {
        let n = self.chart.dim();
        let check_dim = |f: &FormField| {
            if f.dim() != n {
                Err(Error::DimensionMismatch {
                    expected: n,
                    found: f.dim(),
                })
            } else {
                Ok(())
            }
        };
        check_dim(&self.psi)?;
        check_dim(&self.h)?;
        if self.a.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.a.len(),
            });
        }
        if self.b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.b.len(),
            });
        }
        for (k, b) in self.b.iter().enumerate() {
            check_dim(b)?;
            if b.terms()
                .any(|(bl, c)| blade::grade(bl) != 2 || !c.im.is_zero())
            {
                return Err(Error::Invalid(format!("B_{} must be a real 2-form", k + 1)));
            }
        }
        if self
            .h
            .terms()
            .any(|(bl, c)| blade::grade(bl) != 1 || !c.im.is_zero())
        {
            return Err(Error::Invalid("H must be a real 1-form".into()));
        }
        if let Some(k) = self.a.iter().position(|a| !a.re.is_zero()) {
            return Err(Error::Invalid(format!(
                "a_{} must be purely imaginary",
                k + 1
            )));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::Invalid(
                "coupling constants c1, c2 must be positive".into(),
            ));
        }
        let arity = self
            .a
            .iter()
            .map(ComplexExpr::arity)
            .chain(
                std::iter::once(&self.psi)
                    .chain(&self.b)
                    .chain(std::iter::once(&self.h))
                    .flat_map(|f| f.terms().map(|(_, c)| c.arity())),
            )
            .max()
            .unwrap_or(0);
        if arity > n {
            return Err(Error::Invalid(format!(
                "a field uses a coordinate beyond x{n}"
            )));
        }
        Ok(())
    }

    /// The frame and field jets at `p`, both to order `order`.
    pub fn local(&self, p: &[f64], order: usize) -> Result<(Frame, LocalFields)> {
        let frame = self.chart.frame(p, order)?;
        let fields = self.fields_at(&frame, order)?;
        Ok((frame, fields))
    }

    /// Field jets of the given order at the frame's point.
    pub fn fields_at(&self, frame: &Frame, order: usize) -> Result<LocalFields> {
        let p = frame.point();
        let jet = |f: &FormField| -> Result<JetForm> { f.jet(p, order) };
        Ok(LocalFields {
            psi: jet(&self.psi)?,
            psi_bar: None,
            a: self
                .a
                .iter()
                .map(|a| a.jet(frame.space(), p, order))
                .collect::<Result<_>>()?,
            b: self.b.iter().map(jet).collect::<Result<_>>()?,
            h: jet(&self.h)?,
            m: self.m,
            c1: self.c1,
            c2: self.c2,
        })
    }

    pub fn to_json(&self) -> FieldConfigJson {
        FieldConfigJson {
            chart: self.chart.to_json(),
            psi: self.psi.to_json(),
            a: self
                .a
                .iter()
                .map(|a| ScalarJson {
                    re: a.re.to_string(),
                    im: a.im.to_string(),
                })
                .collect(),
            b: self.b.iter().map(FormField::to_json).collect(),
            h: self.h.to_json(),
            m: self.m,
            c1: self.c1,
            c2: self.c2,
        }
    }

    pub fn from_json(json: &FieldConfigJson) -> Result<Self> {
        let chart = Chart::from_json(&json.chart)?;
        let n = chart.dim();
        let ctx = |what: String| move |e: Error| Error::Invalid(format!("{what}: {e}"));
        let psi = FormField::from_json(&json.psi, n).map_err(ctx("psi".into()))?;
        let a = json
            .a
            .iter()
            .enumerate()
            .map(|(k, s)| ComplexExpr::parse(&s.re, &s.im, n).map_err(ctx(format!("a[{k}]"))))
            .collect::<Result<Vec<_>>>()?;
        let b = json
            .b
            .iter()
            .enumerate()
            .map(|(k, f)| FormField::from_json(f, n).map_err(ctx(format!("b[{k}]"))))
            .collect::<Result<Vec<_>>>()?;
        let h = FormField::from_json(&json.h, n).map_err(ctx("h".into()))?;
        FieldConfig::new(chart, psi, a, b, h, json.m)?.with_couplings(json.c1, json.c2)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: FieldConfigJson = serde_json::from_str(s)?;
        FieldConfig::from_json(&json)
    }
}
