use std::sync::Arc;

use num_complex::Complex64;

use crate::blade::{self, parity, reversion_sign, Blade};
use crate::jet::{Jet, JetSpace};
use crate::multivector::Multivector;

/// A form-valued jet: one [`Jet`] per Grassmann blade, all of the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct JetForm {
    dim: usize,
    coeffs: Vec<Jet>,
}

impl JetForm {
    pub fn zero(space: &Arc<JetSpace>, dim: usize, order: usize) -> JetForm {
        let z = Jet::real(space, order, 0.0);
        JetForm {
            dim,
            coeffs: vec![z; 1 << dim],
        }
    }

    /// A form with constant coefficients.
    pub fn constant(space: &Arc<JetSpace>, order: usize, u: &Multivector) -> JetForm {
        JetForm {
            dim: u.dim(),
            coeffs: u
                .coeffs()
                .iter()
                .map(|&c| Jet::constant(space, order, c))
                .collect(),
        }
    }

    /// `f e^I` for a scalar jet `f`.
    pub fn blade(dim: usize, b: Blade, f: Jet) -> JetForm {
        let mut out = JetForm {
            dim,
            coeffs: vec![f.zero_of(); 1 << dim],
        };
        out.coeffs[b as usize] = f;
        out
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<Jet>) -> JetForm {
        assert_eq!(coeffs.len(), 1 << dim, "a form needs 2^n coefficients");
        let order = coeffs.iter().map(Jet::order).min().unwrap_or(0);
        let coeffs = coeffs.into_iter().map(|c| c.truncate(order)).collect();
        JetForm { dim, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.coeffs[0].order()
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        self.coeffs[0].space()
    }

    pub fn coeffs(&self) -> &[Jet] {
        &self.coeffs
    }

    pub fn coeff(&self, b: Blade) -> &Jet {
        &self.coeffs[b as usize]
    }

    pub fn set(&mut self, b: Blade, f: Jet) {
        assert_eq!(f.order(), self.order(), "coefficient order mismatch");
        self.coeffs[b as usize] = f;
    }

    /// The value at the expansion point.
    pub fn value(&self) -> Multivector {
        Multivector::from_coeffs(self.dim, self.coeffs.iter().map(Jet::value).collect())
    }

    /// The multivector of first partials `∂_k U` at the expansion point.
    pub fn partial(&self, k: usize) -> Multivector {
        Multivector::from_coeffs(self.dim, self.coeffs.iter().map(|c| c.partial(k)).collect())
    }

    pub fn truncate(&self, order: usize) -> JetForm {
        self.map(|c| c.truncate(order))
    }

    /// `∂_k U`, one order lower.
    pub fn derivative(&self, k: usize) -> JetForm {
        self.map(|c| c.derivative(k))
    }

    pub fn map(&self, f: impl Fn(&Jet) -> Jet) -> JetForm {
        JetForm {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn map_blades(&self, f: impl Fn(Blade, &Jet) -> Jet) -> JetForm {
        JetForm {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(b, c)| f(b as Blade, c))
                .collect(),
        }
    }

    pub fn add(&self, o: &JetForm) -> JetForm {
        self.zip(o, Jet::add)
    }

    pub fn sub(&self, o: &JetForm) -> JetForm {
        self.zip(o, Jet::sub)
    }

    fn zip(&self, o: &JetForm, f: impl Fn(&Jet, &Jet) -> Jet) -> JetForm {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        JetForm {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> JetForm {
        self.map(Jet::neg)
    }

    pub fn scale(&self, s: Complex64) -> JetForm {
        self.map(|c| c.scale_c(s))
    }

    /// Pointwise product with a scalar jet.
    pub fn mul_jet(&self, f: &Jet) -> JetForm {
        self.map(|c| {
            if c.is_exact_zero() {
                c.truncate(f.order())
            } else {
                c.mul(f)
            }
        })
    }

    pub fn conj(&self) -> JetForm {
        self.map(Jet::conj)
    }

    pub fn reversion(&self) -> JetForm {
        self.map_blades(|b, c| c.scale_c(reversion_sign(blade::grade(b)).into()))
    }

    pub fn involution(&self) -> JetForm {
        self.map_blades(|b, c| c.scale_c(parity(blade::grade(b)).into()))
    }

    /// `U* = conj(U)^rev`.
    pub fn star_conj(&self) -> JetForm {
        self.reversion().conj()
    }

    pub fn grade_part(&self, k: usize) -> JetForm {
        self.map_blades(|b, c| {
            if blade::grade(b) == k {
                c.clone()
            } else {
                c.zero_of()
            }
        })
    }

    pub fn scalar_part(&self) -> &Jet {
        &self.coeffs[0]
    }

    pub fn wedge(&self, o: &JetForm) -> JetForm {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let order = self.order().min(o.order());
        let mut out = JetForm::zero(self.space(), self.dim, order);
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_exact_zero() {
                continue;
            }
            for (b, cb) in o.coeffs.iter().enumerate() {
                let s = blade::wedge_sign(a as Blade, b as Blade);
                if s == 0.0 || cb.is_exact_zero() {
                    continue;
                }
                let t = a | b ;
                out.coeffs[t] = out.coeffs[t].add(&ca.mul(cb).scale_c(s.into()));
            }
        }
        out
    }

    /// Largest coefficient modulus over all blades and jet coefficients.
    pub fn norm_max(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.coeffs().iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    /// The zero form of the same dimension and order.
    pub fn zero_like(&self) -> JetForm {
        JetForm::zero(self.space(), self.dim, self.order())
    }
}
