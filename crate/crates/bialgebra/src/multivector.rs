//! Complex multivectors stored by Grassmann-basis coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blade::{self, bits, parity, reversion_sign, Basis, Blade};
use crate::error::{Error, Result};
use crate::metric::Metric;

/// An element of the exterior algebra over `C^n`, as `2^n` coefficients indexed by blade.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<Complex64>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        Multivector {
            dim,
            coeffs: vec![Complex64::new(0.0, 0.0); 1 << dim],
        }
    }

    pub fn scalar(dim: usize, c: Complex64) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = c;
        m
    }

    /// A single Grassmann basis blade.
    pub fn blade(dim: usize, b: Blade) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[b as usize] = Complex64::new(1.0, 0.0);
        m
    }

    /// The generator `e^{i+1}`.
    pub fn generator(dim: usize, i: usize) -> Self {
        Self::blade(dim, 1 << i)
    }

    /// `e^{i_1} ∧ ... ∧ e^{i_k}` for 0-based indices in any order.
    pub fn wedge_of(dim: usize, idx: &[usize]) -> Self {
        let (sign, b) = blade::from_indices(idx);
        Self::blade(dim, b) * sign
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(
            coeffs.len(),
            1 << dim,
            "coefficient vector must have length 2^dim"
        );
        Multivector { dim, coeffs }
    }

    pub fn from_real(dim: usize, coeffs: &[f64]) -> Self {
        Self::from_coeffs(
            dim,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, b: Blade) -> Complex64 {
        self.coeffs[b as usize]
    }

    pub fn set(&mut self, b: Blade, c: Complex64) {
        self.coeffs[b as usize] = c;
    }

    /// Nonzero coefficients with their blades.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(b, c)| (b as Blade, *c))
    }

    /// The trace `Tr(U)`, the coefficient of the unit.
    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Projection onto `Λ^k`.
    pub fn grade_part(&self, k: usize) -> Self {
        self.map_blades(|b, c| {
            if blade::grade(b) == k {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// The single grade present, `None` when mixed; the zero multivector reports grade 0.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms().map(|(b, _)| blade::grade(b));
        let first = grades.next().unwrap_or(0);
        grades.all(|g| g == first).then_some(first)
    }

    pub fn is_even(&self) -> bool {
        self.terms().all(|(b, _)| blade::grade(b).is_multiple_of(2))
    }

    pub fn is_real_within(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// The exterior product `U ∧ V`.
    pub fn wedge(&self, other: &Multivector) -> Multivector {
        assert_eq!(self.dim, other.dim, "dimension mismatch in wedge product");
        let mut out = Self::zero(self.dim);
        for (a, ua) in self.terms() {
            for (b, vb) in other.terms() {
                let s = blade::wedge_sign(a, b);
                if s != 0.0 {
                    out.coeffs[(a | b) as usize] += ua * vb * s;
                }
            }
        }
        out
    }

    /// Reversion: grade `k` picks up `(-1)^{⌊k/2⌋}`.
    pub fn reversion(&self) -> Self {
        self.map_blades(|b, c| c * reversion_sign(blade::grade(b)))
    }

    /// Grade involution: grade `k` picks up `(-1)^k`.
    pub fn involution(&self) -> Self {
        self.map_blades(|b, c| c * parity(blade::grade(b)))
    }

    /// Complex conjugation of the coefficients.
    pub fn conj(&self) -> Self {
        self.map_blades(|_, c| c.conj())
    }

    /// The anti-involution `U*`: reversion combined with complex conjugation.
    pub fn star_conj(&self) -> Self {
        self.map_blades(|b, c| c.conj() * reversion_sign(blade::grade(b)))
    }

    /// Largest coefficient modulus.
    pub fn norm_max(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference from `other`.
    pub fn distance(&self, other: &Multivector) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Multivector, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn map_blades(&self, f: impl Fn(Blade, Complex64) -> Complex64) -> Self {
        Multivector {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(b, &c)| f(b as Blade, c))
                .collect(),
        }
    }

    /// Coordinates of `self` in the Clifford basis of `metric`.
    pub fn clifford_coords(&self, metric: &Metric) -> Vec<Complex64> {
        basis_convert(&self.coeffs, Basis::Grassmann, Basis::Clifford, metric)
    }

    /// The multivector with the given Clifford-basis coordinates.
    pub fn from_clifford_coords(metric: &Metric, coords: &[Complex64]) -> Self {
        let dim = metric.dim();
        assert_eq!(
            coords.len(),
            1 << dim,
            "coordinate vector must have length 2^dim"
        );
        Self::from_coeffs(
            dim,
            basis_convert(coords, Basis::Clifford, Basis::Grassmann, metric),
        )
    }

    /// Reads the JSON form; Clifford-basis input needs the metric.
    pub fn from_json(json: &MultivectorJson, dim: usize, metric: Option<&Metric>) -> Result<Self> {
        let mut coords = vec![Complex64::new(0.0, 0.0); 1 << dim];
        for term in &json.terms {
            if term.indices.iter().any(|&i| i == 0 || i > dim) {
                return Err(Error::InvalidIndices(format!(
                    "indices {:?} outside 1..={dim}",
                    term.indices
                )));
            }
            let idx: Vec<usize> = term.indices.iter().map(|i| i - 1).collect();
            let (sign, b) = blade::from_indices(&idx);
            if sign == 0.0 {
                return Err(Error::InvalidIndices(format!(
                    "repeated index in {:?}",
                    term.indices
                )));
            }
            if json.basis == Basis::Clifford && sign < 0.0 {
                return Err(Error::InvalidIndices(format!(
                    "Clifford basis indices must be ascending: {:?}",
                    term.indices
                )));
            }
            coords[b as usize] += Complex64::new(term.re, term.im) * sign;
        }
        match json.basis {
            Basis::Grassmann => Ok(Self::from_coeffs(dim, coords)),
            Basis::Clifford => {
                let metric = metric
                    .ok_or_else(|| Error::Invalid("Clifford-basis input needs a metric".into()))?;
                if metric.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: metric.dim(),
                    });
                }
                Ok(Self::from_clifford_coords(metric, &coords))
            }
        }
    }

    /// Writes the JSON form in the requested basis, listing nonzero terms by blade.
    pub fn to_json(&self, basis: Basis, metric: Option<&Metric>) -> Result<MultivectorJson> {
        let coords = match basis {
            Basis::Grassmann => self.coeffs.clone(),
            Basis::Clifford => self
                .clifford_coords(metric.ok_or_else(|| {
                    Error::Invalid("Clifford-basis output needs a metric".into())
                })?),
        };
        let terms = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(b, c)| TermJson {
                indices: bits(b as Blade).map(|i| i + 1).collect(),
                re: c.re,
                im: c.im,
            })
            .collect();
        Ok(MultivectorJson { basis, terms })
    }
}

/// JSON form of a multivector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultivectorJson {
    pub basis: Basis,
    pub terms: Vec<TermJson>,
}

/// One term of [`MultivectorJson`]; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub indices: Vec<usize>,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// The pair-contraction operator `Q` on coordinate vectors:
/// an index set loses each pair `p < q` with weight `(-1)^{q-p-1} g^{i_p i_q}`.
pub fn contract_pairs(coords: &[Complex64], metric: &Metric) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); coords.len()];
    for (b, &c) in coords.iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let idx = blade::indices(b as Blade);
        for p in 0..idx.len() {
            for q in p + 1..idx.len() {
                let g = metric.g(idx[p], idx[q]);
                if g != 0.0 {
                    let target = b ^ (1 << idx[p]) ^ (1 << idx[q]);
                    out[target] += c * (g * parity(q - p - 1));
                }
            }
        }
    }
    out
}

/// Converts coordinates between the Grassmann and Clifford bases.
///
/// A Clifford basis element is `exp(Q)` of the matching Grassmann blade and
/// conversely a Grassmann blade is `exp(-Q)` of the Clifford element.
pub fn basis_convert(
    coords: &[Complex64],
    from: Basis,
    to: Basis,
    metric: &Metric,
) -> Vec<Complex64> {
    let sign = match (from, to) {
        (a, b) if a == b => return coords.to_vec(),
        (Basis::Clifford, Basis::Grassmann) => 1.0,
        _ => -1.0,
    };
    let mut sum = coords.to_vec();
    let mut term = coords.to_vec();
    for r in 1..=metric.dim() / 2 {
        term = contract_pairs(&term, metric);
        let f = sign / r as f64;
        for t in term.iter_mut() {
            *t *= f;
        }
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
    }
    sum
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (b, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({}{:+}i)*{}",
                c.re,
                c.im,
                blade::label(b, Basis::Grassmann)
            )?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Multivector> for &Multivector {
            type Output = Multivector;
            fn $method(self, rhs: &Multivector) -> Multivector {
                assert_eq!(self.dim, rhs.dim, "dimension mismatch");
                Multivector {
                    dim: self.dim,
                    coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $trait<Multivector> for Multivector {
            type Output = Multivector;
            fn $method(self, rhs: Multivector) -> Multivector {
                &self $op &rhs
            }
        }
        impl $trait<&Multivector> for Multivector {
            type Output = Multivector;
            fn $method(self, rhs: &Multivector) -> Multivector {
                &self $op rhs
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, s: Complex64) -> Multivector {
        self.map_blades(|_, c| c * s)
    }
}

impl Mul<Complex64> for Multivector {
    type Output = Multivector;
    fn mul(self, s: Complex64) -> Multivector {
        &self * s
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        self.map_blades(|_, c| c * s)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        &self * s
    }
}
