//! Structure constants of the Clifford product in the Grassmann basis.
//!
//! The product is built from the generator rule
//! `e^i W = e^i ∧ W + e^i ⌋ W`, where the contraction of `e^i` into
//! `e^{j_1} ∧ ... ∧ e^{j_k}` is `Σ_p (-1)^{p-1} g^{i j_p}` times the blade with `j_p` removed.
//! A blade with lowest index `a` and remainder `R` satisfies
//! `e^α B = e^a (R B) - (e^a ⌋ R) B`, so rows can be filled in increasing order of `α`.

use num_complex::Complex64;

use crate::blade::{bits, parity, Blade};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::multivector::Multivector;

/// Coefficient ring for structure constants.
pub trait Coeff: Clone {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, s: f64) -> Self;
}

impl Coeff for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
}

/// Sparse structure constants: `e^α e^β = Σ_γ c^{αβ}_γ e^γ`.
#[derive(Debug, Clone)]
pub struct Structure<T> {
    dim: usize,
    offsets: Vec<usize>,
    entries: Vec<(Blade, T)>,
}

impl<T: Coeff> Structure<T> {
    /// Builds all `4^n` blade products from the contravariant metric entries `g(i, j)`.
    pub fn build(dim: usize, one: T, g: impl Fn(usize, usize) -> T) -> Self {
        let size = 1usize << dim;
        let zero = one.zero_like();
        let ginv: Vec<Vec<T>> = (0..dim)
            .map(|i| (0..dim).map(|j| g(i, j)).collect())
            .collect();
        let mut offsets = Vec::with_capacity(size * size + 1);
        offsets.push(0);
        let mut entries: Vec<(Blade, T)> = Vec::new();
        let mut acc: Vec<T> = vec![zero.clone(); size];
        let mut touched: Vec<Blade> = Vec::new();
        let mut seen = vec![false; size];

        for alpha in 0..size as Blade {
            for beta in 0..size as Blade {
                if alpha == 0 {
                    entries.push((beta, one.clone()));
                    offsets.push(entries.len());
                    continue;
                }
                let a = alpha.trailing_zeros() as usize;
                let rest = alpha & (alpha - 1);
                let mut bump = |blade: Blade, c: T, acc: &mut Vec<T>| {
                    if !seen[blade as usize] {
                        seen[blade as usize] = true;
                        touched.push(blade);
                    }
                    acc[blade as usize].add_assign_ref(&c);
                };
                let row = row_of(&offsets, &entries, size, rest, beta).to_vec();
                for (blade, c) in row {
                    if blade & (1 << a) == 0 {
                        let s = parity((blade & ((1 << a) - 1)).count_ones() as usize);
                        bump(blade | (1 << a), c.scale(s), &mut acc);
                    }
                    for (p, j) in bits(blade).enumerate() {
                        if !ginv[a][j].is_zero() {
                            bump(
                                blade ^ (1 << j),
                                ginv[a][j].mul_ref(&c).scale(parity(p)),
                                &mut acc,
                            );
                        }
                    }
                }
                for (p, j) in bits(rest).enumerate() {
                    if ginv[a][j].is_zero() {
                        continue;
                    }
                    let f = ginv[a][j].scale(-parity(p));
                    let row = row_of(&offsets, &entries, size, rest ^ (1 << j), beta).to_vec();
                    for (blade, c) in row {
                        bump(blade, f.mul_ref(&c), &mut acc);
                    }
                }
                touched.sort_unstable();
                for &blade in &touched {
                    let c = std::mem::replace(&mut acc[blade as usize], zero.clone());
                    seen[blade as usize] = false;
                    if !c.is_zero() {
                        entries.push((blade, c));
                    }
                }
                touched.clear();
                offsets.push(entries.len());
            }
        }
        Structure {
            dim,
            offsets,
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero terms of `e^α e^β`, sorted by blade.
    pub fn product(&self, alpha: Blade, beta: Blade) -> &[(Blade, T)] {
        row_of(&self.offsets, &self.entries, 1 << self.dim, alpha, beta)
    }

    /// Total number of stored nonzero structure constants.
    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }
}

fn row_of<'a, T>(
    offsets: &[usize],
    entries: &'a [(Blade, T)],
    size: usize,
    alpha: Blade,
    beta: Blade,
) -> &'a [(Blade, T)] {
    let k = alpha as usize * size + beta as usize;
    &entries[offsets[k]..offsets[k + 1]]
}

/// Cached Clifford product for a fixed metric.
#[derive(Debug, Clone)]
pub struct ProductTable {
    metric: Metric,
    structure: Structure<f64>,
}

impl ProductTable {
    pub fn new(metric: &Metric) -> Result<Self> {
        let n = metric.dim();
        if n > crate::metric::MAX_DIM {
            return Err(Error::UnsupportedDimension {
                dim: n,
                max: crate::metric::MAX_DIM,
            });
        }
        let structure = Structure::build(n, 1.0, |i, j| metric.g(i, j));
        Ok(ProductTable {
            metric: metric.clone(),
            structure,
        })
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// Nonzero structure constants of `e^α e^β` in the Grassmann basis.
    pub fn product(&self, alpha: Blade, beta: Blade) -> &[(Blade, f64)] {
        self.structure.product(alpha, beta)
    }

    pub fn structure(&self) -> &Structure<f64> {
        &self.structure
    }

    /// The Clifford product `U V`.
    pub fn mul(&self, u: &Multivector, v: &Multivector) -> Multivector {
        self.check(u);
        self.check(v);
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.dim()];
        for (a, ua) in u.terms() {
            for (b, vb) in v.terms() {
                let uv = ua * vb;
                for &(c, s) in self.product(a, b) {
                    out[c as usize] += uv * s;
                }
            }
        }
        Multivector::from_coeffs(self.dim(), out)
    }

    /// Checked Clifford product.
    pub fn try_mul(&self, u: &Multivector, v: &Multivector) -> Result<Multivector> {
        for w in [u, v] {
            if w.dim() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: w.dim(),
                });
            }
        }
        Ok(self.mul(u, v))
    }

    /// Product of several factors, left to right.
    pub fn mul_all(&self, factors: &[&Multivector]) -> Multivector {
        let mut acc = Multivector::scalar(self.dim(), 1.0.into());
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// `U V - V U`.
    pub fn commutator(&self, u: &Multivector, v: &Multivector) -> Multivector {
        self.mul(u, v) - self.mul(v, u)
    }

    /// `exp(U) = Σ U^m / m!`, summed until the terms stop contributing.
    pub fn exp(&self, u: &Multivector) -> Result<Multivector> {
        const MAX_TERMS: usize = 200;
        let mut sum = Multivector::scalar(self.dim(), 1.0.into());
        let mut term = sum.clone();
        for m in 1..=MAX_TERMS {
            term = self.mul(&term, u) * (1.0 / m as f64);
            sum = sum + &term;
            let t = term.norm_max();
            if t == 0.0 || t < 1e-17 * sum.norm_max() {
                return Ok(sum);
            }
        }
        Err(Error::NonConvergence(MAX_TERMS))
    }

    fn check(&self, u: &Multivector) {
        assert_eq!(
            u.dim(),
            self.dim(),
            "multivector dimension does not match the product table"
        );
    }
}
