use crate::error::{Error, Result};
use crate::jet::Jet;

use super::form_field::ComplexExpr;
use super::frame::Frame;

/// Position of a tensor index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Upper,
    Lower,
}

/// Jets of the components of a tensor, stored row-major over its slots.
#[derive(Debug, Clone)]
pub struct TensorJet {
    dim: usize,
    slots: Vec<Slot>,
    comps: Vec<Jet>,
}

impl TensorJet {
    pub fn new(dim: usize, slots: Vec<Slot>, comps: Vec<Jet>) -> Result<Self> {
        let len = dim.pow(slots.len() as u32);
        if comps.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: comps.len(),
            });
        }
        Ok(TensorJet { dim, slots, comps })
    }

    /// Jets of tensor components given as expressions, at `frame`'s point and order.
    pub fn from_exprs(frame: &Frame, slots: Vec<Slot>, comps: &[ComplexExpr]) -> Result<Self> {
        let jets = comps
            .iter()
            .map(|c| c.jet(frame.space(), frame.point(), frame.order()))
            .collect::<Result<Vec<_>>>()?;
        TensorJet::new(frame.dim(), slots, jets)
    }

    /// `g_{ij}`.
    pub fn metric_lower(frame: &Frame) -> Self {
        let n = frame.dim();
        let comps = (0..n * n)
            .map(|a| frame.g_lower(a / n, a % n).clone())
            .collect();
        TensorJet {
            dim: n,
            slots: vec![Slot::Lower; 2],
            comps,
        }
    }

    /// `g^{ij}`.
    pub fn metric_upper(frame: &Frame) -> Self {
        let n = frame.dim();
        let comps = (0..n * n)
            .map(|a| frame.g_upper(a / n, a % n).clone())
            .collect();
        TensorJet {
            dim: n,
            slots: vec![Slot::Upper; 2],
            comps,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn order(&self) -> usize {
        self.comps.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    fn unflat(&self, mut a: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank()];
        for slot in (0..self.rank()).rev() {
            idx[slot] = a % self.dim;
            a /= self.dim;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Jet {
        &self.comps[self.flat(idx)]
    }

    /// Largest component modulus at the expansion point.
    pub fn value_norm_max(&self) -> f64 {
        self.comps
            .iter()
            .map(|c| c.value().norm())
            .fold(0.0, f64::max)
    }
}

/// `∇_k T`: the partial derivative plus one Christoffel term per slot, one order lower.
pub fn nabla(frame: &Frame, t: &TensorJet, k: usize) -> TensorJet {
    let n = t.dim;
    let comps = (0..t.comps.len())
        .map(|a| {
            let idx = t.unflat(a);
            let mut v = t.comps[a].derivative(k);
            let o = v.order();
            for (s, slot) in t.slots.iter().enumerate() {
                for m in 0..n {
                    let mut j = idx.clone();
                    j[s] = m;
                    let c = t.get(&j).truncate(o);
                    if c.is_exact_zero() {
                        continue;
                    }
                    v = match slot {
                        Slot::Upper => v.add(&frame.gamma(idx[s], k, m).mul(&c)),
                        Slot::Lower => v.sub(&frame.gamma(m, k, idx[s]).mul(&c)),
                    };
                }
            }
            v
        })
        .collect();
    TensorJet {
        dim: n,
        slots: t.slots.clone(),
        comps,
    }
}

/// `∇T` as a tensor with an extra lower slot appended last.
pub fn gradient(frame: &Frame, t: &TensorJet) -> TensorJet {
    let n = t.dim;
    let parts: Vec<TensorJet> = (0..n).map(|k| nabla(frame, t, k)).collect();
    let mut slots = t.slots.clone();
    slots.push(Slot::Lower);
    let comps = (0..t.comps.len() * n)
        .map(|a| parts[a % n].comps[a / n].clone())
        .collect();
    TensorJet {
        dim: n,
        slots,
        comps,
    }
}
