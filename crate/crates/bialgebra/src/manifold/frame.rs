use std::sync::Arc;

use num_complex::Complex64;

use crate::blade::{self, bits, parity, Blade};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace, MAX_ORDER};
use crate::metric::Metric;
use crate::multivector::Multivector;
use crate::table::Structure;

use super::chart::Chart;
use super::jetform::JetForm;

/// The geometry of a chart near one point, as jets of a fixed order.
///
/// Holds `g_{ij}`, `g^{ij}`, `sqrt|g|` and the Clifford structure constants to order `K`,
/// and the Christoffel symbols to order `K - 1`.
#[derive(Debug, Clone)]
pub struct Frame {
    dim: usize,
    order: usize,
    point: Vec<f64>,
    space: Arc<JetSpace>,
    g_lower: Vec<Jet>,
    g_upper: Vec<Jet>,
    sqrt_det: Jet,
    sign: f64,
    gamma: Vec<Jet>,
    table: Structure<Jet>,
}

impl Frame {
    pub(crate) fn new(chart: &Chart, p: &[f64], order: usize) -> Result<Frame> {
        chart.check_point(p)?;
        if order == 0 || order > MAX_ORDER {
            return Err(Error::Invalid(format!(
                "frame order must lie in 1..={MAX_ORDER}"
            )));
        }
        // validates symmetry and non-degeneracy at p
        chart.metric_at(p)?;
        let n = chart.dim();
        let space = JetSpace::get(n);
        let mut g_lower = Vec::with_capacity(n * n);
        for row in chart.g_lower() {
            for e in row {
                g_lower.push(Jet::eval_expr(e, &space, p, order)?);
            }
        }
        for i in 0..n {
            for j in 0..i {
                let avg = g_lower[i * n + j]
                    .add(&g_lower[j * n + i])
                    .scale_c(0.5.into());
                g_lower[i * n + j] = avg.clone();
                g_lower[j * n + i] = avg;
            }
        }
        let (g_upper, det) = invert(&g_lower, n)?;
        let sign = det.value().re.signum();
        let sqrt_det = det.scale_c(sign.into()).sqrt();
        let lower_order = order - 1;
        let dg: Vec<Jet> = (0..n)
            .flat_map(|l| g_lower.iter().map(move |g| g.derivative(l)))
            .collect();
        let dg = |l: usize, i: usize, j: usize| &dg[l * n * n + i * n + j];
        let mut gamma = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = Jet::real(&space, lower_order, 0.0);
                    for l in 0..n {
                        let bracket = dg(i, l, j).add(dg(j, i, l)).sub(dg(l, i, j));
                        s = s.add(&g_upper[k * n + l].mul(&bracket));
                    }
                    gamma.push(s.scale_c(0.5.into()));
                }
            }
        }
        let one = Jet::real(&space, order, 1.0);
        let table = Structure::build(n, one, |i, j| g_upper[i * n + j].clone());
        Ok(Frame {
            dim: n,
            order,
            point: p.to_vec(),
            space,
            g_lower,
            g_upper,
            sqrt_det,
            sign,
            gamma,
            table,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn g_lower(&self, i: usize, j: usize) -> &Jet {
        &self.g_lower[i * self.dim + j]
    }

    pub fn g_upper(&self, i: usize, j: usize) -> &Jet {
        &self.g_upper[i * self.dim + j]
    }

    /// `sqrt|det g_{ij}|`.
    pub fn sqrt_det(&self) -> &Jet {
        &self.sqrt_det
    }

    /// Sign of `det g_{ij}`.
    pub fn sign(&self) -> f64 {
        self.sign
    }

    /// `Γ^k_{ij}`, of order `K - 1`.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Jet {
        let n = self.dim;
        &self.gamma[k * n * n + i * n + j]
    }

    /// The metric at the expansion point.
    pub fn metric(&self) -> Metric {
        let n = self.dim;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| self.g_lower(i, j).value().re).collect())
            .collect();
        Metric::from_lower_rows(&rows).expect("frame metric was validated")
    }

    /// The jet of a scalar function.
    pub fn scalar(&self, f: Complex64) -> Jet {
        Jet::constant(&self.space, self.order, f)
    }

    /// A constant form at the frame order.
    pub fn constant(&self, u: &Multivector) -> JetForm {
        JetForm::constant(&self.space, self.order, u)
    }

    pub fn zero(&self) -> JetForm {
        JetForm::zero(&self.space, self.dim, self.order)
    }

    /// `dx^{i+1}`.
    pub fn generator(&self, i: usize) -> JetForm {
        self.constant(&Multivector::generator(self.dim, i))
    }

    /// The volume form `sqrt|g| dx^1 ∧ ... ∧ dx^n`.
    pub fn volume(&self) -> JetForm {
        let full = ((1u64 << self.dim) - 1) as Blade;
        JetForm::blade(self.dim, full, self.sqrt_det.clone())
    }

    /// Clifford product with position-dependent structure constants.
    pub fn mul(&self, u: &JetForm, v: &JetForm) -> JetForm {
        let order = u.order().min(v.order()).min(self.order);
        let mut out = JetForm::zero(&self.space, self.dim, order);
        let mut acc: Vec<Jet> = out.coeffs().to_vec();
        for (a, ua) in u.coeffs().iter().enumerate() {
            if ua.is_exact_zero() {
                continue;
            }
            for (b, vb) in v.coeffs().iter().enumerate() {
                if vb.is_exact_zero() {
                    continue;
                }
                let p = ua.mul(vb);
                for (c, s) in self.table.product(a as Blade, b as Blade) {
                    let t = &mut acc[*c as usize];
                    *t = t.add(&p.mul(s));
                }
            }
        }
        for (b, c) in acc.into_iter().enumerate() {
            out.set(b as Blade, c);
        }
        out
    }

    pub fn mul_all(&self, factors: &[&JetForm]) -> JetForm {
        let mut it = factors.iter();
        let first = (*it.next().expect("at least one factor")).clone();
        it.fold(first, |acc, f| self.mul(&acc, f))
    }

    /// `[U, V] = UV - VU`.
    pub fn commutator(&self, u: &JetForm, v: &JetForm) -> JetForm {
        self.mul(u, v).sub(&self.mul(v, u))
    }

    /// `exp(U) = Σ U^m / m!` in the pointwise Clifford product.
    pub fn exp(&self, u: &JetForm) -> Result<JetForm> {
        let order = u.order().min(self.order);
        let mut sum = JetForm::constant(
            &self.space,
            order,
            &Multivector::scalar(self.dim, 1.0.into()),
        );
        let mut term = sum.clone();
        for m in 1..200 {
            term = self.mul(&term, u).scale((1.0 / m as f64).into());
            sum = sum.add(&term);
            let t = term.norm_max();
            if t == 0.0 || t < 1e-17 * sum.norm_max() {
                return Ok(sum);
            }
        }
        Err(Error::NonConvergence(200))
    }

    /// `e^k ∧ U`.
    pub fn wedge_generator(&self, k: usize, u: &JetForm) -> JetForm {
        let mut out = u.zero_like();
        let bit: Blade = 1 << k;
        for (b, c) in u.coeffs().iter().enumerate() {
            let b = b as Blade;
            if b & bit != 0 || c.is_exact_zero() {
                continue;
            }
            let t = b | bit;
            let v = out
                .coeff(t)
                .add(&c.scale_c(blade::wedge_sign(bit, b).into()));
            out.set(t, v);
        }
        out
    }

    /// `e^k ⌋ U`, contracting with `g^{k j}`.
    pub fn contract_generator(&self, k: usize, u: &JetForm) -> JetForm {
        let order = u.order().min(self.order);
        let mut out = u.truncate(order).zero_like();
        for (b, c) in u.coeffs().iter().enumerate() {
            let b = b as Blade;
            if c.is_exact_zero() {
                continue;
            }
            for (p, j) in bits(b).enumerate() {
                let g = self.g_upper(k, j);
                if g.is_exact_zero() {
                    continue;
                }
                let t = b & !(1 << j);
                let v = out.coeff(t).add(&c.mul(g).scale_c(parity(p).into()));
                out.set(t, v);
            }
        }
        out
    }

    /// `e^k U = e^k ∧ U + e^k ⌋ U`.
    pub fn mul_generator(&self, k: usize, u: &JetForm) -> JetForm {
        let w = self.wedge_generator(k, u);
        w.add(&self.contract_generator(k, u))
    }

    /// The covariant derivative `Υ_k U = ∂_k U - Σ_s Γ^{i_s}_{kj} e^{i_1..j..i_p}` on form values.
    pub fn upsilon_k(&self, k: usize, u: &JetForm) -> JetForm {
        assert!(
            u.order() >= 1 && u.order() <= self.order,
            "Υ needs a jet of order 1..=K"
        );
        let mut out = u.derivative(k);
        let o = out.order();
        let n = self.dim;
        for (b, c) in u.coeffs().iter().enumerate() {
            let b = b as Blade;
            if c.is_exact_zero() {
                continue;
            }
            let c = c.truncate(o);
            for (s, i) in bits(b).enumerate() {
                let rest = b & !(1 << i);
                for j in 0..n {
                    let bit: Blade = 1 << j;
                    if rest & bit != 0 {
                        continue;
                    }
                    let g = self.gamma(i, k, j);
                    if g.is_exact_zero() {
                        continue;
                    }
                    let sign = parity(s) * blade::wedge_sign(bit, rest);
                    let t = rest | bit;
                    let v = out.coeff(t).sub(&g.mul(&c).scale_c(sign.into()));
                    out.set(t, v);
                }
            }
        }
        out
    }

    /// `d U = dx^k ∧ Υ_k U`.
    pub fn d(&self, u: &JetForm) -> JetForm {
        (0..self.dim)
            .map(|k| self.wedge_generator(k, &self.upsilon_k(k, u)))
            .reduce(|a, b| a.add(&b))
            .expect("dimension is positive")
    }

    /// `Υ U = dx^k Υ_k U`.
    pub fn upsilon(&self, u: &JetForm) -> JetForm {
        (0..self.dim)
            .map(|k| self.mul_generator(k, &self.upsilon_k(k, u)))
            .reduce(|a, b| a.add(&b))
            .expect("dimension is positive")
    }

    /// `δ U = d U - Υ U`.
    pub fn delta(&self, u: &JetForm) -> JetForm {
        self.d(u).sub(&self.upsilon(u))
    }

    /// `Δ U = Υ Υ U`; needs a jet of order at least 2.
    pub fn laplacian(&self, u: &JetForm) -> JetForm {
        self.upsilon(&self.upsilon(u))
    }

    /// `(1/sqrt|g|) ∂_i (sqrt|g| g^{ij} ∂_j f)`.
    pub fn scalar_laplacian(&self, f: &Jet) -> Jet {
        assert!(f.order() >= 2, "the Laplacian needs a jet of order 2");
        let n = self.dim;
        let mut total = Jet::real(&self.space, f.order() - 2, 0.0);
        for i in 0..n {
            let mut flux = Jet::real(&self.space, f.order() - 1, 0.0);
            for j in 0..n {
                flux = flux.add(&self.g_upper(i, j).mul(&f.derivative(j)));
            }
            total = total.add(&self.sqrt_det.mul(&flux).derivative(i));
        }
        total.div(&self.sqrt_det.truncate(total.order()))
    }

    /// `⋆U = U^rev I`.
    pub fn star(&self, u: &JetForm) -> JetForm {
        self.mul(&u.reversion(), &self.volume())
    }

    /// `⋆^{-1}`, acting on grade `j` as `(-1)^{j(n+1)} sgn(g) ⋆`.
    pub fn star_inv(&self, u: &JetForm) -> JetForm {
        let n = self.dim;
        let s = self.star(u);
        let mut out = s.zero_like();
        for (b, c) in s.coeffs().iter().enumerate() {
            let j = n - blade::grade(b as Blade);
            out.set(
                b as Blade,
                c.scale_c((parity(j * (n + 1)) * self.sign).into()),
            );
        }
        out
    }

    /// `Tr(U V*)` as a scalar jet.
    pub fn scalar_product(&self, u: &JetForm, v: &JetForm) -> Jet {
        self.mul(u, &v.star_conj()).scalar_part().clone()
    }

    /// Curvature at the expansion point; needs a frame of order at least 2.
    pub fn curvature(&self) -> Result<Curvature> {
        if self.order < 2 {
            return Err(Error::Invalid("curvature needs a frame of order 2".into()));
        }
        let n = self.dim;
        let g = |k, i, j| self.gamma(k, i, j).value().re;
        let dg = |l, k, i, j| self.gamma(k, i, j).partial(l).re;
        let mut r_upper = vec![0.0; n * n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for r in 0..n {
                        let mut v = dg(i, k, j, r) - dg(j, k, i, r);
                        for s in 0..n {
                            v += g(k, s, i) * g(s, j, r) - g(k, s, j) * g(s, i, r);
                        }
                        r_upper[((k * n + i) * n + j) * n + r] = -v;
                    }
                }
            }
        }
        let mut r_lower = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for r in 0..n {
                    for l in 0..n {
                        r_lower[((i * n + j) * n + r) * n + l] = (0..n)
                            .map(|k| {
                                self.g_lower(k, l).value().re
                                    * r_upper[((k * n + i) * n + j) * n + r]
                            })
                            .sum();
                    }
                }
            }
        }
        Ok(Curvature {
            dim: n,
            r_upper,
            r_lower,
        })
    }
}

/// Curvature of the Levi-Civita connection at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Curvature {
    dim: usize,
    r_upper: Vec<f64>,
    r_lower: Vec<f64>,
}

impl Curvature {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `R^k_{ij,r}`, with `[Υ_i, Υ_j] e^k = R^k_{ij,r} e^r`.
    pub fn r_upper(&self, k: usize, i: usize, j: usize, r: usize) -> f64 {
        let n = self.dim;
        self.r_upper[((k * n + i) * n + j) * n + r]
    }

    /// `R_{ij,rl} = g_{kl} R^k_{ij,r}`.
    pub fn r_lower(&self, i: usize, j: usize, r: usize, l: usize) -> f64 {
        let n = self.dim;
        self.r_lower[((i * n + j) * n + r) * n + l]
    }

    /// `D_{ij} = Σ_{k<l} R_{kl,ij} e^{kl}`.
    pub fn d_form(&self, i: usize, j: usize) -> Multivector {
        let n = self.dim;
        let mut out = Multivector::zero(n);
        for k in 0..n {
            for l in k + 1..n {
                out.set((1 << k) | (1 << l), self.r_lower(k, l, i, j).into());
            }
        }
        out
    }

    /// Ricci tensor `Ric_{jr} = R^k_{jk,r}` (positive on spheres).
    pub fn ricci(&self, j: usize, r: usize) -> f64 {
        (0..self.dim).map(|k| self.r_upper(k, j, k, r)).sum()
    }

    /// Scalar curvature `g^{jr} R_{jr}` for the given inverse metric.
    pub fn scalar(&self, metric: &Metric) -> f64 {
        let n = self.dim;
        (0..n)
            .flat_map(|j| (0..n).map(move |r| (j, r)))
            .map(|(j, r)| metric.g(j, r) * self.ricci(j, r))
            .sum()
    }
}

/// Inverse and determinant of a jet-valued matrix by Gauss-Jordan elimination.
fn invert(a: &[Jet], n: usize) -> Result<(Vec<Jet>, Jet)> {
    let mut m: Vec<Jet> = a.to_vec();
    let space = a[0].space().clone();
    let order = a[0].order();
    let mut inv: Vec<Jet> = (0..n * n)
        .map(|idx| Jet::real(&space, order, if idx / n == idx % n { 1.0 } else { 0.0 }))
        .collect();
    let mut det = Jet::real(&space, order, 1.0);
    let scale = a.iter().map(|j| j.value().norm()).fold(0.0, f64::max);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| {
                m[x * n + col]
                    .value()
                    .norm()
                    .total_cmp(&m[y * n + col].value().norm())
            })
            .expect("non-empty range");
        if m[piv * n + col].value().norm() <= 1e-14 * scale {
            return Err(Error::SingularMatrix);
        }
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
            det = det.neg();
        }
        let p = m[col * n + col].clone();
        det = det.mul(&p);
        let pinv = p.recip();
        for c in 0..n {
            m[col * n + c] = m[col * n + c].mul(&pinv);
            inv[col * n + c] = inv[col * n + c].mul(&pinv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col].clone();
            if f.is_exact_zero() {
                continue;
            }
            for c in 0..n {
                m[r * n + c] = m[r * n + c].sub(&f.mul(&m[col * n + c]));
                inv[r * n + c] = inv[r * n + c].sub(&f.mul(&inv[col * n + c]));
            }
        }
    }
    Ok((inv, det))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_christoffel_symbols() {
        let chart = Chart::polar_plane();
        let g = chart.christoffel(&[2.0, 0.3]).unwrap();
        assert!((g[0][1][1] + 2.0).abs() < 1e-14);
        assert!((g[1][0][1] - 0.5).abs() < 1e-14);
        assert!((g[1][1][0] - 0.5).abs() < 1e-14);
        assert_eq!(g[0][0][0], 0.0);
    }

    #[test]
    fn sphere_has_unit_gauss_curvature() {
        let frame = Chart::round_sphere().frame(&[0.8, 0.1], 2).unwrap();
        let curv = frame.curvature().unwrap();
        assert!((curv.scalar(&frame.metric()) - 2.0).abs() < 1e-12);
    }
}
