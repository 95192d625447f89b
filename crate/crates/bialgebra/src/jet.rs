//! Truncated multivariate Taylor polynomials (jets) at a point.
//!
//! A jet of order `K` in `n` variables holds the Taylor coefficients
//! `∂^α f(p) / α!` for every multi-index with `|α| <= K`. Arithmetic on jets is
//! exact truncated polynomial arithmetic, so derivatives of composite quantities
//! carry no discretization error.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::expr::{EvalError, Expr, Func, Node};
use crate::table::Coeff;

/// Highest jet order supported.
pub const MAX_ORDER: usize = 4;

/// Monomial bookkeeping for jets in a fixed number of variables.
#[derive(Debug)]
pub struct JetSpace {
    nvars: usize,
    monomials: Vec<Vec<u8>>,
    /// Number of monomials of degree `<= d`, for `d = 0..=MAX_ORDER`.
    counts: Vec<usize>,
    /// `(a, b, c)` with `m_a m_b = m_c`, grouped by degree of `c`.
    products: Vec<(u32, u32, u32)>,
    products_up_to: Vec<usize>,
    /// For each variable, `(source, target, factor)` with `∂_k (x^source) = factor x^target`.
    derivatives: Vec<Vec<(usize, usize, f64)>>,
    /// `α!` for each monomial.
    factorials: Vec<f64>,
    /// Index of the monomial obtained by removing one power of its first variable.
    parents: Vec<Option<(usize, usize)>>,
}

impl JetSpace {
    /// Shared space for `nvars` variables.
    pub fn get(nvars: usize) -> Arc<JetSpace> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("jet space cache poisoned");
        guard
            .entry(nvars)
            .or_insert_with(|| Arc::new(JetSpace::build(nvars)))
            .clone()
    }

    fn build(nvars: usize) -> JetSpace {
        let mut monomials: Vec<Vec<u8>> = vec![vec![0; nvars]];
        let mut counts = vec![1];
        let mut frontier = vec![vec![0u8; nvars]];
        for _ in 1..=MAX_ORDER {
            let mut next: Vec<Vec<u8>> = Vec::new();
            for m in &frontier {
                // Only raise variables at or after the last nonzero one, so each monomial appears once.
                let last = m.iter().rposition(|&e| e > 0).unwrap_or(0);
                for k in last..nvars {
                    let mut raised = m.clone();
                    raised[k] += 1;
                    next.push(raised);
                }
            }
            next.sort_by(|a, b| b.cmp(a));
            monomials.extend(next.iter().cloned());
            counts.push(monomials.len());
            frontier = next;
        }
        let index: HashMap<Vec<u8>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let degree = |m: &Vec<u8>| m.iter().map(|&e| e as usize).sum::<usize>();

        let mut products = Vec::new();
        let mut products_up_to = Vec::new();
        for d in 0..=MAX_ORDER {
            for (a, ma) in monomials.iter().enumerate() {
                for (b, mb) in monomials.iter().enumerate() {
                    if degree(ma) + degree(mb) != d {
                        continue;
                    }
                    let sum: Vec<u8> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                    products.push((a as u32, b as u32, index[&sum] as u32));
                }
            }
            products_up_to.push(products.len());
        }

        let derivatives = (0..nvars)
            .map(|k| {
                let mut list = Vec::new();
                for (t, mt) in monomials.iter().enumerate() {
                    if degree(mt) == MAX_ORDER {
                        continue;
                    }
                    let mut ms = mt.clone();
                    ms[k] += 1;
                    list.push((index[&ms], t, ms[k] as f64));
                }
                list
            })
            .collect();
        let factorials = monomials
            .iter()
            .map(|m| {
                m.iter()
                    .map(|&e| (1..=e as u32).product::<u32>() as f64)
                    .product()
            })
            .collect();
        let parents = monomials
            .iter()
            .map(|m| {
                let k = m.iter().position(|&e| e > 0)?;
                let mut p = m.clone();
                p[k] -= 1;
                Some((index[&p], k))
            })
            .collect();
        JetSpace {
            nvars,
            monomials,
            counts,
            products,
            products_up_to,
            derivatives,
            factorials,
            parents,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of coefficients of a jet of the given order.
    pub fn len(&self, order: usize) -> usize {
        self.counts[order]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exponent vector of the `i`-th monomial.
    pub fn monomial(&self, i: usize) -> &[u8] {
        &self.monomials[i]
    }

    /// Index of the monomial with the given exponents.
    pub fn index_of(&self, exponents: &[u8]) -> Option<usize> {
        self.monomials.iter().position(|m| m == exponents)
    }
}

/// A complex-valued jet.
#[derive(Debug, Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    order: usize,
    coeffs: Vec<Complex64>,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs == other.coeffs
    }
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, order: usize, v: Complex64) -> Jet {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); space.len(order)];
        coeffs[0] = v;
        Jet {
            space: space.clone(),
            order,
            coeffs,
        }
    }

    pub fn real(space: &Arc<JetSpace>, order: usize, v: f64) -> Jet {
        Self::constant(space, order, Complex64::new(v, 0.0))
    }

    /// The coordinate `x^k` expanded at a point whose `k`-th coordinate is `value`.
    pub fn variable(space: &Arc<JetSpace>, order: usize, k: usize, value: f64) -> Jet {
        let mut j = Self::real(space, order, value);
        if order > 0 {
            j.coeffs[1 + k] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn from_coeffs(space: &Arc<JetSpace>, order: usize, coeffs: Vec<Complex64>) -> Jet {
        assert_eq!(
            coeffs.len(),
            space.len(order),
            "wrong number of jet coefficients"
        );
        Jet {
            space: space.clone(),
            order,
            coeffs,
        }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `∂_k f(p)`.
    pub fn partial(&self, k: usize) -> Complex64 {
        assert!(self.order >= 1, "first derivatives need a jet of order 1");
        self.coeffs[1 + k]
    }

    pub fn zero_of(&self) -> Jet {
        Jet::constant(&self.space, self.order, Complex64::new(0.0, 0.0))
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        Jet {
            space: self.space.clone(),
            order,
            coeffs: self.coeffs[..self.space.len(order)].to_vec(),
        }
    }

    /// The jet of `∂_k f`, one order lower.
    pub fn derivative(&self, k: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let len = self.space.len(order);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for &(src, dst, f) in &self.space.derivatives[k] {
            if dst < len {
                coeffs[dst] = self.coeffs[src] * f;
            }
        }
        Jet {
            space: self.space.clone(),
            order,
            coeffs,
        }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        let len = self.space.len(order);
        let coeffs = (0..len).map(|i| self.coeffs[i] + o.coeffs[i]).collect();
        Jet {
            space: self.space.clone(),
            order,
            coeffs,
        }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        let len = self.space.len(order);
        let coeffs = (0..len).map(|i| self.coeffs[i] - o.coeffs[i]).collect();
        Jet {
            space: self.space.clone(),
            order,
            coeffs,
        }
    }

    pub fn neg(&self) -> Jet {
        self.scale_c(Complex64::new(-1.0, 0.0))
    }

    pub fn scale_c(&self, s: Complex64) -> Jet {
        Jet {
            space: self.space.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn conj(&self) -> Jet {
        Jet {
            space: self.space.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        let len = self.space.len(order);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        let (a0, b0) = (self.coeffs[0], o.coeffs[0]);
        if self.coeffs[1..len]
            .iter()
            .all(|c| c.re == 0.0 && c.im == 0.0)
        {
            return o.truncate(order).scale_c(a0);
        }
        if o.coeffs[1..len].iter().all(|c| c.re == 0.0 && c.im == 0.0) {
            return self.truncate(order).scale_c(b0);
        }
        for &(a, b, c) in &self.space.products[..self.space.products_up_to[order]] {
            coeffs[c as usize] += self.coeffs[a as usize] * o.coeffs[b as usize];
        }
        Jet {
            space: self.space.clone(),
            order,
            coeffs,
        }
    }

    /// `Σ_m t[m] h^m` where `h` is `self` minus its value.
    fn compose(&self, taylor: &[Complex64]) -> Jet {
        let mut h = self.clone();
        h.coeffs[0] = Complex64::new(0.0, 0.0);
        let mut out = Jet::constant(&self.space, self.order, taylor[0]);
        let mut power = Jet::constant(&self.space, self.order, Complex64::new(1.0, 0.0));
        for t in taylor.iter().take(self.order + 1).skip(1) {
            power = power.mul(&h);
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += p * t;
            }
        }
        out
    }

    fn binomial_series(&self, exponent: Complex64) -> Vec<Complex64> {
        let a = self.value();
        let mut out = Vec::with_capacity(self.order + 1);
        let mut coef = Complex64::new(1.0, 0.0);
        for m in 0..=self.order {
            out.push(coef * (a.powc(exponent - m as f64)));
            coef = coef * (exponent - m as f64) / (m as f64 + 1.0);
        }
        out
    }

    pub fn recip(&self) -> Jet {
        let a = self.value();
        let t: Vec<Complex64> = (0..=self.order)
            .map(|m| {
                let s = if m % 2 == 0 { 1.0 } else { -1.0 };
                s / a.powi(m as i32 + 1)
            })
            .collect();
        self.compose(&t)
    }

    pub fn div(&self, o: &Jet) -> Jet {
        self.mul(&o.recip())
    }

    pub fn powi(&self, k: i32) -> Jet {
        if k >= 0 {
            let mut out = Jet::constant(&self.space, self.order, Complex64::new(1.0, 0.0));
            for _ in 0..k {
                out = out.mul(self);
            }
            out
        } else {
            self.recip().powi(-k)
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Jet {
        self.compose(&self.binomial_series(Complex64::new(0.5, 0.0)))
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let mut f = 1.0;
        let t: Vec<Complex64> = (0..=self.order)
            .map(|m| {
                if m > 0 {
                    f *= m as f64;
                }
                e / f
            })
            .collect();
        self.compose(&t)
    }

    pub fn ln(&self) -> Jet {
        let a = self.value();
        let t: Vec<Complex64> = (0..=self.order)
            .map(|m| {
                if m == 0 {
                    a.ln()
                } else {
                    let s = if m % 2 == 1 { 1.0 } else { -1.0 };
                    s / (m as f64 * a.powi(m as i32))
                }
            })
            .collect();
        self.compose(&t)
    }

    pub fn sin(&self) -> Jet {
        self.trig(0)
    }

    pub fn cos(&self) -> Jet {
        self.trig(1)
    }

    fn trig(&self, shift: usize) -> Jet {
        let a = self.value();
        let cycle = [a.sin(), a.cos(), -a.sin(), -a.cos()];
        let mut f = 1.0;
        let t: Vec<Complex64> = (0..=self.order)
            .map(|m| {
                if m > 0 {
                    f *= m as f64;
                }
                cycle[(m + shift) % 4] / f
            })
            .collect();
        self.compose(&t)
    }

    /// Evaluates an expression in jet arithmetic (forward-mode differentiation).
    pub fn eval_expr(
        expr: &Expr,
        space: &Arc<JetSpace>,
        point: &[f64],
        order: usize,
    ) -> Result<Jet, EvalError> {
        let needed = expr.arity();
        if point.len() < needed || point.len() != space.nvars() {
            return Err(EvalError::PointDimension {
                needed: needed.max(space.nvars()),
                found: point.len(),
            });
        }
        let domain = |op: &str| EvalError::Domain {
            op: op.into(),
            point: point.to_vec(),
        };
        Ok(match expr.node() {
            Node::Num(c) => Jet::real(space, order, *c),
            Node::Var(i) => Jet::variable(space, order, *i, point[*i]),
            Node::Neg(a) => Self::eval_expr(a, space, point, order)?.neg(),
            Node::Add(a, b) => Self::eval_expr(a, space, point, order)?
                .add(&Self::eval_expr(b, space, point, order)?),
            Node::Sub(a, b) => Self::eval_expr(a, space, point, order)?
                .sub(&Self::eval_expr(b, space, point, order)?),
            Node::Mul(a, b) => Self::eval_expr(a, space, point, order)?
                .mul(&Self::eval_expr(b, space, point, order)?),
            Node::Div(a, b) => {
                let d = Self::eval_expr(b, space, point, order)?;
                if d.value().norm() == 0.0 {
                    return Err(domain("division by zero"));
                }
                Self::eval_expr(a, space, point, order)?.div(&d)
            }
            Node::Pow(a, k) => {
                let x = Self::eval_expr(a, space, point, order)?;
                if *k < 0 && x.value().norm() == 0.0 {
                    return Err(domain("negative power of zero"));
                }
                x.powi(*k)
            }
            Node::Call(f, a) => {
                let x = Self::eval_expr(a, space, point, order)?;
                let v = x.value().re;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log if v > 0.0 => x.ln(),
                    Func::Sqrt if v > 0.0 => x.sqrt(),
                    Func::Log => return Err(domain("log")),
                    Func::Sqrt => return Err(domain("sqrt")),
                }
            }
        })
    }

    /// Builds the jet of `expr` from its symbolic partial derivatives.
    pub fn taylor(
        expr: &Expr,
        space: &Arc<JetSpace>,
        point: &[f64],
        order: usize,
    ) -> Result<Jet, EvalError> {
        let derivs = symbolic_derivatives(expr, space, order);
        Self::from_derivatives(&derivs, space, point, order)
    }

    /// Jet from precomputed derivative expressions (as returned by [`symbolic_derivatives`]).
    pub fn from_derivatives(
        derivs: &[Expr],
        space: &Arc<JetSpace>,
        point: &[f64],
        order: usize,
    ) -> Result<Jet, EvalError> {
        let len = space.len(order);
        assert!(
            derivs.len() >= len,
            "not enough derivative expressions for the jet order"
        );
        let mut coeffs = Vec::with_capacity(len);
        for (i, d) in derivs.iter().take(len).enumerate() {
            let v = if d.is_zero() { 0.0 } else { d.eval(point)? };
            coeffs.push(Complex64::new(v / space.factorials[i], 0.0));
        }
        Ok(Jet {
            space: space.clone(),
            order,
            coeffs,
        })
    }
}

/// Symbolic `∂^α expr` for every monomial `α` up to `order`, in jet coefficient order.
pub fn symbolic_derivatives(expr: &Expr, space: &Arc<JetSpace>, order: usize) -> Vec<Expr> {
    let len = space.len(order);
    let mut out: Vec<Expr> = Vec::with_capacity(len);
    out.push(expr.clone());
    for i in 1..len {
        let (parent, k) = space.parents[i].expect("non-constant monomial has a parent");
        let d = if out[parent].is_zero() {
            Expr::zero()
        } else {
            out[parent].diff(k)
        };
        out.push(d);
    }
    out
}

impl Coeff for Jet {
    fn zero_like(&self) -> Self {
        self.zero_of()
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        if other.order < self.order {
            *self = self.truncate(other.order);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale(&self, s: f64) -> Self {
        self.scale_c(Complex64::new(s, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: f64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn monomials_are_graded() {
        let sp = JetSpace::get(3);
        assert_eq!(sp.len(0), 1);
        assert_eq!(sp.len(1), 4);
        assert_eq!(sp.len(2), 10);
        assert_eq!(sp.len(4), 35);
        assert_eq!(sp.monomial(1), &[1, 0, 0]);
        assert_eq!(sp.monomial(3), &[0, 0, 1]);
    }

    #[test]
    fn product_rule_and_composition() {
        let sp = JetSpace::get(2);
        let p = [0.3, -0.7];
        let x = Jet::variable(&sp, 3, 0, p[0]);
        let y = Jet::variable(&sp, 3, 1, p[1]);
        let f = x.mul(&y).sin();
        // f = sin(xy); ∂x f = y cos(xy); ∂x∂y f = cos(xy) - xy sin(xy)
        let xy = p[0] * p[1];
        assert!(close(f.value(), xy.sin()));
        assert!(close(f.partial(0), p[1] * xy.cos()));
        let fxy = f.derivative(0).derivative(1).value();
        assert!(close(fxy, xy.cos() - xy * xy.sin()));
        let r = x.recip().mul(&x);
        assert!(close(r.value(), 1.0) && r.coeffs()[1..].iter().all(|c| c.norm() < 1e-12));
        let s = x.sqrt().mul(&x.sqrt()).sub(&x);
        assert!(s.coeffs().iter().all(|c| c.norm() < 1e-12));
        let l = x.exp().ln().sub(&x);
        assert!(l.coeffs().iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn symbolic_and_forward_mode_agree() {
        let sp = JetSpace::get(3);
        let e = Expr::parse(
            "sin(x1*x2)/(2+cos(x3)) + sqrt(1+x1^2)*exp(-x2) + log(3+x3)^2",
            3,
        )
        .unwrap();
        let p = [0.4, -1.1, 0.8];
        let a = Jet::taylor(&e, &sp, &p, 4).unwrap();
        let b = Jet::eval_expr(&e, &sp, &p, 4).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-11 * (1.0 + x.norm()), "{x} vs {y}");
        }
    }
}
