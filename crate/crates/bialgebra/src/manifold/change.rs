use nalgebra::DMatrix;

use crate::blade;
use crate::error::{Error, Result};
use crate::expr::Expr;

use super::chart::Chart;
use super::form_field::{ComplexExpr, FormField};

/// A change of coordinates `x^i = x^i(y)`, given as the old coordinates in terms of the new.
#[derive(Debug, Clone)]
pub struct CoordinateChange {
    dim: usize,
    map: Vec<Expr>,
    jacobian: Vec<Expr>,
}

impl CoordinateChange {
    pub fn new(map: Vec<Expr>) -> Result<Self> {
        let dim = map.len();
        if let Some(e) = map.iter().find(|e| e.arity() > dim) {
            return Err(Error::Invalid(format!(
                "coordinate map {e} uses a coordinate beyond x{dim}"
            )));
        }
        let jacobian = (0..dim * dim).map(|a| map[a / dim].diff(a % dim)).collect();
        Ok(CoordinateChange { dim, map, jacobian })
    }

    pub fn parse(map: &[&str]) -> Result<Self> {
        let dim = map.len();
        let exprs = map
            .iter()
            .map(|s| Expr::parse(s, dim))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CoordinateChange::new(exprs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn map(&self) -> &[Expr] {
        &self.map
    }

    /// Old coordinates of the new point `y`.
    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .map
            .iter()
            .map(|e| e.eval(y))
            .collect::<std::result::Result<Vec<_>, _>>()?)
    }

    /// `q^i_a = ∂x^i / ∂y^a` as an expression.
    pub fn q(&self, i: usize, a: usize) -> &Expr {
        &self.jacobian[i * self.dim + a]
    }

    pub fn jacobian_at(&self, y: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim;
        let mut q = DMatrix::zeros(n, n);
        for i in 0..n {
            for a in 0..n {
                q[(i, a)] = self.q(i, a).eval(y)?;
            }
        }
        Ok(q)
    }

    /// The pulled-back chart `g~_{ab} = q^i_a q^j_b g_{ij}(x(y))` on the box `domain`.
    pub fn pullback_chart(&self, chart: &Chart, domain: Vec<(f64, f64)>) -> Result<Chart> {
        let n = self.dim;
        if chart.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: chart.dim(),
            });
        }
        let g: Vec<Vec<Expr>> = chart
            .g_lower()
            .iter()
            .map(|r| r.iter().map(|e| e.substitute(&self.map)).collect())
            .collect();
        let mut rows = vec![vec![Expr::zero(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut s = Expr::zero();
                for i in 0..n {
                    for j in 0..n {
                        if g[i][j].is_zero() {
                            continue;
                        }
                        s = s.add(&self.q(i, a).mul(self.q(j, b)).mul(&g[i][j]));
                    }
                }
                rows[a][b] = s;
            }
        }
        Chart::new(rows, domain)
    }

    /// The pulled-back form: `u~_J = Σ_I u_I(x(y)) det q[I, J]`.
    pub fn pullback_form(&self, u: &FormField) -> Result<FormField> {
        let n = self.dim;
        if u.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.dim(),
            });
        }
        let mut out = FormField::zero(n);
        for (b, c) in u.terms() {
            let rows = blade::indices(b);
            let moved = c.substitute(&self.map);
            for target in blade::blades_of_grade(n, rows.len()) {
                let cols = blade::indices(target);
                let minor = det_expr(
                    &rows
                        .iter()
                        .map(|&i| cols.iter().map(|&a| self.q(i, a).clone()).collect())
                        .collect::<Vec<Vec<Expr>>>(),
                );
                if minor.is_zero() {
                    continue;
                }
                let term = ComplexExpr::new(moved.re.mul(&minor), moved.im.mul(&minor));
                out.add_term(&cols, term)?;
            }
        }
        Ok(out)
    }
}

/// Determinant of a small expression matrix by cofactor expansion along the first row.
pub(crate) fn det_expr(m: &[Vec<Expr>]) -> Expr {
    let k = m.len();
    match k {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut total = Expr::zero();
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<Expr>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][c].mul(&det_expr(&sub));
                total = if c % 2 == 0 {
                    total.add(&term)
                } else {
                    total.sub(&term)
                };
            }
            total
        }
    }
}
