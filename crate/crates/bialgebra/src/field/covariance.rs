use nalgebra::DMatrix;

use crate::blade;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::manifold::{ComplexExpr, CoordinateChange, FormField};
use crate::multivector::Multivector;
use crate::spin::{is_spin_member, isometry_of};
use crate::table::ProductTable;

use super::{lagrangian_l1, main_residual, system_residuals, FieldConfig, SystemResiduals};

/// Transforms a form value by `u~_J = Σ_I u_I det q[I, J]` with `q^i_a = ∂x^i/∂y^a`.
pub fn pull_multivector(q: &DMatrix<f64>, u: &Multivector) -> Multivector {
    let n = u.dim();
    let mut out = Multivector::zero(n);
    for (b, c) in u.terms() {
        let rows = blade::indices(b);
        for target in blade::blades_of_grade(n, rows.len()) {
            let cols = blade::indices(target);
            let minor = DMatrix::from_fn(rows.len(), cols.len(), |r, s| q[(rows[r], cols[s])]);
            let det = if rows.is_empty() {
                1.0
            } else {
                minor.determinant()
            };
            out.set(target, out.coeff(target) + c * det);
        }
    }
    out
}

/// The configuration in the new coordinates `y` with `x = x(y)`: forms are pulled back,
/// `a~_k = a_j q^j_k` and `B~_k = B_j q^j_k`.
pub fn transform_config(
    cfg: &FieldConfig,
    change: &CoordinateChange,
    domain: Vec<(f64, f64)>,
) -> Result<FieldConfig> {
    let n = cfg.dim();
    if change.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: change.dim(),
        });
    }
    let chart = change.pullback_chart(&cfg.chart, domain)?;
    let psi = change.pullback_form(&cfg.psi)?;
    let h = change.pullback_form(&cfg.h)?;
    let pulled_b = cfg
        .b
        .iter()
        .map(|b| change.pullback_form(b))
        .collect::<Result<Vec<_>>>()?;
    let moved_a: Vec<ComplexExpr> = cfg.a.iter().map(|a| a.substitute(change.map())).collect();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let mut ak = ComplexExpr::constant(0.0.into());
        let mut bk = FormField::zero(n);
        for j in 0..n {
            let q = change.q(j, k);
            if q.is_zero() {
                continue;
            }
            ak = ak.add(&moved_a[j].mul_real(q));
            bk = bk.add(&pulled_b[j].mul_real(q));
        }
        a.push(ak);
        b.push(bk);
    }
    FieldConfig::new(chart, psi, a, b, h, cfg.m)?.with_couplings(cfg.c1, cfg.c2)
}

/// Mismatches between the residuals computed in the new coordinates and the transformed
/// residuals of the original coordinates.
#[derive(Debug, Clone)]
pub struct CovarianceReport {
    pub mismatches: Vec<(&'static str, f64)>,
    /// Largest transformed residual component, for relative comparisons.
    pub scale: f64,
}

impl CovarianceReport {
    pub fn max_mismatch(&self) -> f64 {
        self.mismatches.iter().map(|m| m.1).fold(0.0, f64::max)
    }
}

fn link_matrix(res: &SystemResiduals, n: usize) -> Vec<Vec<Multivector>> {
    let mut out = vec![vec![Multivector::zero(n); n]; n];
    let mut it = res.curvature_link.iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = it.next().expect("one entry per pair").clone();
            out[j][i] = -v.clone();
            out[i][j] = v;
        }
    }
    out
}

/// Evaluates the system in both coordinate systems at `y` (new) and `x(y)` (old) and
/// compares them through the tensor transformation laws.
pub fn covariance_check(
    cfg: &FieldConfig,
    transformed: &FieldConfig,
    change: &CoordinateChange,
    y: &[f64],
) -> Result<CovarianceReport> {
    let n = cfg.dim();
    let x = change.apply(y)?;
    let q = change.jacobian_at(y)?;
    let p = q.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    let (frame_old, f_old) = cfg.local(&x, 2)?;
    let (frame_new, f_new) = transformed.local(y, 2)?;
    let old = system_residuals(&frame_old, &f_old)?;
    let new = system_residuals(&frame_new, &f_new)?;
    let pull = |u: &Multivector| pull_multivector(&q, u);
    let mut scale: f64 = 0.0;
    let mut cmp = |a: &Multivector, b: &Multivector| {
        scale = scale.max(b.norm_max());
        a.distance(b)
    };
    let main = cmp(&new.main, &pull(&old.main));
    let h_square = cmp(&new.h_square, &pull(&old.h_square));
    let mut h_derivative: f64 = 0.0;
    let mut yang_mills: f64 = 0.0;
    let mut maxwell: f64 = 0.0;
    let mut link: f64 = 0.0;
    let (link_old, link_new) = (link_matrix(&old, n), link_matrix(&new, n));
    for k in 0..n {
        let mut e = Multivector::zero(n);
        let mut ym = Multivector::zero(n);
        let mut mw = num_complex::Complex64::new(0.0, 0.0);
        for j in 0..n {
            e = e + pull(&old.h_derivative[j]) * q[(j, k)];
            ym = ym + pull(&old.yang_mills[j]) * p[(k, j)];
            mw += old.maxwell[j] * p[(k, j)];
        }
        h_derivative = h_derivative.max(cmp(&new.h_derivative[k], &e));
        yang_mills = yang_mills.max(cmp(&new.yang_mills[k], &ym));
        maxwell = maxwell.max((new.maxwell[k] - mw).norm());
        for l in 0..n {
            let mut d = Multivector::zero(n);
            for i in 0..n {
                for j in 0..n {
                    d = d + pull(&link_old[i][j]) * (q[(i, k)] * q[(j, l)]);
                }
            }
            link = link.max(cmp(&link_new[k][l], &d));
        }
    }
    let l1 = (lagrangian_l1(&frame_new, &f_new) - lagrangian_l1(&frame_old, &f_old)).norm();
    Ok(CovarianceReport {
        mismatches: vec![
            ("main", main),
            ("maxwell", maxwell),
            ("yang_mills", yang_mills),
            ("h_square", h_square),
            ("h_derivative", h_derivative),
            ("curvature_link", link),
            ("lagrangian_l1", l1),
        ],
        scale,
    })
}

/// Results of the spinor transformation check for a constant spin element `F`.
#[derive(Debug, Clone, Copy)]
pub struct SpinorCovariance {
    /// `max |Ψ~ - F Ψ̆ F*|`, with `Ψ̆` the old coefficients on the new basis.
    pub form_law: f64,
    /// `max |main(F Ψ̆, a~, F* B~ F) - main(Ψ~) F|`.
    pub spinor_law: f64,
    /// Size of the main residual in the new coordinates.
    pub residual: f64,
}

/// For the linear change `x = P^{-1} y` with `P` the isometry of a constant spin element
/// `F`, checks that the pulled-back wave form is `F Ψ̆ F*` and that combining the change
/// with the gauge transformation by `F` maps `Ψ` to the spinor `F Ψ̆`.
///
/// The chart metric must be constant. `domain` is the box used for the new chart.
pub fn spinor_covariance_check(
    cfg: &FieldConfig,
    f: &Multivector,
    domain: Vec<(f64, f64)>,
    y: &[f64],
) -> Result<SpinorCovariance> {
    let n = cfg.dim();
    let g: Vec<Vec<f64>> = cfg
        .chart
        .g_lower()
        .iter()
        .map(|r| r.iter().map(Expr::as_num).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Invalid("the spinor law needs a constant metric".into()))?;
    let metric = crate::metric::Metric::from_lower_rows(&g)?;
    let table = ProductTable::new(&metric)?;
    if !is_spin_member(f, &table) || !f.is_real_within(1e-12) {
        return Err(Error::NotSpin(
            "F must be a real spin element of the chart metric".into(),
        ));
    }
    let p = isometry_of(f, &table);
    let q = p.try_inverse().ok_or(Error::SingularMatrix)?;
    let map = (0..n)
        .map(|i| {
            (0..n).fold(Expr::zero(), |acc, a| {
                acc.add(&Expr::num(q[(i, a)]).mul(&Expr::var(a)))
            })
        })
        .collect();
    let change = CoordinateChange::new(map)?;
    let tensor = transform_config(cfg, &change, domain)?;
    let f = &f.map_blades(|_, c| c.re.into());
    let fstar = f.star_conj();
    let breve = cfg.psi.substitute(change.map());
    let spinor_psi = breve.mul_constant(&table, f, true);
    let conj = |u: &FormField| {
        u.mul_constant(&table, &fstar, true)
            .mul_constant(&table, f, false)
    };
    let mut spinor = tensor.clone();
    spinor.psi = spinor_psi;
    spinor.b = tensor.b.iter().map(conj).collect();
    spinor.h = conj(&tensor.h);
    let pulled = tensor.psi.eval(y)?;
    let sandwich = table.mul_all(&[f, &breve.eval(y)?, &fstar]);
    let (frame_t, fields_t) = tensor.local(y, 1)?;
    let (frame_s, fields_s) = spinor.local(y, 1)?;
    let main_t = main_residual(&frame_t, &fields_t);
    let main_s = main_residual(&frame_s, &fields_s);
    Ok(SpinorCovariance {
        form_law: pulled.distance(&sandwich),
        spinor_law: main_s.distance(&table.mul(&main_t, f)),
        residual: main_s.norm_max(),
    })
}
