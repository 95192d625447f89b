//! Constructed configurations with known residuals.

use rand::Rng;

use crate::blade::Blade;
use crate::error::Result;
use crate::expr::Expr;
use crate::manifold::{Chart, ComplexExpr, FormField};
use crate::metric::Metric;
use crate::multivector::Multivector;
use crate::sample;
use crate::table::ProductTable;

use super::{system_residuals, FieldConfig, GaugeField};

const SPATIAL: [Blade; 3] = [0b0011, 0b0101, 0b0110];

/// Minkowski space `diag(-1, -1, -1, 1)` on the box `(-w, w)^4`.
pub fn minkowski_chart(half_width: f64) -> Chart {
    Chart::constant(&Metric::minkowski(), half_width)
}

/// The constant 1-form `dx^4`, which satisfies `H² = 1` on Minkowski space.
pub fn time_form() -> FormField {
    let mut h = FormField::zero(4);
    h.set(1 << 3, ComplexExpr::constant(1.0.into()));
    h
}

fn shifted(k: usize, x0: &[f64]) -> Expr {
    Expr::var(k).sub(&Expr::num(x0[k]))
}

/// `c + l_k (x^k - x0^k) + ½ q_{kl} (x^k - x0^k)(x^l - x0^l)`.
fn quadratic(c: f64, l: &[f64], q: &[Vec<f64>], x0: &[f64]) -> Expr {
    let n = x0.len();
    let mut e = Expr::num(c);
    for k in 0..n {
        e = e.add(&Expr::num(l[k]).mul(&shifted(k, x0)));
        for m in 0..n {
            e = e.add(
                &Expr::num(0.5 * q[k][m])
                    .mul(&shifted(k, x0))
                    .mul(&shifted(m, x0)),
            );
        }
    }
    e
}

fn spatial_bivector(rng: &mut sample::SampleRng, scale: f64) -> Multivector {
    let mut b = Multivector::zero(4);
    for &s in &SPATIAL {
        b.set(s, rng.gen_range(-scale..scale).into());
    }
    b
}

/// A configuration on Minkowski space with `Ψ = 0`, `H = dx^4` and random nonabelian
/// potentials that satisfy every equation of the system at the returned point: the
/// linear parts make `G = 0` there and a quadratic correction along one axis balances
/// the Maxwell and Yang-Mills divergences.
pub fn balanced_gauge_config(seed: u64) -> Result<(FieldConfig, Vec<f64>)> {
    let mut rng = sample::rng(seed);
    let n = 4;
    let metric = Metric::minkowski();
    let table = ProductTable::new(&metric)?;
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let sym = |rng: &mut sample::SampleRng| {
        let mut q = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-1.0..1.0);
                q[i][j] = v;
                q[j][i] = v;
            }
        }
        q
    };
    let mut a_exprs = Vec::with_capacity(n);
    for _ in 0..n {
        let c = rng.gen_range(-1.0..1.0);
        let l: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q = sym(&mut rng);
        a_exprs.push(quadratic(c, &l, &q, &x0));
    }
    let b0: Vec<Multivector> = (0..n).map(|_| spatial_bivector(&mut rng, 0.8)).collect();
    // linear coefficients lin[i][j] of B_j along x^i, with lin - lin^T = -[B_i, B_j]
    let mut lin = vec![vec![Multivector::zero(n); n]; n];
    for i in 0..n {
        for j in i..n {
            let s = spatial_bivector(&mut rng, 0.8);
            let c = table.commutator(&b0[i], &b0[j]) * 0.5;
            lin[i][j] = s.clone() - c.clone();
            lin[j][i] = s + c;
        }
    }
    let mut quad: Vec<Vec<Vec<Multivector>>> = vec![vec![vec![Multivector::zero(n); n]; n]; n];
    for qj in quad.iter_mut() {
        for k in 0..n {
            for m in k..n {
                let s = spatial_bivector(&mut rng, 0.8);
                qj[k][m] = s.clone();
                qj[m][k] = s;
            }
        }
    }
    let b_expr = |j: usize, s: Blade| {
        let l: Vec<f64> = (0..n).map(|i| lin[i][j].coeff(s).re).collect();
        let q: Vec<Vec<f64>> = quad[j]
            .iter()
            .map(|r| r.iter().map(|x| x.coeff(s).re).collect())
            .collect();
        quadratic(b0[j].coeff(s).re, &l, &q, &x0)
    };
    let build = |a: &[Expr], b: &dyn Fn(usize, Blade) -> Expr| -> Result<FieldConfig> {
        let bs = (0..n)
            .map(|j| {
                let mut f = FormField::zero(n);
                for &s in &SPATIAL {
                    f.set(s, ComplexExpr::real(b(j, s)));
                }
                f
            })
            .collect();
        let a = a.iter().map(|e| ComplexExpr::imag(e.clone())).collect();
        FieldConfig::new(
            minkowski_chart(2.0),
            FormField::zero(n),
            a,
            bs,
            time_form(),
            0.7,
        )
    };
    let uncorrected = build(&a_exprs, &b_expr)?;
    let (frame, fields) = uncorrected.local(&x0, 2)?;
    let res = system_residuals(&frame, &fields)?;
    let axis = |j: usize| (j + 1) % n;
    let weight = |j: usize| metric.g(axis(j), axis(j)) * metric.g(j, j);
    for j in 0..n {
        let m = axis(j);
        let k = -res.maxwell[j].im / weight(j);
        a_exprs[j] = a_exprs[j].add(&Expr::num(0.5 * k).mul(&shifted(m, &x0).powi(2)));
    }
    let corrected_b = |j: usize, s: Blade| {
        let k = -res.yang_mills[j].coeff(s).re / weight(j);
        b_expr(j, s).add(&Expr::num(0.5 * k).mul(&shifted(axis(j), &x0).powi(2)))
    };
    Ok((build(&a_exprs, &corrected_b)?, x0))
}

/// A configuration on the round sphere whose `B` is linear and vanishes at `p`, with
/// `G_{ij}(p) = -½ D_{ij}(p)`, and an `H` that is unit and parallel at `p`.
pub fn sphere_link_config(p: &[f64]) -> Result<FieldConfig> {
    let chart = Chart::round_sphere();
    let n = chart.dim();
    let frame = chart.frame(p, 2)?;
    let curv = frame.curvature()?;
    let gamma = chart.christoffel(p)?;
    let b = (0..n)
        .map(|j| {
            let mut f = FormField::zero(n);
            for i in 0..n {
                let l = curv.d_form(i, j) * -0.25;
                for (s, c) in l.terms() {
                    if c.norm() > 0.0 {
                        f.set(
                            s,
                            f.coeff(s)
                                .cloned()
                                .unwrap_or(ComplexExpr::constant(0.0.into()))
                                .add(&ComplexExpr::real(Expr::num(c.re).mul(&shifted(i, p)))),
                        );
                    }
                }
            }
            f
        })
        .collect();
    let h0 = [1.0 / frame.g_upper(0, 0).value().re.sqrt(), 0.0];
    let mut h = FormField::zero(n);
    for i in 0..n {
        let mut e = Expr::num(h0[i]);
        for k in 0..n {
            let slope: f64 = (0..n).map(|l| gamma[l][k][i] * h0[l]).sum();
            e = e.add(&Expr::num(slope).mul(&shifted(k, p)));
        }
        h.set(1 << i, ComplexExpr::real(e));
    }
    FieldConfig::new(
        chart,
        FormField::zero(n),
        vec![ComplexExpr::constant(0.0.into()); n],
        b,
        h,
        0.0,
    )
}

/// A flat nonabelian connection `B_k = U^{-1} ∂_k U` with
/// `U = exp(α x^1 e^{12}) exp(β x^2 e^{13})`, a constant electromagnetic field and `Ψ = 0`
/// on Minkowski space. Every equation holds everywhere. With `flip_sign` the sign of `B_2`
/// is reversed, which breaks the Yang-Mills equation.
pub fn flat_connection_config(flip_sign: bool) -> Result<FieldConfig> {
    let (alpha, beta) = (0.9, 0.7);
    let n = 4;
    let parse = |s: &str| Expr::parse(s, n);
    let mut b1 = FormField::zero(n);
    b1.set(
        0b0011,
        ComplexExpr::real(parse(&format!("{alpha}*cos({}*x2)", 2.0 * beta))?),
    );
    b1.set(
        0b0110,
        ComplexExpr::real(parse(&format!("{alpha}*sin({}*x2)", 2.0 * beta))?),
    );
    let mut b2 = FormField::zero(n);
    let sign = if flip_sign { -1.0 } else { 1.0 };
    b2.set(0b0101, ComplexExpr::constant((sign * beta).into()));
    let a = [
        "0.3*x2 - 0.1*x4",
        "-0.3*x1 + 0.25*x3",
        "0.4*x4 - 0.25*x2",
        "0.2*x1",
    ]
    .iter()
    .map(|s| Ok(ComplexExpr::imag(parse(s)?)))
    .collect::<Result<Vec<_>>>()?;
    FieldConfig::new(
        minkowski_chart(3.0),
        FormField::zero(n),
        a,
        vec![b1, b2, FormField::zero(n), FormField::zero(n)],
        time_form(),
        1.0,
    )
}

/// Random smooth fields on `chart`: complex mixed-grade `Ψ`, imaginary `a`, real 2-form
/// `B` and a real 1-form `H` that does not solve its equation. `c1 = 1.3`, `c2 = 0.7`.
pub fn random_config(seed: u64, chart: Chart) -> Result<FieldConfig> {
    let mut rng = sample::rng(seed);
    let n = chart.dim();
    let all: Vec<usize> = (0..=n).collect();
    let psi = sample::form_field(&mut rng, n, &all, true);
    let a = (0..n)
        .map(|_| ComplexExpr::imag(sample::smooth_expr(&mut rng, n)))
        .collect();
    let b = (0..n)
        .map(|_| sample::form_field(&mut rng, n, &[2], false))
        .collect();
    let h = sample::form_field(&mut rng, n, &[1], false);
    FieldConfig::new(chart, psi, a, b, h, 0.8)?.with_couplings(1.3, 0.7)
}

/// Random smooth fields on Minkowski space with `H = dx^4` and spatial `B`, so both
/// `H`-equations hold everywhere.
pub fn minkowski_config(seed: u64) -> Result<FieldConfig> {
    let mut rng = sample::rng(seed);
    let n = 4;
    let all: Vec<usize> = (0..=n).collect();
    let psi = sample::form_field(&mut rng, n, &all, true);
    let a = (0..n)
        .map(|_| ComplexExpr::imag(sample::smooth_expr(&mut rng, n)))
        .collect();
    let b = (0..n)
        .map(|_| {
            let mut f = FormField::zero(n);
            for &s in &SPATIAL {
                f.set(s, ComplexExpr::real(sample::smooth_expr(&mut rng, n)));
            }
            f
        })
        .collect();
    FieldConfig::new(minkowski_chart(2.0), psi, a, b, time_form(), 0.6)
}

/// A random gauge field `U = exp(β)`, `v = exp(iχ)` with `β` of size about 0.4.
pub fn random_gauge(seed: u64, n: usize) -> Result<GaugeField> {
    let mut rng = sample::rng(seed);
    let raw = sample::form_field(&mut rng, n, &[2], false);
    let mut beta = FormField::zero(n);
    for (b, c) in raw.terms() {
        beta.set(b, c.scale(0.4));
    }
    GaugeField::new(beta, sample::smooth_expr(&mut rng, n))
}
