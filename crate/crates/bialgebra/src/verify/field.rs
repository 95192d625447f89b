//! Gauge invariance, conservation, the curvature link and the variational spot check.

use num_complex::Complex64;
use rand::Rng;

use super::{Case, Worst};
use crate::error::Result;
use crate::field::dirac::PlaneWave;
use crate::field::fixtures::{self, minkowski_chart};
use crate::field::{
    conservation, curvature_link_defect, euler_lagrange, field_strengths, gauge_transform,
    h_defects, hg_identity, lagrangian, lagrangian_l0, lagrangian_l1, lagrangian_l1_h,
    main_residual, strength_components, system_residuals, FieldConfig, Sectors,
};
use crate::manifold::Frame;
use crate::multivector::Multivector;
use crate::sample;
use crate::table::ProductTable;

fn scalar_defect(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

struct Gauged {
    frame: Frame,
    table: ProductTable,
    before: crate::field::LocalFields,
    after: crate::field::LocalFields,
    u: Multivector,
    uv: Multivector,
}

fn gauged(cfg: &FieldConfig, gauge_seed: u64, p: &[f64]) -> Result<Gauged> {
    let frame = cfg.chart.frame(p, 3)?;
    let table = ProductTable::new(&frame.metric())?;
    let before = cfg.fields_at(&frame, 2)?;
    let (u, v) = fixtures::random_gauge(gauge_seed, cfg.dim())?.jets(&frame, 3)?;
    let after = gauge_transform(&frame, &before, &u, &v)?;
    let uv = u.value() * v.value();
    Ok(Gauged {
        frame,
        table,
        before,
        after,
        u: u.value(),
        uv,
    })
}

/// Gauge behaviour at `points` random points, each with fresh random fields and a fresh
/// random gauge. The main residual, `L1`, `f`, `G + ½D` and the `H`-equations are checked
/// on curved charts; `L0` and `L` on flat Minkowski space, where `D = 0`.
pub fn gauge_invariance(seed: u64, points: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let names = [
        "main",
        "l1",
        "l1_trace_form",
        "f_strength",
        "g_strength",
        "h_equations",
        "l0_flat",
        "total_flat",
    ];
    let mut w = vec![Worst::default(); names.len()];
    let curved = [sample::warped_chart(), sample::lorentz_chart()];
    for s in 0..points {
        let chart = curved[s % 2].clone();
        let n = chart.dim();
        let cfg = fixtures::random_config(rng.gen(), chart)?;
        let p = sample::point(&mut rng, n, 0.6);
        let g = gauged(&cfg, rng.gen(), &p)?;
        let (frame, f, t) = (&g.frame, &g.before, &g.after);
        let expected = g.table.mul(&main_residual(frame, f), &g.uv);
        w[0].add_mv(&main_residual(frame, t), &expected);
        w[1].add(scalar_defect(
            lagrangian_l1(frame, f),
            lagrangian_l1(frame, t),
        ));
        w[2].add(scalar_defect(
            lagrangian_l1_h(frame, f),
            lagrangian_l1_h(frame, t),
        ));
        let (sf, st) = (field_strengths(frame, f), field_strengths(frame, t));
        let curv = frame.curvature()?;
        let uinv = g.u.star_conj();
        for i in 0..n {
            for j in 0..n {
                w[3].add((sf.f(i, j).value() - st.f(i, j).value()).norm());
                let half_d = curv.d_form(i, j) * 0.5;
                let moved = g
                    .table
                    .mul_all(&[&uinv, &(sf.g(i, j).value() + half_d.clone()), &g.u]);
                w[4].add_mv(&(st.g(i, j).value() + half_d), &moved);
            }
        }
        let (sq, e) = h_defects(frame, f);
        let (sqt, et) = h_defects(frame, t);
        w[5].add_mv(&sqt, &g.table.mul_all(&[&uinv, &sq, &g.u]));
        for k in 0..n {
            w[5].add_mv(
                &et[k].value(),
                &g.table.mul_all(&[&uinv, &e[k].value(), &g.u]),
            );
        }

        let flat = fixtures::random_config(rng.gen(), minkowski_chart(1.0))?;
        let p = sample::point(&mut rng, 4, 0.6);
        let g = gauged(&flat, rng.gen(), &p)?;
        let (frame, f, t) = (&g.frame, &g.before, &g.after);
        w[0].add_mv(
            &main_residual(frame, t),
            &g.table.mul(&main_residual(frame, f), &g.uv),
        );
        w[1].add(scalar_defect(
            lagrangian_l1(frame, f),
            lagrangian_l1(frame, t),
        ));
        w[6].add(scalar_defect(
            lagrangian_l0(frame, f),
            lagrangian_l0(frame, t),
        ));
        w[7].add(scalar_defect(lagrangian(frame, f), lagrangian(frame, t)));
    }
    Ok(names
        .iter()
        .zip(w)
        .map(|(name, x)| Case::new(format!("field/gauge_{name}"), x.0, 1e-9))
        .collect())
}

/// `Tr(H(C + C*))` and `Tr(iH(C - C*))` are real for complex `C` and real 1-forms `H`.
pub fn trace_realness(seed: u64, count: usize) -> Result<Case> {
    let mut rng = sample::rng(seed);
    let mut worst = Worst::default();
    for _ in 0..count {
        let n = rng.gen_range(2..=5);
        let table = ProductTable::new(&sample::metric(&mut rng, n))?;
        let c = sample::multivector(&mut rng, n, true);
        let h = sample::form(&mut rng, n, 1, false);
        let sum = table.mul(&h, &(c.clone() + c.star_conj())).scalar_part();
        let diff = table.mul(&h, &(c.clone() - c.star_conj())).scalar_part() * Complex64::i();
        worst.add(sum.im.abs() / sum.norm().max(1.0));
        worst.add(diff.im.abs() / diff.norm().max(1.0));
    }
    Ok(Case::new("field/trace_realness", worst.0, 1e-10))
}

/// On Minkowski fields where the `H`-equations hold: the conservation identity for arbitrary
/// `Ψ`, the agreement of the two forms of `L1` and the realness of `L1` and the current.
pub fn conservation_identity(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let mut identity = Worst::default();
    let mut l1_forms = Worst::default();
    let mut real = Worst::default();
    for _ in 0..count {
        let cfg = fixtures::minkowski_config(rng.gen())?;
        let (frame, f) = cfg.local(&sample::point(&mut rng, 4, 1.0), 2)?;
        let c = conservation(&frame, &f, 1e-10)?;
        identity.add(c.defect() / c.divergence.norm().max(1.0));
        real.add(c.current_imag);
        let (l1, l1h) = (lagrangian_l1(&frame, &f), lagrangian_l1_h(&frame, &f));
        l1_forms.add(scalar_defect(l1, l1h));
        real.add(l1.im.abs() / l1.norm().max(1.0));
    }
    Ok(vec![
        Case::new("field/conservation_identity", identity.0, 1e-7),
        Case::new("field/l1_forms_agree", l1_forms.0, 1e-10),
        Case::new("field/current_and_l1_real", real.0, 1e-10),
    ])
}

fn plane_wave(rng: &mut sample::SampleRng) -> Result<PlaneWave> {
    let m = rng.gen_range(0.2..1.5);
    let k: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.8..0.8)).collect();
    let e0 = (m * m + k.iter().map(|x| x * x).sum::<f64>()).sqrt();
    PlaneWave::new([k[0], k[1], k[2], e0], m)
}

/// Dirac plane waves solve the main equation and have a divergence-free current.
pub fn plane_waves(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let mut main = Worst::default();
    let mut divergence = Worst::default();
    for _ in 0..count {
        let cfg = plane_wave(&mut rng)?.config(2.0)?;
        let (frame, f) = cfg.local(&sample::point(&mut rng, 4, 1.5), 2)?;
        main.add(main_residual(&frame, &f).norm_max());
        divergence.add(conservation(&frame, &f, 1e-12)?.divergence.norm());
    }
    Ok(vec![
        Case::new("field/plane_wave_main", main.0, 1e-12),
        Case::new("field/plane_wave_divergence", divergence.0, 1e-7),
    ])
}

/// The constructed sphere configurations with `G = -½D` at their point: the link defect,
/// the `HG` compatibility identity and `b_{ij,kl} = -½ R_{ij,kl}`.
pub fn curvature_link(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let mut link = Worst::default();
    let mut compat = Worst::default();
    let mut components = Worst::default();
    for _ in 0..count {
        let p = [rng.gen_range(0.4..2.7), rng.gen_range(-3.0..3.0)];
        let cfg = fixtures::sphere_link_config(&p)?;
        let (frame, f) = cfg.local(&p, 2)?;
        link.add(curvature_link_defect(&frame, &f)?);
        let (mismatch, size) = hg_identity(&frame, &f);
        compat.add(mismatch);
        compat.add(size);
        let curv = frame.curvature()?;
        let b = strength_components(&frame, &f);
        for k in 0..2 {
            for l in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        components.add((b[k][l][i][j] + 0.5 * curv.r_lower(k, l, i, j)).abs());
                    }
                }
            }
        }
    }
    Ok(vec![
        Case::new("field/curvature_link", link.0, 1e-8),
        Case::new("field/curvature_link_compatibility", compat.0, 1e-8),
        Case::new("field/curvature_link_components", components.0, 1e-8),
    ])
}

/// The bundled flat-connection example solves the system; flipping the sign of `B_2`
/// breaks the Yang-Mills equation by more than 0.1.
pub fn flat_connection(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let good = fixtures::flat_connection_config(false)?;
    let bad = fixtures::flat_connection_config(true)?;
    let mut worst = Worst::default();
    let mut missed = 0;
    for _ in 0..count {
        let p = sample::point(&mut rng, 4, 2.0);
        let (frame, f) = good.local(&p, 2)?;
        worst.add(system_residuals(&frame, &f)?.max());
        let (frame, f) = bad.local(&p, 2)?;
        let ym = system_residuals(&frame, &f)?
            .norms()
            .into_iter()
            .find(|x| x.0 == "yang_mills")
            .map_or(0.0, |x| x.1);
        if ym <= 0.1 {
            missed += 1;
        }
    }
    Ok(vec![
        Case::new("field/flat_connection", worst.0, 1e-8),
        Case::count("field/flat_connection_sign_flip", missed),
    ])
}

/// The numeric variational check: on a balanced configuration every residual of the system
/// vanishes at the point and the finite-difference Euler-Lagrange gradient of `Re L` is zero
/// relative to its scale; on a plane wave the gradient in the `Ψ̄` sector vanishes.
pub fn variational(seed: u64, configs: usize) -> Result<Vec<Case>> {
    let mut residual = Worst::default();
    let mut gradient = Worst::default();
    for s in 0..configs as u64 {
        let (cfg, x0) = fixtures::balanced_gauge_config(seed.wrapping_add(s))?;
        let (frame, f) = cfg.local(&x0, 2)?;
        residual.add(system_residuals(&frame, &f)?.max());
        gradient.add(euler_lagrange(&cfg, &x0, Sectors::ALL)?.relative());
    }
    let mut rng = sample::rng(seed);
    let mut conjugate = Worst::default();
    for _ in 0..configs {
        let cfg = plane_wave(&mut rng)?.config(2.0)?;
        let p = sample::point(&mut rng, 4, 0.5);
        conjugate.add(euler_lagrange(&cfg, &p, Sectors::PSI_BAR)?.relative());
    }
    Ok(vec![
        Case::new("field/balanced_residuals", residual.0, 1e-10),
        Case::new("field/balanced_variation", gradient.0, 1e-5),
        Case::new("field/conjugate_variation", conjugate.0, 1e-5),
    ])
}

pub fn suite(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut cases = gauge_invariance(seed, count)?;
    cases.push(trace_realness(seed.wrapping_add(1), count * 10)?);
    cases.extend(conservation_identity(seed.wrapping_add(2), count)?);
    cases.extend(plane_waves(seed.wrapping_add(3), count)?);
    cases.extend(curvature_link(seed.wrapping_add(4), count)?);
    cases.extend(flat_connection(seed.wrapping_add(5), count)?);
    cases.extend(variational(seed.wrapping_add(6), 1)?);
    Ok(cases)
}
