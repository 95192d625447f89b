use bialgebra::field::dirac::{self, PlaneWave};
use bialgebra::field::fixtures;
use bialgebra::field::*;
use bialgebra::manifold::{Chart, ComplexExpr, FormField};
use bialgebra::sample;
use bialgebra::table::ProductTable;
use bialgebra::{Expr, Multivector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn max_abs<'a>(m: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    m.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn warped_chart() -> Chart {
    Chart::parse(
        &[
            vec!["1 + 0.3*x2^2", "0.2*x1*x2", "0"],
            vec!["0.2*x1*x2", "2 + sin(x1)", "0.1*x3"],
            vec!["0", "0.1*x3", "1.5 + 0.2*x1*x3"],
        ],
        vec![(-1.0, 1.0); 3],
    )
    .unwrap()
}

fn lorentz_chart() -> Chart {
    Chart::parse(
        &[
            vec!["-1 - 0.1*x4^2", "0", "0", "0.05*x1"],
            vec!["0", "-1", "0", "0"],
            vec!["0", "0", "-(1 + 0.2*x2^2)", "0"],
            vec!["0.05*x1", "0", "0", "1 + 0.1*x3^2"],
        ],
        vec![(-1.0, 1.0); 4],
    )
    .unwrap()
}

fn poly(rng: &mut sample::SampleRng, n: usize) -> Expr {
    let mut s = Expr::num(rng.gen_range(-1.0..1.0));
    for k in 0..n {
        let x = Expr::var(k);
        s = s.add(&Expr::num(rng.gen_range(-1.0..1.0)).mul(&x));
        let l = rng.gen_range(0..n);
        s = s.add(
            &Expr::num(rng.gen_range(-0.5..0.5))
                .mul(&x)
                .mul(&Expr::var(l)),
        );
    }
    s.add(&Expr::num(0.3).mul(&Expr::var(0)).sin())
}

fn random_form(
    rng: &mut sample::SampleRng,
    n: usize,
    grades: &[usize],
    complex: bool,
) -> FormField {
    let mut f = FormField::zero(n);
    for b in 0..(1u32 << n) {
        if grades.contains(&(b.count_ones() as usize)) {
            let im = if complex { poly(rng, n) } else { Expr::zero() };
            f.set(b, ComplexExpr::new(poly(rng, n), im));
        }
    }
    f
}

fn random_config(seed: u64, chart: Chart) -> FieldConfig {
    let mut rng = sample::rng(seed);
    let n = chart.dim();
    let all: Vec<usize> = (0..=n).collect();
    let psi = random_form(&mut rng, n, &all, true);
    let a = (0..n)
        .map(|_| ComplexExpr::imag(poly(&mut rng, n)))
        .collect();
    let b = (0..n)
        .map(|_| random_form(&mut rng, n, &[2], false))
        .collect();
    let h = random_form(&mut rng, n, &[1], false);
    FieldConfig::new(chart, psi, a, b, h, 0.8)
        .unwrap()
        .with_couplings(1.3, 0.7)
        .unwrap()
}

fn random_gauge(seed: u64, n: usize) -> GaugeField {
    let mut rng = sample::rng(seed);
    let mut beta = random_form(&mut rng, n, &[2], false);
    for b in 0..(1u32 << n) {
        if let Some(c) = beta.coeff(b).cloned() {
            beta.set(b, c.scale(0.4));
        }
    }
    GaugeField::new(beta, poly(&mut rng, n)).unwrap()
}

fn point(rng: &mut sample::SampleRng, n: usize, w: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-w..w)).collect()
}

/// A config on Minkowski space with `H = dx^4` and spatial `B`, so the H-equations hold.
fn minkowski_config(seed: u64) -> FieldConfig {
    let mut rng = sample::rng(seed);
    let n = 4;
    let all: Vec<usize> = (0..=n).collect();
    let psi = random_form(&mut rng, n, &all, true);
    let a = (0..n)
        .map(|_| ComplexExpr::imag(poly(&mut rng, n)))
        .collect();
    let b = (0..n)
        .map(|_| {
            let mut f = FormField::zero(n);
            for s in [0b0011u32, 0b0101, 0b0110] {
                f.set(s, ComplexExpr::real(poly(&mut rng, n)));
            }
            f
        })
        .collect();
    FieldConfig::new(
        fixtures::minkowski_chart(2.0),
        psi,
        a,
        b,
        fixtures::time_form(),
        0.6,
    )
    .unwrap()
}

#[test]
fn zero_fields_on_flat_space_have_zero_residuals() {
    let cfg =
        FieldConfig::vacuum(fixtures::minkowski_chart(1.0), fixtures::time_form(), 1.0).unwrap();
    let (frame, f) = cfg.local(&[0.1, 0.2, -0.3, 0.4], 2).unwrap();
    let res = system_residuals(&frame, &f).unwrap();
    assert_eq!(res.max(), 0.0);
    assert_eq!(lagrangian(&frame, &f), Complex64::new(0.0, 0.0));
}

#[test]
fn constant_psi_without_mass_solves_the_main_equation() {
    let mut cfg =
        FieldConfig::vacuum(fixtures::minkowski_chart(1.0), fixtures::time_form(), 0.0).unwrap();
    let mut rng = sample::rng(3);
    cfg.psi = FormField::constant(&sample::multivector(&mut rng, 4, true));
    let (frame, f) = cfg.local(&[0.0; 4], 1).unwrap();
    assert!(main_residual(&frame, &f).norm_max() < 1e-15);
}

#[test]
fn h_defects_for_the_time_form() {
    let cfg =
        FieldConfig::vacuum(fixtures::minkowski_chart(1.0), fixtures::time_form(), 1.0).unwrap();
    let (frame, f) = cfg.local(&[0.3, 0.0, 0.1, 0.2], 1).unwrap();
    assert!(h_defect_norm(&frame, &f) < 1e-15);
    let mut bad = cfg.clone();
    let mut h = FormField::zero(4);
    h.set(0b1000, ComplexExpr::constant(2.0.into()));
    bad.h = h;
    let (frame, f) = bad.local(&[0.3, 0.0, 0.1, 0.2], 1).unwrap();
    let (sq, _) = h_defects(&frame, &f);
    assert!((sq.scalar_part().re - 3.0).abs() < 1e-14);
}

#[test]
fn gauge_transform_with_identity_changes_nothing() {
    let cfg = random_config(1, warped_chart());
    let p = [0.1, -0.2, 0.3];
    let frame = cfg.chart.frame(&p, 3).unwrap();
    let f = cfg.fields_at(&frame, 2).unwrap();
    let g = GaugeField::new(FormField::zero(3), Expr::zero()).unwrap();
    let (u, v) = g.jets(&frame, 3).unwrap();
    let t = gauge_transform(&frame, &f, &u, &v).unwrap();
    assert!(main_residual(&frame, &t).distance(&main_residual(&frame, &f)) < 1e-14);
    assert!((lagrangian(&frame, &t) - lagrangian(&frame, &f)).norm() < 1e-12);
}

fn check_gauge_invariance(cfg: &FieldConfig, gauge_seed: u64, p: &[f64]) {
    let n = cfg.dim();
    let frame = cfg.chart.frame(p, 3).unwrap();
    let table = ProductTable::new(&frame.metric()).unwrap();
    let f = cfg.fields_at(&frame, 2).unwrap();
    let (u, v) = random_gauge(gauge_seed, n).jets(&frame, 3).unwrap();
    let t = gauge_transform(&frame, &f, &u, &v).unwrap();
    let uv = u.value() * v.value();
    let expected = table.mul(&main_residual(&frame, &f), &uv);
    let got = main_residual(&frame, &t);
    let scale = 1.0 + expected.norm_max();
    assert!(
        got.distance(&expected) < 1e-9 * scale,
        "main: {got} vs {expected}"
    );
    for (name, l) in [
        ("L1", lagrangian_l1 as fn(&_, &_) -> Complex64),
        ("L1_h", lagrangian_l1_h),
    ] {
        let (a, b) = (l(&frame, &f), l(&frame, &t));
        assert!(
            (a - b).norm() < 1e-9 * (1.0 + a.norm()),
            "{name}: {a} vs {b}"
        );
    }
    // G + D/2 is the gauge-covariant strength; G alone is covariant only where D = 0
    let (s, st) = (field_strengths(&frame, &f), field_strengths(&frame, &t));
    let curv = frame.curvature().unwrap();
    let uinv = u.value().star_conj();
    for i in 0..n {
        for j in 0..n {
            assert!((s.f(i, j).value() - st.f(i, j).value()).norm() < 1e-10);
            let half_d = curv.d_form(i, j) * 0.5;
            let g = table.mul_all(&[&uinv, &(s.g(i, j).value() + half_d.clone()), &u.value()]);
            let gt = st.g(i, j).value() + half_d;
            assert!(gt.distance(&g) < 1e-9 * (1.0 + g.norm_max()));
        }
    }
    let (sq, e) = h_defects(&frame, &f);
    let (sqt, et) = h_defects(&frame, &t);
    assert!(sq.distance(&sqt) < 1e-9 * (1.0 + sq.norm_max()));
    for k in 0..n {
        let expected = table.mul_all(&[&uinv, &e[k].value(), &u.value()]);
        assert!(et[k].value().distance(&expected) < 1e-9 * (1.0 + expected.norm_max()));
    }
}

fn lagrangians_before_and_after(
    cfg: &FieldConfig,
    gauge_seed: u64,
    p: &[f64],
) -> Vec<(Complex64, Complex64)> {
    let frame = cfg.chart.frame(p, 3).unwrap();
    let f = cfg.fields_at(&frame, 2).unwrap();
    let (u, v) = random_gauge(gauge_seed, cfg.dim()).jets(&frame, 3).unwrap();
    let t = gauge_transform(&frame, &f, &u, &v).unwrap();
    [
        lagrangian_l1 as fn(&_, &_) -> Complex64,
        lagrangian_l0,
        lagrangian,
    ]
    .iter()
    .map(|l| (l(&frame, &f), l(&frame, &t)))
    .collect()
}

#[test]
fn gauge_invariance_on_curved_charts() {
    let mut rng = sample::rng(11);
    for s in 0..4 {
        let p = point(&mut rng, 3, 0.6);
        check_gauge_invariance(&random_config(100 + s, warped_chart()), 200 + s, &p);
        let p = point(&mut rng, 4, 0.6);
        check_gauge_invariance(&random_config(300 + s, lorentz_chart()), 400 + s, &p);
    }
}

#[test]
fn lagrangians_are_gauge_invariant_on_flat_charts() {
    let mut rng = sample::rng(15);
    for s in 0..4 {
        let cfg = random_config(500 + s, fixtures::minkowski_chart(1.0));
        let p = point(&mut rng, 4, 0.6);
        check_gauge_invariance(&cfg, 600 + s, &p);
        for (a, b) in lagrangians_before_and_after(&cfg, 600 + s, &p) {
            assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()), "{a} vs {b}");
        }
    }
}

/// Off flat charts `G' = U^{-1} G U + U^{-1} [Υ_i, Υ_j] U`, so `L0` changes.
#[test]
fn strength_lagrangian_is_not_invariant_on_curved_charts() {
    let cfg = random_config(700, lorentz_chart());
    let values = lagrangians_before_and_after(&cfg, 701, &[0.2, -0.3, 0.1, 0.4]);
    let (a, b) = values[1];
    assert!((a - b).norm() > 1e-6 * (1.0 + a.norm()), "{a} vs {b}");
}

#[test]
fn gauge_transform_rejects_bad_inputs() {
    let cfg = random_config(5, warped_chart());
    let p = [0.1, 0.1, 0.1];
    let frame = cfg.chart.frame(&p, 3).unwrap();
    let f = cfg.fields_at(&frame, 2).unwrap();
    let (u, v) = random_gauge(6, 3).jets(&frame, 3).unwrap();
    assert!(gauge_transform(&frame, &f, &u, &v.scale_c(2.0.into())).is_err());
    assert!(gauge_transform(&frame, &f, &u.scale(2.0.into()), &v).is_err());
    assert!(gauge_transform(&frame, &f, &u.truncate(2), &v).is_err());
    let mut beta = FormField::zero(3);
    beta.set(0b001, ComplexExpr::constant(1.0.into()));
    assert!(GaugeField::new(beta, Expr::zero()).is_err());
}

#[test]
fn l1_trace_form_agrees_when_h_solves_its_equation() {
    let cfg = minkowski_config(21);
    let mut rng = sample::rng(22);
    for _ in 0..5 {
        let (frame, f) = cfg.local(&point(&mut rng, 4, 1.0), 2).unwrap();
        assert!(h_defect_norm(&frame, &f) < 1e-14);
        let (l1, l1h) = (lagrangian_l1(&frame, &f), lagrangian_l1_h(&frame, &f));
        assert!(
            (l1 - l1h).norm() < 1e-10 * (1.0 + l1.norm()),
            "{l1} vs {l1h}"
        );
        assert!(l1.im.abs() < 1e-10 * (1.0 + l1.norm()));
        let j = current(&frame, &f);
        assert!(j
            .iter()
            .all(|x| x.value().im.abs() < 1e-10 * (1.0 + x.value().norm())));
    }
}

#[test]
fn conservation_identity_for_arbitrary_psi() {
    let mut rng = sample::rng(31);
    for s in 0..5 {
        let cfg = minkowski_config(40 + s);
        let (frame, f) = cfg.local(&point(&mut rng, 4, 1.0), 2).unwrap();
        let c = conservation(&frame, &f, 1e-10).unwrap();
        assert!(c.defect() < 1e-7 * (1.0 + c.divergence.norm()), "{c:?}");
        assert!(c.current_imag < 1e-10);
        assert!(c.divergence.norm() > 1e-3, "identity should be nontrivial");
    }
}

#[test]
fn conservation_needs_the_h_equation() {
    let cfg = random_config(7, warped_chart());
    let (frame, f) = cfg.local(&[0.1, 0.2, 0.3], 2).unwrap();
    assert!(conservation(&frame, &f, 1e-8).is_err());
}

#[test]
fn plane_wave_solves_main_equation_and_conserves_current() {
    let m = 0.8;
    let k = [0.3, -0.5, 0.2];
    let e0 = (m * m + k.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let wave = PlaneWave::new([k[0], k[1], k[2], e0], m).unwrap();
    let cfg = wave.config(2.0).unwrap();
    let mut rng = sample::rng(5);
    for _ in 0..10 {
        let (frame, f) = cfg.local(&point(&mut rng, 4, 1.5), 2).unwrap();
        assert!(main_residual(&frame, &f).norm_max() < 1e-12);
        let c = conservation(&frame, &f, 1e-12).unwrap();
        assert!(c.divergence.norm() < 1e-7);
        assert!(c.defect() < 1e-7);
    }
}

#[test]
fn plane_wave_rejects_off_shell_momentum() {
    assert!(PlaneWave::new([0.1, 0.0, 0.0, 1.0], 1.0).is_err());
}

#[test]
fn gamma_matrices_generate_the_clifford_algebra() {
    let g = dirac::gamma_matrices();
    let eta = [-1.0, -1.0, -1.0, 1.0];
    for k in 0..4 {
        for l in 0..4 {
            let ac = g[k] * g[l] + g[l] * g[k];
            let expected = dirac::CMatrix4::identity()
                * Complex64::from(if k == l { 2.0 * eta[k] } else { 0.0 });
            assert_eq!(ac, expected);
        }
    }
    assert_eq!(
        dirac::rep_map(&Multivector::scalar(4, 1.0.into())).unwrap(),
        dirac::CMatrix4::identity()
    );
}

#[test]
fn rep_map_is_a_homomorphism_with_an_inverse() {
    let table = ProductTable::new(&bialgebra::Metric::minkowski()).unwrap();
    let mut rng = sample::rng(8);
    for _ in 0..50 {
        let u = sample::multivector(&mut rng, 4, true);
        let v = sample::multivector(&mut rng, 4, true);
        let lhs = dirac::rep_map(&table.mul(&u, &v)).unwrap();
        let rhs = dirac::rep_map(&u).unwrap() * dirac::rep_map(&v).unwrap();
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
        let back = dirac::rep_inverse(&dirac::rep_map(&u).unwrap()).unwrap();
        assert!(back.distance(&u) < 1e-12);
    }
}

#[test]
fn column_embedded_main_equation_is_the_dirac_equation() {
    let chart = fixtures::minkowski_chart(2.0);
    let mut rng = sample::rng(9);
    for _ in 0..5 {
        let p = point(&mut rng, 4, 1.0);
        let frame = chart.frame(&p, 2).unwrap();
        let theta: [_; 4] = std::array::from_fn(|_| {
            ComplexExpr::new(poly(&mut rng, 4), poly(&mut rng, 4))
                .jet(frame.space(), &p, 2)
                .unwrap()
        });
        let a: Vec<_> = (0..4)
            .map(|_| {
                ComplexExpr::imag(poly(&mut rng, 4))
                    .jet(frame.space(), &p, 2)
                    .unwrap()
            })
            .collect();
        let m = rng.gen_range(0.0..2.0);
        let psi = dirac::embed_spinor(&theta).unwrap();
        let zero = bialgebra::manifold::JetForm::zero(frame.space(), 4, 2);
        let f = LocalFields {
            psi,
            psi_bar: None,
            a: a.clone(),
            b: vec![zero.clone(); 4],
            h: zero,
            m,
            c1: 1.0,
            c2: 1.0,
        };
        let matrix = dirac::rep_map(&main_residual(&frame, &f)).unwrap();
        let column = dirac::dirac_residual(&theta, &a, m).unwrap();
        let expected = dirac::column_embed(&column);
        assert!(
            max_abs(&(matrix - expected)) < 1e-12 * (1.0 + max_abs(&column)),
            "{matrix} vs {expected}"
        );
    }
}

#[test]
fn sphere_curvature_link_construction() {
    for p in [[1.0, 0.3], [0.6, -2.0], [2.2, 1.1]] {
        let cfg = fixtures::sphere_link_config(&p).unwrap();
        let (frame, f) = cfg.local(&p, 2).unwrap();
        assert!(curvature_link_defect(&frame, &f).unwrap() < 1e-8);
        assert!(h_defect_norm(&frame, &f) < 1e-12);
        let (mismatch, compat) = hg_identity(&frame, &f);
        assert!(mismatch < 1e-10);
        assert!(compat < 1e-8, "{compat}");
        let curv = frame.curvature().unwrap();
        let b = strength_components(&frame, &f);
        for k in 0..2 {
            for l in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((b[k][l][i][j] + 0.5 * curv.r_lower(k, l, i, j)).abs() < 1e-9);
                    }
                }
            }
        }
    }
}

#[test]
fn hg_identity_holds_for_arbitrary_h_and_b() {
    let mut rng = sample::rng(12);
    for s in 0..3 {
        let cfg = random_config(60 + s, lorentz_chart());
        let (frame, f) = cfg.local(&point(&mut rng, 4, 0.5), 3).unwrap();
        let (mismatch, size) = hg_identity(&frame, &f);
        assert!(mismatch < 1e-9 * (1.0 + size), "{mismatch} at size {size}");
        assert!(size > 1e-3);
    }
}

#[test]
fn balanced_configuration_solves_the_system_at_its_point() {
    for seed in 0..3 {
        let (cfg, x0) = fixtures::balanced_gauge_config(seed).unwrap();
        let (frame, f) = cfg.local(&x0, 2).unwrap();
        let res = system_residuals(&frame, &f).unwrap();
        assert!(res.max() < 1e-10, "{:?}", res.norms());
        let report = euler_lagrange(&cfg, &x0, Sectors::ALL).unwrap();
        assert!(report.relative() < 1e-5, "{:?}", report);
        assert!(report.scale > 1e-2);
    }
}

#[test]
fn variation_detects_an_unbalanced_configuration() {
    let (mut cfg, x0) = fixtures::balanced_gauge_config(4).unwrap();
    cfg.b[1] = cfg.b[0].clone();
    let report = euler_lagrange(&cfg, &x0, Sectors::GAUGE).unwrap();
    assert!(report.relative() > 1e-3);
}

#[test]
fn variation_in_the_conjugate_sector_gives_the_main_equation() {
    let m = 0.5;
    let wave = PlaneWave::new([0.2, 0.1, -0.3, (m * m + 0.14f64).sqrt()], m).unwrap();
    let cfg = wave.config(2.0).unwrap();
    let report = euler_lagrange(&cfg, &[0.2, -0.1, 0.3, 0.4], Sectors::PSI_BAR).unwrap();
    assert!(report.relative() < 1e-5, "{report:?}");
    let mut off = cfg.clone();
    off.m = 0.9;
    let report = euler_lagrange(&off, &[0.2, -0.1, 0.3, 0.4], Sectors::PSI_BAR).unwrap();
    assert!(report.relative() > 1e-2);
}

/// The variation in `a` gives `4 c1 ∂_k F^{kj} + 2 Im j^j` with `a = i α`, `F = dα`,
/// which differs from the printed Maxwell equation by the factor `-1/(2 c1)` in front of
/// the source. On a plane wave with `a = 0` the two disagree.
#[test]
fn maxwell_source_normalization() {
    let m = 0.5;
    let wave = PlaneWave::new([0.2, 0.1, -0.3, (m * m + 0.14f64).sqrt()], m).unwrap();
    let cfg = wave.config(2.0).unwrap();
    let x = [0.2, -0.1, 0.3, 0.4];
    let (frame, f) = cfg.local(&x, 2).unwrap();
    let res = system_residuals(&frame, &f).unwrap();
    let j = current(&frame, &f);
    let report = euler_lagrange(
        &cfg,
        &x,
        Sectors {
            psi_bar: false,
            a: true,
            b: false,
        },
    )
    .unwrap();
    for k in 0..4 {
        let el = report.get(Component::A { k }).unwrap();
        assert!(
            (el - 2.0 * j[k].value().re).abs() < 1e-6,
            "{el} vs {}",
            j[k].value().re
        );
        assert!((res.maxwell[k] + Complex64::new(0.0, j[k].value().re) / f.c1).norm() < 1e-10);
    }
}

#[test]
fn flat_connection_example_and_sign_flip() {
    let good = fixtures::flat_connection_config(false).unwrap();
    let bad = fixtures::flat_connection_config(true).unwrap();
    let mut rng = sample::rng(13);
    for _ in 0..5 {
        let p = point(&mut rng, 4, 2.0);
        let (frame, f) = good.local(&p, 2).unwrap();
        let res = system_residuals(&frame, &f).unwrap();
        assert!(res.max() < 1e-8, "{:?}", res.norms());
        let (frame, f) = bad.local(&p, 2).unwrap();
        let res = system_residuals(&frame, &f).unwrap();
        let ym = res.norms().iter().find(|x| x.0 == "yang_mills").unwrap().1;
        assert!(ym > 0.1, "{ym}");
    }
}

#[test]
fn config_json_round_trip() {
    let cfg = fixtures::flat_connection_config(false).unwrap();
    let json = serde_json::to_string(&cfg.to_json()).unwrap();
    let back = FieldConfig::from_json_str(&json).unwrap();
    let p = [0.1, 0.2, 0.3, 0.4];
    let (f1, l1) = cfg.local(&p, 2).unwrap();
    let (f2, l2) = back.local(&p, 2).unwrap();
    assert_eq!(lagrangian(&f1, &l1), lagrangian(&f2, &l2));
    let err = FieldConfig::from_json_str(&json.replace(
        "\"b\":[",
        "\"b\":[{\"basis\":\"grassmann\",\"terms\":[{\"indices\":[1],\"re\":\"1\"}]},",
    ));
    assert!(err.is_err());
}

#[test]
fn projections_split_the_source() {
    let mut rng = sample::rng(14);
    for _ in 0..20 {
        let j = sample::multivector(&mut rng, 4, true);
        let (p0, p2) = projections(&j);
        assert_eq!(p0, Complex64::new(0.0, j.scalar_part().im));
        assert_eq!(p2.homogeneous_grade(), Some(2));
        for (b, c) in p2.terms() {
            assert_eq!(c, Complex64::from(j.coeff(b).re));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_traces_are_real(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = sample::rng(seed);
        let metric = sample::metric(&mut rng, n);
        let table = ProductTable::new(&metric).unwrap();
        let c = sample::multivector(&mut rng, n, true);
        let h = sample::form(&mut rng, n, 1, false);
        let sum = table.mul(&h, &(c.clone() + c.star_conj())).scalar_part();
        let diff = table.mul(&h, &(c.clone() - c.star_conj())).scalar_part() * Complex64::i();
        prop_assert!(sum.im.abs() < 1e-10 * (1.0 + sum.norm()));
        prop_assert!(diff.im.abs() < 1e-10 * (1.0 + diff.norm()));
    }
}

fn assert_covariant(
    cfg: &FieldConfig,
    change: &bialgebra::manifold::CoordinateChange,
    domain: Vec<(f64, f64)>,
    ys: &[Vec<f64>],
) {
    let transformed = transform_config(cfg, change, domain).unwrap();
    for y in ys {
        let report = covariance_check(cfg, &transformed, change, y).unwrap();
        assert!(
            report.max_mismatch() < 1e-8 * (1.0 + report.scale),
            "{report:?}"
        );
        assert!(report.scale > 1e-3);
    }
}

#[test]
fn system_is_covariant_under_coordinate_changes() {
    use bialgebra::manifold::CoordinateChange;
    let cfg = random_config(800, warped_chart());
    let change =
        CoordinateChange::parse(&["x1 + 0.1*x2^2", "x2 + 0.05*sin(x3)", "x3 + 0.1*x1*x2"]).unwrap();
    let mut rng = sample::rng(801);
    let ys: Vec<Vec<f64>> = (0..3).map(|_| point(&mut rng, 3, 0.5)).collect();
    assert_covariant(&cfg, &change, vec![(-0.6, 0.6); 3], &ys);

    let cfg = random_config(802, lorentz_chart());
    let change =
        CoordinateChange::parse(&["x1 + 0.1*x4*x2", "x2", "x3 - 0.05*x1^2", "x4 + 0.1*x3"])
            .unwrap();
    let ys: Vec<Vec<f64>> = (0..3).map(|_| point(&mut rng, 4, 0.5)).collect();
    assert_covariant(&cfg, &change, vec![(-0.6, 0.6); 4], &ys);
}

#[test]
fn identity_change_reproduces_residuals_exactly() {
    use bialgebra::manifold::CoordinateChange;
    let cfg = random_config(803, warped_chart());
    let change = CoordinateChange::parse(&["x1", "x2", "x3"]).unwrap();
    let transformed = transform_config(&cfg, &change, vec![(-1.0, 1.0); 3]).unwrap();
    let report = covariance_check(&cfg, &transformed, &change, &[0.1, 0.2, 0.3]).unwrap();
    assert!(
        report.max_mismatch() < 1e-13 * (1.0 + report.scale),
        "{report:?}"
    );
}

#[test]
fn spinor_transformation_law_on_minkowski_space() {
    let table = ProductTable::new(&bialgebra::Metric::minkowski()).unwrap();
    let mut rng = sample::rng(804);
    for s in 0..4 {
        let cfg = minkowski_config(810 + s);
        let f = sample::spin_element(&mut rng, &table, 0.6);
        let y = point(&mut rng, 4, 0.3);
        let r = spinor_covariance_check(&cfg, &f, vec![(-0.5, 0.5); 4], &y).unwrap();
        assert!(r.form_law < 1e-9, "{r:?}");
        assert!(r.spinor_law < 1e-9 * (1.0 + r.residual), "{r:?}");
        assert!(r.residual > 1e-3);
    }
    let m = 0.7;
    let wave = PlaneWave::new([0.1, 0.4, -0.2, (m * m + 0.21f64).sqrt()], m).unwrap();
    let f = sample::spin_element(&mut rng, &table, 0.6);
    let r = spinor_covariance_check(
        &wave.config(3.0).unwrap(),
        &f,
        vec![(-0.5, 0.5); 4],
        &[0.1, 0.2, 0.0, -0.1],
    )
    .unwrap();
    assert!(r.residual < 1e-11, "{r:?}");
}
