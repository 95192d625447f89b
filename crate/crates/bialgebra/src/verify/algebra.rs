//! Products, basis conversions and the worked examples of the algebra.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{relative, Case, Worst};
use crate::blade::{self, Basis, Blade};
use crate::decomposition::{clifford_via_star, com};
use crate::error::Result;
use crate::metric::Metric;
use crate::multivector::{basis_convert, Multivector};
use crate::sample::{self, SampleRng};
use crate::table::ProductTable;

const TOL: f64 = 1e-10;

struct Ctx {
    n: usize,
    metric: Metric,
    table: ProductTable,
}

impl Ctx {
    fn new(metric: Metric) -> Result<Self> {
        let table = ProductTable::new(&metric)?;
        Ok(Ctx {
            n: metric.dim(),
            metric,
            table,
        })
    }

    fn g(&self, i: usize, j: usize) -> f64 {
        self.metric.g(i, j)
    }

    fn e(&self) -> Multivector {
        Multivector::scalar(self.n, 1.0.into())
    }

    /// Clifford product of generators in the given order.
    fn cl(&self, idx: &[usize]) -> Multivector {
        idx.iter().fold(self.e(), |acc, &i| {
            self.table.mul(&acc, &Multivector::generator(self.n, i))
        })
    }

    /// Exterior product of generators in the given order.
    fn w(&self, idx: &[usize]) -> Multivector {
        idx.iter().fold(self.e(), |acc, &i| {
            acc.wedge(&Multivector::generator(self.n, i))
        })
    }

    /// The Clifford basis element with increasing 0-based indices, read through the
    /// Clifford-basis coordinate convention.
    fn clb(&self, idx: &[usize]) -> Multivector {
        let mut coords = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        coords[idx.iter().fold(0usize, |b, &i| b | (1 << i))] = 1.0.into();
        Multivector::from_clifford_coords(&self.metric, &coords)
    }
}

fn random_metric(rng: &mut SampleRng) -> Result<Ctx> {
    let n = rng.gen_range(3..=4);
    Ctx::new(sample::metric(rng, n))
}

/// Closed-form products of basis elements over random metrics with `n = 3, 4`. The
/// Clifford-basis product `e^{13} e^{234}` needs four generators and runs on the
/// four-dimensional draws only.
pub fn worked_examples(seed: u64, metrics: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let mut worst = [Worst::default(); 5];
    for _ in 0..metrics {
        let c = random_metric(&mut rng)?;
        let g = |i, j| c.g(i, j);
        if c.n >= 4 {
            let lhs = c.table.mul(&c.clb(&[0, 2]), &c.clb(&[1, 2, 3]));
            let rhs = c.clb(&[0, 1, 3]) * -g(2, 2) + c.clb(&[0, 2, 3]) * (2.0 * g(1, 2));
            worst[0].add_mv(&lhs, &rhs);
        }
        let mut pool: Vec<usize> = (0..c.n).collect();
        pool.shuffle(&mut rng);
        let i = pool.clone();
        let e = c.e();
        let gen = |k: usize| Multivector::generator(c.n, k);
        // exterior products through Clifford products
        let two = c.cl(&i[..2]) - e.clone() * g(i[0], i[1]);
        worst[1].add_mv(&c.w(&i[..2]), &two);
        let three = c.cl(&i[..3]) - gen(i[0]) * g(i[1], i[2]) + gen(i[1]) * g(i[0], i[2])
            - gen(i[2]) * g(i[0], i[1]);
        worst[1].add_mv(&c.w(&i[..3]), &three);
        if c.n >= 4 {
            let cl2 = |a: usize, b: usize| c.cl(&[i[a], i[b]]);
            let gg = |a: usize, b: usize| g(i[a], i[b]);
            let four = c.cl(&i[..4]) - cl2(0, 1) * gg(2, 3) + cl2(0, 2) * gg(1, 3)
                - cl2(0, 3) * gg(1, 2)
                - cl2(1, 2) * gg(0, 3)
                + cl2(1, 3) * gg(0, 2)
                - cl2(2, 3) * gg(0, 1)
                + e.clone() * (gg(0, 3) * gg(1, 2) - gg(0, 2) * gg(1, 3) + gg(0, 1) * gg(2, 3));
            worst[1].add_mv(&c.w(&i[..4]), &four);
        }
        // Clifford products through exterior products
        let two = c.w(&i[..2]) + e.clone() * g(i[0], i[1]);
        worst[2].add_mv(&c.cl(&i[..2]), &two);
        let three = c.w(&i[..3]) + gen(i[0]) * g(i[1], i[2]) - gen(i[1]) * g(i[0], i[2])
            + gen(i[2]) * g(i[0], i[1]);
        worst[2].add_mv(&c.cl(&i[..3]), &three);
        if c.n >= 4 {
            let w2 = |a: usize, b: usize| c.w(&[i[a], i[b]]);
            let gg = |a: usize, b: usize| g(i[a], i[b]);
            let four = c.w(&i[..4]) + w2(0, 1) * gg(2, 3) - w2(0, 2) * gg(1, 3)
                + w2(0, 3) * gg(1, 2)
                + w2(1, 2) * gg(0, 3)
                - w2(1, 3) * gg(0, 2)
                + w2(2, 3) * gg(0, 1)
                + e.clone() * (gg(0, 3) * gg(1, 2) - gg(0, 2) * gg(1, 3) + gg(0, 1) * gg(2, 3));
            worst[2].add_mv(&c.cl(&i[..4]), &four);
        }
        // wedge of Clifford basis elements
        let lhs = c.clb(&[0, 2]).wedge(&c.clb(&[1, 2]));
        let rhs =
            c.clb(&[0, 2]) * g(1, 2) + c.clb(&[1, 2]) * g(0, 2) - e.clone() * (g(0, 2) * g(1, 2));
        worst[3].add_mv(&lhs, &rhs);
        // Clifford product of Grassmann blades
        let lhs = c.table.mul(&c.w(&[0, 2]), &c.w(&[1, 2]));
        let rhs = c.w(&[0, 1]) * -g(2, 2) + c.w(&[0, 2]) * g(1, 2) - c.w(&[1, 2]) * g(0, 2)
            + e * (g(0, 2) * g(1, 2) - g(0, 1) * g(2, 2));
        worst[4].add_mv(&lhs, &rhs);
    }
    let names = [
        "clifford_basis_product",
        "wedge_via_clifford",
        "clifford_via_wedge",
        "clifford_basis_wedge",
        "grassmann_blade_product",
    ];
    Ok(names
        .iter()
        .zip(worst)
        .map(|(name, w)| Case::new(format!("algebra/{name}"), w.0, TOL))
        .collect())
}

/// Grassmann to Clifford and back (and the reverse) on every basis blade, `n = 1..=max_n`.
pub fn basis_round_trip(seed: u64, max_n: usize, metrics_per_dim: usize) -> Result<Case> {
    let mut rng = sample::rng(seed);
    let mut worst = Worst::default();
    for n in 1..=max_n {
        for _ in 0..metrics_per_dim {
            let metric = sample::metric(&mut rng, n);
            for b in 0..(1usize << n) {
                let mut unit = vec![Complex64::new(0.0, 0.0); 1 << n];
                unit[b] = 1.0.into();
                for (from, to) in [
                    (Basis::Grassmann, Basis::Clifford),
                    (Basis::Clifford, Basis::Grassmann),
                ] {
                    let there = basis_convert(&unit, from, to, &metric);
                    let back = basis_convert(&there, to, from, &metric);
                    let u = Multivector::from_coeffs(n, unit.clone());
                    worst.add_mv(&Multivector::from_coeffs(n, back), &u);
                }
            }
        }
    }
    Ok(Case::new("algebra/basis_round_trip", worst.0, 1e-12))
}

/// Clifford basis elements are the ordered products of generators.
pub fn clifford_basis_products(seed: u64, metrics: usize) -> Result<Case> {
    let mut rng = sample::rng(seed);
    let mut worst = Worst::default();
    for _ in 0..metrics {
        let c = random_metric(&mut rng)?;
        for b in 0..(1 as Blade) << c.n {
            let idx = blade::indices(b);
            worst.add_mv(&c.clb(&idx), &c.cl(&idx));
        }
    }
    Ok(Case::new("algebra/clifford_basis_products", worst.0, TOL))
}

/// `clifford_via_star` against the table product for every grade pair in `n = 2, 3, 4`,
/// alternating the sign of `det g` and drawing a fresh metric every ten pairs.
pub fn star_decomposition(seed: u64, pairs: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let mut cases = Vec::new();
    for n in 2..=4 {
        for ku in 0..=n {
            for kv in 0..=n {
                let mut worst = Worst::default();
                let mut ctx = None;
                for s in 0..pairs {
                    if s % 10 == 0 {
                        let positive = (s / 10) % 2 == 0;
                        ctx = Some(Ctx::new(sample::metric_with_det_sign(
                            &mut rng, n, positive,
                        ))?);
                    }
                    let c = ctx.as_ref().expect("set on the first pair");
                    let u = sample::form(&mut rng, n, ku, true);
                    let v = sample::form(&mut rng, n, kv, true);
                    let direct = c.table.mul(&u, &v);
                    worst.add_mv(&clifford_via_star(&u, &v, &c.metric)?, &direct);
                }
                cases.push(Case::new(
                    format!("algebra/via_star_n{n}_{ku}x{kv}"),
                    worst.0,
                    TOL,
                ));
            }
        }
    }
    Ok(cases)
}

/// The algebra identities on `count` random draws.
pub fn invariants(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut rng = sample::rng(seed);
    let names = [
        "associativity",
        "wedge_associativity",
        "graded_anticommutativity",
        "anticommutator",
        "vector_square",
        "even_subalgebra",
        "unit",
        "star_antiautomorphism",
        "star_involution",
        "real_star_is_reversion",
        "trace_commutator",
        "trace_conjugation",
        "vector_times_form_grades",
        "grade_sum",
        "commutator_is_com",
        "jacobi",
        "exp_inverse",
        "scalar_product_hermitian",
        "scalar_product_grades",
        "large_grades_wedge_to_zero",
    ];
    let mut w = vec![Worst::default(); names.len()];
    for _ in 0..count {
        let n = rng.gen_range(1..=5);
        let c = Ctx::new(sample::metric(&mut rng, n))?;
        let t = &c.table;
        let (u, v, x) = (
            sample::multivector(&mut rng, n, true),
            sample::multivector(&mut rng, n, true),
            sample::multivector(&mut rng, n, true),
        );
        w[0].add_mv(&t.mul(&t.mul(&u, &v), &x), &t.mul(&u, &t.mul(&v, &x)));
        w[1].add_mv(&u.wedge(&v).wedge(&x), &u.wedge(&v.wedge(&x)));
        let (r, s) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        let (ur, vs) = (
            sample::form(&mut rng, n, r, true),
            sample::form(&mut rng, n, s, true),
        );
        w[2].add_mv(&ur.wedge(&vs), &(vs.wedge(&ur) * blade::parity(r * s)));
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (Multivector::generator(n, i), Multivector::generator(n, j));
                let ac = t.mul(&ei, &ej) + t.mul(&ej, &ei);
                w[3].add_mv(&ac, &(c.e() * (2.0 * c.g(i, j))));
            }
        }
        let a = sample::form(&mut rng, n, 1, false);
        let quad: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| c.g(i, j) * a.coeff(1 << i).re * a.coeff(1 << j).re)
            .sum();
        w[4].add_mv(&t.mul(&a, &a), &(c.e() * quad));
        let (ev, fv) = (even_part(&u), even_part(&v));
        w[5].add(relative(&t.mul(&ev, &fv), &even_part(&t.mul(&ev, &fv))));
        w[5].add(relative(&ev.wedge(&fv), &even_part(&ev.wedge(&fv))));
        w[6].add_mv(&t.mul(&c.e(), &u), &u);
        w[6].add_mv(&t.mul(&u, &c.e()), &u);
        w[7].add_mv(
            &t.mul(&u, &v).star_conj(),
            &t.mul(&v.star_conj(), &u.star_conj()),
        );
        w[8].add_mv(&u.star_conj().star_conj(), &u);
        let ru = sample::multivector(&mut rng, n, false);
        w[9].add_mv(&ru.star_conj(), &ru.reversion());
        w[10].add((t.mul(&u, &v) - t.mul(&v, &u)).scalar_part().norm() / u.norm_max().max(1.0));
        // an invertible factor: a 1-form with nonzero square
        let mut bvec = sample::form(&mut rng, n, 1, false);
        let mut sq = t.mul(&bvec, &bvec).scalar_part().re;
        while sq.abs() < 0.1 {
            bvec = sample::form(&mut rng, n, 1, false);
            sq = t.mul(&bvec, &bvec).scalar_part().re;
        }
        let binv = bvec.clone() * (1.0 / sq);
        let conj = t.mul_all(&[&binv, &u, &bvec]);
        w[11].add((conj.scalar_part() - u.scalar_part()).norm() / conj.norm_max().max(1.0));
        let k = rng.gen_range(0..=n);
        let uk = sample::form(&mut rng, n, k, true);
        let prod = t.mul(&a, &uk);
        let mut stray: f64 = 0.0;
        for j in 0..=n {
            if j + 1 != k && j != k + 1 {
                stray = stray.max(prod.grade_part(j).norm_max());
            }
        }
        w[12].add(stray / prod.norm_max().max(1.0));
        let total = (0..=n).fold(Multivector::zero(n), |acc, j| acc + u.grade_part(j));
        w[13].add_mv(&total, &u);
        if n >= 2 {
            let (p, q, z) = (
                sample::form(&mut rng, n, 2, false),
                sample::form(&mut rng, n, 2, false),
                sample::form(&mut rng, n, 2, false),
            );
            let comm = t.commutator(&p, &q);
            w[14].add_mv(&comm, &com(&p, &q, &c.metric)?);
            w[14].add(
                comm.terms()
                    .filter(|(b, _)| blade::grade(*b) != 2)
                    .map(|(_, x)| x.norm())
                    .fold(0.0, f64::max),
            );
            let jac = t.commutator(&p, &t.commutator(&q, &z))
                + t.commutator(&q, &t.commutator(&z, &p))
                + t.commutator(&z, &t.commutator(&p, &q));
            w[15].add(jac.norm_max() / p.norm_max().max(1.0).powi(3));
        }
        let small = u.clone() * 0.3;
        w[16].add_mv(&t.mul(&t.exp(&small)?, &t.exp(&-small)?), &c.e());
        let (uv, vu) = (
            crate::hodge::scalar_product(&u, &v, t),
            crate::hodge::scalar_product(&v, &u, t),
        );
        w[17].add((uv - vu.conj()).norm() / uv.norm().max(1.0));
        let (j1, j2) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        if j1 != j2 {
            let (p, q) = (
                sample::form(&mut rng, n, j1, true),
                sample::form(&mut rng, n, j2, true),
            );
            w[18].add(crate::hodge::scalar_product(&p, &q, t).norm());
        }
        let (r, s) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        if r + s > n {
            let (p, q) = (
                sample::form(&mut rng, n, r, true),
                sample::form(&mut rng, n, s, true),
            );
            w[19].add(p.wedge(&q).norm_max());
        }
    }
    Ok(names
        .iter()
        .zip(w)
        .map(|(name, x)| Case::new(format!("algebra/{name}"), x.0, TOL))
        .collect())
}

fn even_part(u: &Multivector) -> Multivector {
    u.map_blades(|b, c| {
        if blade::grade(b).is_multiple_of(2) {
            c
        } else {
            0.0.into()
        }
    })
}

/// Small algebras named in the text: complex numbers, quaternions, and the coincidence of
/// both bases for diagonal metrics.
pub fn named_algebras(seed: u64, count: usize) -> Result<Vec<Case>> {
    let c1 = Ctx::new(Metric::diagonal(&[-1.0])?)?;
    let e1 = Multivector::generator(1, 0);
    let complex = relative(&c1.table.mul(&e1, &e1), &-c1.e());
    let q = Ctx::new(Metric::diagonal(&[-1.0, -1.0])?)?;
    let (i, j, k) = (
        Multivector::generator(2, 0),
        Multivector::generator(2, 1),
        Multivector::blade(2, 0b11),
    );
    let m = |a: &Multivector, b: &Multivector| q.table.mul(a, b);
    let mut quat = Worst::default();
    for x in [&i, &j, &k] {
        quat.add_mv(&m(x, x), &-q.e());
    }
    quat.add_mv(&m(&i, &j), &k);
    quat.add_mv(&m(&j, &k), &i);
    quat.add_mv(&m(&k, &i), &j);
    quat.add_mv(&m(&q.table.mul(&i, &j), &k), &-q.e());
    let mut rng = sample::rng(seed);
    let mut diag = Worst::default();
    for _ in 0..count.max(1) {
        let n = rng.gen_range(1..=6);
        let d: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let metric = Metric::diagonal(&d)?;
        let u = sample::multivector(&mut rng, n, true);
        let coords = Multivector::from_coeffs(n, u.clifford_coords(&metric));
        diag.add_mv(&coords, &u);
    }
    Ok(vec![
        Case::new("algebra/complex_numbers", complex, TOL),
        Case::new("algebra/quaternions", quat.0, TOL),
        Case::new("algebra/diagonal_bases_coincide", diag.0, TOL),
    ])
}

pub fn suite(seed: u64, count: usize) -> Result<Vec<Case>> {
    let mut cases = worked_examples(seed, count)?;
    cases.push(basis_round_trip(
        seed.wrapping_add(1),
        6,
        count.div_ceil(100).max(1),
    )?);
    cases.push(clifford_basis_products(
        seed.wrapping_add(2),
        count.min(50),
    )?);
    cases.extend(star_decomposition(seed.wrapping_add(3), count)?);
    cases.extend(invariants(seed.wrapping_add(4), count)?);
    cases.extend(named_algebras(seed.wrapping_add(5), count)?);
    Ok(cases)
}
