//! The Clifford product of homogeneous forms rewritten through `∧` and `⋆`.

use crate::blade::{self, parity};
use crate::error::{Error, Result};
use crate::hodge::star;
use crate::metric::Metric;
use crate::multivector::Multivector;

/// The bilinear form `com` on 2-forms:
/// `com(e^{i1 i2}, e^{j1 j2}) = -2g^{i1j1} e^{i2 j2} - 2g^{i2j2} e^{i1 j1}
///  + 2g^{i1j2} e^{i2 j1} + 2g^{i2j1} e^{i1 j2}`.
pub fn com(u: &Multivector, v: &Multivector, metric: &Metric) -> Result<Multivector> {
    for w in [u, v] {
        if w.terms().any(|(b, _)| blade::grade(b) != 2) {
            return Err(Error::NotHomogeneous);
        }
    }
    let n = metric.dim();
    let mut out = Multivector::zero(n);
    let pair = |a: usize, b: usize| Multivector::wedge_of(n, &[a, b]);
    for (bu, cu) in u.terms() {
        let i = blade::indices(bu);
        for (bv, cv) in v.terms() {
            let j = blade::indices(bv);
            let g = |a: usize, b: usize| metric.g(a, b);
            let term = pair(i[1], j[1]) * (-2.0 * g(i[0], j[0]))
                + pair(i[0], j[0]) * (-2.0 * g(i[1], j[1]))
                + pair(i[1], j[0]) * (2.0 * g(i[0], j[1]))
                + pair(i[0], j[1]) * (2.0 * g(i[1], j[0]));
            out = out + term * (cu * cv);
        }
    }
    Ok(out)
}

/// Clifford product of homogeneous `U` and `V` assembled from wedges and Hodge stars.
///
/// Supported for every grade pair when `n <= 4`.
pub fn clifford_via_star(u: &Multivector, v: &Multivector, metric: &Metric) -> Result<Multivector> {
    let n = metric.dim();
    if n > 4 {
        return Err(Error::Invalid(format!(
            "no wedge/star decomposition tables for dimension {n}"
        )));
    }
    let ku = u.homogeneous_grade().ok_or(Error::NotHomogeneous)?;
    let kv = v.homogeneous_grade().ok_or(Error::NotHomogeneous)?;
    let s = metric.sign();
    let st = |x: &Multivector| star(x, metric);
    // ⋆U ∧ ⋆V sgn(g)
    let ss = || st(u).wedge(&st(v)) * s;
    // ⋆(U ∧ ⋆V) sgn(g)
    let inner_r = || st(&u.wedge(&st(v))) * s;
    // ⋆(⋆U ∧ V) sgn(g)
    let inner_l = || st(&st(u).wedge(v)) * s;
    let w = || u.wedge(v);

    if ku == 0 || kv == 0 {
        return Ok(w());
    }
    let out = match (n, ku, kv) {
        (2, 1, 1) | (3, 1, 1) | (4, 1, 1) | (4, 1, 2) | (4, 1, 3) => w() + inner_r(),
        (2, 1, 2) | (3, 1, 3) | (3, 3, 1) | (4, 1, 4) | (4, 4, 3) | (4, 4, 4) => ss(),
        (2, 2, 1)
        | (2, 2, 2)
        | (3, 2, 3)
        | (3, 3, 2)
        | (3, 3, 3)
        | (4, 2, 4)
        | (4, 3, 4)
        | (4, 4, 1)
        | (4, 4, 2) => -ss(),
        (3, 1, 2) => w() - inner_r(),
        (3, 2, 1) | (4, 2, 1) | (4, 3, 1) => w() - inner_l(),
        (3, 2, 2) | (4, 3, 3) => -ss() - inner_r(),
        (4, 2, 2) => w() - inner_r() + com(u, v, metric)? * 0.5,
        (4, 2, 3) => -ss() + inner_r(),
        (4, 3, 2) => ss() + inner_l(),
        (_, 1, k) => w() + inner_r() * parity(n * (k + 1)),
        _ => {
            return Err(Error::Invalid(format!(
                "no wedge/star decomposition for grades ({ku}, {kv}) in dimension {n}"
            )))
        }
    };
    Ok(out)
}
