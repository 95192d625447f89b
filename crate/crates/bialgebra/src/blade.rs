//! Basis blades as bitmasks.
//!
//! Bit `i` of a blade stands for the generator `e^{i+1}`; a blade with bits
//! `i_1 < ... < i_k` is `e^{i_1+1} ∧ ... ∧ e^{i_k+1}` in the Grassmann basis or
//! the ordered Clifford product `e^{i_1+1} ... e^{i_k+1}` in the Clifford basis.
//! Rust-side indices are 0-based; text and JSON use the 1-based labels.

use crate::error::{Error, Result};

pub type Blade = u32;

/// Which basis a coordinate vector refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Grassmann,
    Clifford,
}

pub fn grade(b: Blade) -> usize {
    b.count_ones() as usize
}

/// Bit positions of `b` in ascending order.
pub fn indices(b: Blade) -> Vec<usize> {
    bits(b).collect()
}

pub fn bits(b: Blade) -> impl Iterator<Item = usize> {
    let mut rest = b;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// All blades of grade `k` in dimension `n`, ordered lexicographically by index tuple.
pub fn blades_of_grade(n: usize, k: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(combo.iter().fold(0, |acc, &i| acc | (1 << i)));
        let Some(pos) = (0..k).rev().find(|&p| combo[p] < n - k + p) else {
            return out;
        };
        combo[pos] += 1;
        for q in pos + 1..k {
            combo[q] = combo[q - 1] + 1;
        }
    }
}

/// Sign of `e^a ∧ e^b` relative to the ascending blade `a | b`, or 0 when they overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> f64 {
    if a & b != 0 {
        return 0.0;
    }
    let swaps: u32 = bits(b).map(|j| (a >> (j + 1)).count_ones()).sum();
    parity(swaps as usize)
}

/// `(-1)^k`.
pub fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign picked up by a grade-`k` blade under reversion, `(-1)^{k(k-1)/2}`.
pub fn reversion_sign(k: usize) -> f64 {
    parity(k / 2)
}

/// Blade and sign of the ordered wedge `e^{idx[0]} ∧ ... ∧ e^{idx[k-1]}`; sign 0 on repeats.
pub fn from_indices(idx: &[usize]) -> (f64, Blade) {
    let mut blade: Blade = 0;
    let mut sign = 1.0;
    for &i in idx {
        let bit = 1 << i;
        if blade & bit != 0 {
            return (0.0, 0);
        }
        sign *= parity((blade >> (i + 1)).count_ones() as usize);
        blade |= bit;
    }
    (sign, blade)
}

/// Sign of the permutation taking `(I, I^c)` to `(1, ..., n)`.
pub fn complement_sign(n: usize, b: Blade) -> f64 {
    let full: Blade = ((1u64 << n) - 1) as Blade;
    wedge_sign(b, full & !b)
}

/// Text label of a blade: `e^1^e^3` (Grassmann) or `e^{1,3}` (Clifford); `e` for the unit.
pub fn label(b: Blade, basis: Basis) -> String {
    if b == 0 {
        return "e".to_string();
    }
    let idx: Vec<String> = bits(b).map(|i| (i + 1).to_string()).collect();
    match basis {
        Basis::Grassmann => idx
            .iter()
            .map(|i| format!("e^{i}"))
            .collect::<Vec<_>>()
            .join("^"),
        Basis::Clifford => format!("e^{{{}}}", idx.join(",")),
    }
}

/// Parses a blade label in either text form. Grassmann labels may list indices in any
/// order; the returned sign accounts for the reordering. Clifford labels must be ascending.
pub fn parse_label(s: &str, n: usize) -> Result<(Basis, f64, Blade)> {
    let s = s.trim();
    let bad = || Error::InvalidIndices(format!("cannot parse blade label {s:?}"));
    if s == "e" {
        return Ok((Basis::Grassmann, 1.0, 0));
    }
    let one_based = |t: &str| -> Result<usize> {
        let i: usize = t.trim().parse().map_err(|_| bad())?;
        if i == 0 || i > n {
            return Err(Error::InvalidIndices(format!("index {i} outside 1..={n}")));
        }
        Ok(i - 1)
    };
    if let Some(inner) = s.strip_prefix("e^{").and_then(|r| r.strip_suffix('}')) {
        let idx = inner
            .split(',')
            .map(one_based)
            .collect::<Result<Vec<_>>>()?;
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndices(format!(
                "Clifford label indices must be strictly ascending: {s:?}"
            )));
        }
        return Ok((Basis::Clifford, 1.0, from_indices(&idx).1));
    }
    let rest = s.strip_prefix("e^").ok_or_else(bad)?;
    let idx = rest
        .split("^e^")
        .map(one_based)
        .collect::<Result<Vec<_>>>()?;
    let (sign, blade) = from_indices(&idx);
    Ok((Basis::Grassmann, sign, blade))
}
