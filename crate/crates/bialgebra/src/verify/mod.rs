//! Seeded identity batteries. Every check reports its largest defect next to the tolerance
//! it is judged against, so a report never reduces to a bare boolean.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::multivector::Multivector;

pub mod algebra;
pub mod dirac;
pub mod field;
pub mod hodge;
pub mod manifold;
pub mod spin;

/// One named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: String,
    pub max_defect: f64,
    pub tolerance: f64,
}

impl Case {
    pub fn new(id: impl Into<String>, max_defect: f64, tolerance: f64) -> Self {
        Case {
            id: id.into(),
            max_defect,
            tolerance,
        }
    }

    /// A check that counts failures of a predicate: the defect is the number of failures.
    pub fn count(id: impl Into<String>, failures: usize) -> Self {
        Case::new(id, failures as f64, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.max_defect.is_finite() && self.max_defect <= self.tolerance
    }
}

/// Running maximum that treats NaN as an infinite defect.
#[derive(Debug, Clone, Copy, Default)]
pub struct Worst(pub f64);

impl Worst {
    pub fn add(&mut self, x: f64) {
        let x = if x.is_nan() { f64::INFINITY } else { x };
        self.0 = self.0.max(x);
    }

    /// Adds `|a - b|` relative to the larger operand norm (at least one).
    pub fn add_mv(&mut self, a: &Multivector, b: &Multivector) {
        self.add(relative(a, b));
    }
}

/// `max |a - b| / max(1, |a|, |b|)` on coefficients.
pub fn relative(a: &Multivector, b: &Multivector) -> f64 {
    a.distance(b) / a.norm_max().max(b.norm_max()).max(1.0)
}

/// The suites exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Hodge,
    Spin,
    Manifold,
    Field,
    Dirac,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Algebra,
        Suite::Hodge,
        Suite::Spin,
        Suite::Manifold,
        Suite::Field,
        Suite::Dirac,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Hodge => "hodge",
            Suite::Spin => "spin",
            Suite::Manifold => "manifold",
            Suite::Field => "field",
            Suite::Dirac => "dirac",
        }
    }

    /// Sample count used when none is given.
    pub fn default_count(self) -> usize {
        match self {
            Suite::Algebra | Suite::Hodge | Suite::Spin | Suite::Dirac => 200,
            Suite::Manifold | Suite::Field => 20,
        }
    }

    /// Runs the suite and returns its cases sorted by id.
    pub fn run(self, seed: u64, count: usize) -> Result<Vec<Case>> {
        let mut cases = match self {
            Suite::Algebra => algebra::suite(seed, count)?,
            Suite::Hodge => hodge::suite(seed, count)?,
            Suite::Spin => spin::suite(seed, count)?,
            Suite::Manifold => manifold::suite(seed, count)?,
            Suite::Field => field::suite(seed, count)?,
            Suite::Dirac => dirac::suite(seed, count)?,
        };
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(cases)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`; expected one of algebra, hodge, spin, manifold, field, dirac")))
    }
}
