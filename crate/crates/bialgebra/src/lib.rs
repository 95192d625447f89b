//! Exterior and Clifford algebra of differential forms over an arbitrary nondegenerate metric.
//!
//! Multivectors carry complex coefficients in the Grassmann basis. A [`ProductTable`] holds the
//! Clifford structure constants for one metric. On top of this sit the Hodge star and scalar
//! products ([`hodge`]), the spin group ([`spin`]), symbolic coefficients ([`expr`]), covariant
//! operators on charts ([`manifold`]), a gauge field model ([`field`]) and seeded numerical
//! checks of all of it ([`verify`]).
//!
//! The guide in `book/` walks through each part; its code samples run as doctests.

pub mod blade;
pub mod decomposition;
pub mod error;
pub mod expr;
pub mod field;
pub mod hodge;
pub mod jet;
pub mod manifold;
pub mod metric;
pub mod multivector;
pub mod sample;
pub mod spin;
pub mod table;
pub mod verify;

pub use blade::{Basis, Blade};
pub use error::{Error, Result};
pub use expr::Expr;
pub use metric::Metric;
pub use multivector::Multivector;
pub use num_complex::Complex64;
pub use table::ProductTable;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/hodge.md")]
    mod hodge {}
    #[doc = include_str!("../../../book/src/spin.md")]
    mod spin {}
    #[doc = include_str!("../../../book/src/manifold.md")]
    mod manifold {}
    #[doc = include_str!("../../../book/src/field.md")]
    mod field {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
