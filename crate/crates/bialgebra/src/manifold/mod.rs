//! Forms on a coordinate patch: charts, jet-valued local geometry and the operators
//! `Υ_k`, `d`, `δ`, `Υ`, `Δ`, curvature and coordinate changes.

mod change;
mod chart;
mod form_field;
mod frame;
mod jetform;
mod tensor;

pub use change::CoordinateChange;
pub use chart::{Chart, ChartJson};
pub use form_field::{ComplexExpr, FieldTermJson, FormField, FormFieldJson};
pub use frame::{Curvature, Frame};
pub use jetform::JetForm;
pub use tensor::{gradient, nabla, Slot, TensorJet};
