//! The coupled spinor, gauge and `H` field system on a chart.

mod config;
mod covariance;
pub mod dirac;
mod equations;
pub mod fixtures;
mod gauge;
mod variational;

pub use config::{FieldConfig, FieldConfigJson, ScalarJson};
pub use covariance::{
    covariance_check, pull_multivector, spinor_covariance_check, transform_config,
    CovarianceReport, SpinorCovariance,
};
pub use equations::{
    c_form, c_star_form, conservation, current, curvature_link_defect, field_strengths,
    h_defect_norm, h_defects, hg_identity, lagrangian, lagrangian_l0, lagrangian_l1,
    lagrangian_l1_h, main_form, main_residual, projections, source_forms, strength_components,
    system_residuals, Conservation, LocalFields, Strengths, SystemResiduals,
};
pub use gauge::{gauge_transform, GaugeField};
pub use variational::{euler_lagrange, Component, Sectors, VariationalReport};
