//! Finite-difference oracle on explicit chart submersions.
//!
//! Everything here is computed from a metric, a projection and a base frame
//! alone: frames by solving the lift conditions, brackets and Christoffel
//! symbols by central differences, curvature by nested differences.

pub mod catalog;
pub mod chart;
pub mod curvature;
pub mod extract;
pub mod linalg;

pub use catalog::{example_by_name, example_catalog, flat, hopf, hyperbolic_slice, nil3, EXAMPLE_NAMES};
pub use chart::{ChartSubmersion, LiftDefects};
pub use curvature::{
    base_ricci_fd, base_sectional_fd, christoffel_fd, frame_sectional_curvatures, riemann_fd,
    sectional_curvature_check, Riemann,
};
pub use extract::{
    bracket_table_fd, connection_oracle, extract_integrability_data, extract_jet,
    extract_with_defect, flow_step, frame_derivatives, lie_bracket_fd, GridJet,
};

/// Default finite-difference step in chart coordinates.
pub const DEFAULT_H: f64 = 1e-3;
