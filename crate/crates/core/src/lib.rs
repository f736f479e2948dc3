//! Geometry of Riemannian submersions with one-dimensional fibres, computed
//! from the integrability data of an adapted orthonormal frame.
//!
//! Indices are 0-based in code; error messages and file formats use 1-based
//! indices, with `n + 1` naming the vertical direction.

pub mod biharmonic;
pub mod connection;
pub mod data;
pub mod error;
pub mod framealg;
pub mod numgeom;
pub mod report;
pub mod scalar;

pub use biharmonic::{
    bitension_residual, e1_identity_residual, eek_identity_residual, fiber_constancy_report,
    key_identity_residual, simplified_residuals, tension, BitensionResult, FiberConstancy,
    SimplifiedResiduals,
};
pub use connection::{
    adapted_curvature_relations, bracket_table, compute_p, curvature_residuals, nabla_coeffs,
    AdaptedRelations, ConnectionCoeffs, CurvatureResiduals, NablaTable,
};
pub use data::{BaseRicci, IntegrabilityData, IntegrabilityJet};
pub use error::{GeometryError, Result};
pub use framealg::{
    adapt_frame_data, householder_reflector, normalize_kappa, skew_tridiagonalize,
    OrthogonalReduction,
};
pub use report::{ReportMetadata, ResidualFamily, ResidualReport, Verdict};
pub use scalar::{Exact, RealScalar, Scalar};

pub type IntegrabilityData64 = IntegrabilityData<f64>;
pub type IntegrabilityData32 = IntegrabilityData<f32>;
pub type ExactIntegrabilityData = IntegrabilityData<Exact>;
pub type IntegrabilityJet64 = IntegrabilityJet<f64>;
pub type IntegrabilityJet32 = IntegrabilityJet<f32>;
pub type ExactIntegrabilityJet = IntegrabilityJet<Exact>;
pub type BaseRicci64 = BaseRicci<f64>;
pub type ExactBaseRicci = BaseRicci<Exact>;
pub type OrthogonalReduction64 = OrthogonalReduction<f64>;
