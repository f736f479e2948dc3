use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: String,
        found: String,
    },

    /// `location` names the offending entry with 1-based indices, e.g. `sigma[2][1]`.
    #[error("antisymmetry violated at {location}: |x_ij + x_ji| = {magnitude:e}")]
    AntisymmetryViolation { location: String, magnitude: f64 },

    #[error("matrix is not symmetric at {location}: |x_ij - x_ji| = {magnitude:e}")]
    NotSymmetric { location: String, magnitude: f64 },

    #[error("data is not in adapted form: {detail}")]
    NotAdapted { detail: String },

    #[error("kappa_1 = {value:e} is too close to zero")]
    DegenerateKappa { value: f64 },

    #[error("matrix is not skew-symmetric (defect {defect:e})")]
    NotSkew { defect: f64 },

    #[error("projection differential is rank deficient at {point:?}")]
    RankDeficient { point: Vec<f64> },

    #[error("point {point:?} leaves the chart domain in coordinate {coordinate}")]
    OutOfDomain { point: Vec<f64>, coordinate: usize },

    #[error("metric is singular at {point:?}")]
    SingularMetric { point: Vec<f64> },

    #[error("unknown example {0:?}")]
    UnknownExample(String),
}

impl GeometryError {
    pub(crate) fn dims(what: &str, expected: impl ToString, found: impl ToString) -> Self {
        GeometryError::DimensionMismatch {
            what: what.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            GeometryError::RankDeficient { .. }
                | GeometryError::OutOfDomain { .. }
                | GeometryError::SingularMetric { .. }
        )
    }
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
