//! Charts, metrics, tensor fields and curvature.

mod chart;
mod checks;
mod fields;
mod frame;
mod geometry;
mod metric;

pub use chart::Chart;
pub use checks::verify_curvature_identities;
pub use fields::{OneForm, ScalarField, Tensor2, VectorField};
pub use frame::{frame_components, gram, tensor_on_frame};
pub use geometry::{christoffel, lie_bracket, Array4, Christoffel, CurvatureBundle, Geometry};
pub use metric::{determinant, inverse, Metric, Signature};

use crate::symbolic::SampleError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid chart: {0}")]
    Chart(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("metric not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("metric is degenerate: det = {0} vanishes somewhere on the domain")]
    Degenerate(String),
    #[error("metric signature changes across the domain")]
    SignatureVaries,
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
}
