//! Hypersurfaces: induced geometry, ambient field splitting, the Gauss
//! equation and soliton identities on submanifolds and sphere hypersurfaces.

mod gauss;
mod immersion;
mod sphere;
mod submanifold;
mod umbilical;

pub use gauss::{certify_constant_curvature, verify_gauss_equation};
pub use immersion::{induce_geometry, split_ambient_field, AmbientSplit, Immersion, InducedGeometry};
pub use sphere::{sphere_hypersurface_analysis, SphereChain, SphereReport};
pub use submanifold::{solve_submanifold_soliton, SubmanifoldReport};
pub use umbilical::{umbilical_classify, verify_quasi_umbilical_proposition, UmbilicClass, UmbilicalCandidates, UmbilicalReport};

use crate::riemann::GeometryError;
use crate::soliton::SolitonError;
use crate::symbolic::SampleError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HypersurfaceError {
    #[error("codimension must be 1: source dimension {source_dim}, ambient dimension {ambient_dim}")]
    Codimension { source_dim: usize, ambient_dim: usize },
    #[error("immersion has {found} components, ambient dimension is {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("immersion uses '{0}', which is not declared on the source chart")]
    UnknownSymbol(String),
    #[error("Jacobian is rank deficient somewhere on the source domain")]
    RankDeficient,
    #[error("normal is null or changes causal type: g(n, n) = {0}")]
    NullNormal(String),
    #[error("image leaves the ambient chart: {0}")]
    ChainConstraint(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Soliton(#[from] SolitonError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}
