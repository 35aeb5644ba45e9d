//! Torse-forming fields, η-Ricci / η-Yamabe solitons and the quasi-Einstein
//! taxonomy.

mod einstein;
mod identities;
mod solve;
mod torse;

pub use einstein::{einstein_classify, EinsteinCandidates, EinsteinClass, EinsteinClassReport};
pub use identities::{
    check_gradient_potential, dual_relation, fmt_form, fmt_vector, verify_concircular_identities, verify_hessian_torse_forming,
    verify_proposition_p, verify_torqued_structure, verify_yamabe_identities, DualRelation,
};
pub use solve::{solution_record, solve_eta_ricci, solve_eta_yamabe, SolitonKind, SolitonSign, SolitonSolution};
pub use torse::{classify_vector_field, FieldClass, TorseFormingDecomposition};
pub(crate) use einstein::fit_linear;
pub(crate) use solve::{finish, half, solve_pair};

use crate::symbolic::{Expr, SampleError, Verdict};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolitonError {
    #[error("field and chart dimensions differ")]
    Dimension,
    #[error("pivot failure: no component of V is nonzero on the sampled domain")]
    PivotFailure,
    #[error("not a soliton ({kind}): component {component} has residual {residual} ({verdict}, max |r| = {max_abs:e})")]
    NotASoliton {
        kind: &'static str,
        component: String,
        residual: Expr,
        verdict: Verdict,
        max_abs: f64,
        samples: usize,
        tol: f64,
    },
    #[error("lambda is not determined by the equations")]
    LambdaUndetermined,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
}
