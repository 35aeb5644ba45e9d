use crate::symbolic::Expr;

use super::{Metric, Tensor2, VectorField};

/// `T(E_a, E_b)` for a list of frame fields.
pub fn tensor_on_frame(t: &Tensor2, frame: &[VectorField]) -> Vec<Vec<Expr>> {
    frame
        .iter()
        .map(|ea| frame.iter().map(|eb| t.apply(ea, eb)).collect())
        .collect()
}

/// Gram matrix `g(E_a, E_b)`.
pub fn gram(metric: &Metric, frame: &[VectorField]) -> Vec<Vec<Expr>> {
    tensor_on_frame(metric.g(), frame)
}

/// Components of `v` in an orthonormal frame: `v^a = g(v, E_a) / g(E_a, E_a)`.
pub fn frame_components(metric: &Metric, v: &VectorField, frame: &[VectorField]) -> Vec<Expr> {
    frame
        .iter()
        .map(|e| metric.inner(v, e) / metric.norm_sq(e))
        .collect()
}
