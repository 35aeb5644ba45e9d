use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::symbolic::Expr;

use super::{Chart, GeometryError, OneForm, Tensor2, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Signature {
    Riemannian,
    Lorentzian,
    General { positive: usize, negative: usize },
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Riemannian => f.write_str("riemannian"),
            Signature::Lorentzian => f.write_str("lorentzian"),
            Signature::General { positive, negative } => write!(f, "general({positive},{negative})"),
        }
    }
}

/// Validated metric with exact inverse.
#[derive(Clone, Debug)]
pub struct Metric {
    chart: Arc<Chart>,
    g: Tensor2,
    inv: Tensor2,
    det: Expr,
    signature: Signature,
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    match n {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = Expr::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let c = &m[0][j] * &determinant(&minor(m, 0, j));
                acc = if j % 2 == 0 { acc + c } else { acc - c };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<Expr>], r: usize, c: usize) -> Vec<Vec<Expr>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != c)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

fn is_diagonal(m: &[Vec<Expr>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, e)| i == j || e.is_zero()))
}

/// Exact inverse by adjugate over determinant.
pub fn inverse(m: &[Vec<Expr>], det: &Expr) -> Vec<Vec<Expr>> {
    let n = m.len();
    if is_diagonal(m) {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { m[i][i].recip() } else { Expr::zero() }).collect())
            .collect();
    }
    let dinv = det.recip();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = determinant(&minor(m, j, i));
                    let c = if (i + j) % 2 == 0 { c } else { -c };
                    c * &dinv
                })
                .collect()
        })
        .collect()
}

impl Metric {
    pub fn new(chart: Arc<Chart>, g: Tensor2) -> Result<Self, GeometryError> {
        let n = chart.dim();
        if g.dim() != n || g.0.iter().any(|r| r.len() != n) {
            return Err(GeometryError::Dimension { expected: n, found: g.dim() });
        }
        for i in 0..n {
            for j in 0..i {
                if g.0[i][j] != g.0[j][i] {
                    return Err(GeometryError::NotSymmetric { i, j });
                }
            }
        }
        let det = determinant(&g.0);
        if !chart.domain().nonvanishing(&det)? {
            return Err(GeometryError::Degenerate(det.to_string()));
        }
        let signature = signature_of(&chart, &g)?;
        let inv = Tensor2(inverse(&g.0, &det));
        Ok(Metric {
            chart,
            g,
            inv,
            det,
            signature,
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn g(&self) -> &Tensor2 {
        &self.g
    }

    pub fn inv(&self) -> &Tensor2 {
        &self.inv
    }

    pub fn det(&self) -> &Expr {
        &self.det
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn lower(&self, v: &VectorField) -> OneForm {
        self.g.contract(v)
    }

    pub fn raise(&self, w: &OneForm) -> VectorField {
        let n = self.dim();
        VectorField(
            (0..n)
                .map(|i| (0..n).map(|j| &self.inv.0[i][j] * &w.0[j]).sum())
                .collect(),
        )
    }

    pub fn inner(&self, x: &VectorField, y: &VectorField) -> Expr {
        self.g.apply(x, y)
    }

    /// `g(V, V)`; may be negative for indefinite metrics.
    pub fn norm_sq(&self, v: &VectorField) -> Expr {
        self.g.apply(v, v)
    }

    /// `g^{ij} T_ij`.
    pub fn trace(&self, t: &Tensor2) -> Expr {
        let n = self.dim();
        let mut acc = Expr::zero();
        for i in 0..n {
            for j in 0..n {
                if self.inv.0[i][j].is_zero() || t.0[i][j].is_zero() {
                    continue;
                }
                acc = acc + &self.inv.0[i][j] * &t.0[j][i];
            }
        }
        acc
    }

    /// `(T^2)_ij = T_ik g^{kl} T_lj`.
    pub fn square(&self, t: &Tensor2) -> Tensor2 {
        let n = self.dim();
        let mixed = self.raise_first(t);
        Tensor2::from_fn(n, |i, j| (0..n).map(|k| &t.0[i][k] * &mixed.0[k][j]).sum())
    }

    /// `T^i_j = g^{ik} T_kj` as a matrix.
    pub fn raise_first(&self, t: &Tensor2) -> Tensor2 {
        let n = self.dim();
        Tensor2::from_fn(n, |i, j| {
            (0..n)
                .filter(|k| !self.inv.0[i][*k].is_zero())
                .map(|k| &self.inv.0[i][k] * &t.0[k][j])
                .sum()
        })
    }
}

fn signature_of(chart: &Chart, g: &Tensor2) -> Result<Signature, GeometryError> {
    let n = g.dim();
    let mut found: Option<(usize, usize)> = None;
    for p in chart.domain().points() {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = g.0[i][j].eval(p).map_err(|e| GeometryError::Evaluation(e.to_string()))?;
            }
        }
        let eig = m.symmetric_eigen();
        let pos = eig.eigenvalues.iter().filter(|v| **v > 0.0).count();
        let neg = n - pos;
        match found {
            None => found = Some((pos, neg)),
            Some(f) if f != (pos, neg) => return Err(GeometryError::SignatureVaries),
            _ => {}
        }
    }
    Ok(match found.unwrap_or((n, 0)) {
        (_, 0) => Signature::Riemannian,
        (_, 1) => Signature::Lorentzian,
        (positive, negative) => Signature::General { positive, negative },
    })
}
