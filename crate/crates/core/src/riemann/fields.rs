use std::fmt;

use crate::symbolic::Expr;

/// Contravariant components `V^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField(pub Vec<Expr>);

/// Covariant components `w_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm(pub Vec<Expr>);

/// Components `T_ij` of a (0,2) tensor, row-major over the chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2(pub Vec<Vec<Expr>>);

pub type ScalarField = Expr;

impl VectorField {
    pub fn zero(n: usize) -> Self {
        VectorField(vec![Expr::zero(); n])
    }

    /// Coordinate field `d/dx^i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![Expr::zero(); n];
        v[i] = Expr::one();
        VectorField(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Expr::is_zero)
    }

    pub fn scale(&self, f: &Expr) -> Self {
        VectorField(self.0.iter().map(|c| c * f).collect())
    }

    pub fn add(&self, o: &VectorField) -> Self {
        VectorField(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &VectorField) -> Self {
        VectorField(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl OneForm {
    pub fn zero(n: usize) -> Self {
        OneForm(vec![Expr::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Expr::is_zero)
    }

    pub fn scale(&self, f: &Expr) -> Self {
        OneForm(self.0.iter().map(|c| c * f).collect())
    }

    pub fn add(&self, o: &OneForm) -> Self {
        OneForm(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &OneForm) -> Self {
        OneForm(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    /// Contraction `w(V)`.
    pub fn apply(&self, v: &VectorField) -> Expr {
        self.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    /// `w (x) w'`.
    pub fn tensor(&self, o: &OneForm) -> Tensor2 {
        Tensor2(self.0.iter().map(|a| o.0.iter().map(|b| a * b).collect()).collect())
    }

    /// `w (x) w' + w' (x) w`.
    pub fn sym_product(&self, o: &OneForm) -> Tensor2 {
        let t = self.tensor(o);
        t.add(&t.transpose())
    }
}

impl Tensor2 {
    pub fn zero(n: usize) -> Self {
        Tensor2(vec![vec![Expr::zero(); n]; n])
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Expr) -> Self {
        Tensor2((0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.0[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(Expr::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.0[i][j] == self.0[j][i]))
    }

    pub fn transpose(&self) -> Self {
        Tensor2::from_fn(self.dim(), |i, j| self.0[j][i].clone())
    }

    pub fn add(&self, o: &Tensor2) -> Self {
        Tensor2::from_fn(self.dim(), |i, j| &self.0[i][j] + &o.0[i][j])
    }

    pub fn sub(&self, o: &Tensor2) -> Self {
        Tensor2::from_fn(self.dim(), |i, j| &self.0[i][j] - &o.0[i][j])
    }

    pub fn scale(&self, f: &Expr) -> Self {
        Tensor2::from_fn(self.dim(), |i, j| &self.0[i][j] * f)
    }

    /// `T(X, Y)`.
    pub fn apply(&self, x: &VectorField, y: &VectorField) -> Expr {
        let n = self.dim();
        let mut acc = Expr::zero();
        for i in 0..n {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y.0[j].is_zero() || self.0[i][j].is_zero() {
                    continue;
                }
                acc = acc + &x.0[i] * &y.0[j] * &self.0[i][j];
            }
        }
        acc
    }

    /// Contraction in the second slot: `T(., X)`.
    pub fn contract(&self, x: &VectorField) -> OneForm {
        OneForm(
            self.0
                .iter()
                .map(|row| row.iter().zip(&x.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// Components as `(label, expr)` pairs over the upper triangle (or full matrix).
    pub fn labelled(&self, names: &[impl fmt::Display], symmetric: bool) -> Vec<(String, Expr)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if symmetric && j < i {
                    continue;
                }
                out.push((format!("[{},{}]", names[i], names[j]), self.0[i][j].clone()));
            }
        }
        out
    }
}
