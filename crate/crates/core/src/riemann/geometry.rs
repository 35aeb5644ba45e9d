use std::sync::{Arc, OnceLock};

use crate::symbolic::{Expr, Symbol};

use super::{Chart, Metric, OneForm, Tensor2, VectorField};

/// `gamma[k][i][j] = Γ^k_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel(pub Vec<Vec<Vec<Expr>>>);

/// Rank-4 component array.
pub type Array4 = Vec<Vec<Vec<Vec<Expr>>>>;

/// Riemann, Ricci and scalar curvature. The Weyl tensor is computed on
/// request by [`Geometry::weyl`].
///
/// `riemann[l][k][i][j]` is the `d_l` component of `R(d_i, d_j) d_k` with
/// `R(X,Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_[X,Y] Z`; `lowered[a][b][c][d] =
/// g(R(d_c, d_d) d_b, d_a)`; `Ric(X,Y) = tr(Z -> R(Z,X)Y)`.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub riemann: Array4,
    pub lowered: Array4,
    pub ricci: Tensor2,
    pub scal: Expr,
}

/// A metric with its Levi-Civita connection and lazily computed curvature.
#[derive(Debug)]
pub struct Geometry {
    metric: Metric,
    gamma: Christoffel,
    curvature: OnceLock<CurvatureBundle>,
}

fn array4(n: usize) -> Array4 {
    vec![vec![vec![vec![Expr::zero(); n]; n]; n]; n]
}

impl Geometry {
    pub fn new(metric: Metric) -> Self {
        let gamma = christoffel(&metric);
        Geometry {
            metric,
            gamma,
            curvature: OnceLock::new(),
        }
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.metric.chart()
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    fn coord(&self, i: usize) -> &Symbol {
        &self.chart().coords()[i]
    }

    pub fn christoffel(&self) -> &Christoffel {
        &self.gamma
    }

    pub fn curvature(&self) -> &CurvatureBundle {
        self.curvature.get_or_init(|| self.compute_curvature())
    }

    pub fn ricci(&self) -> &Tensor2 {
        &self.curvature().ricci
    }

    pub fn scal(&self) -> &Expr {
        &self.curvature().scal
    }

    /// Weyl tensor; `None` when `n < 4`.
    pub fn weyl(&self) -> Option<Array4> {
        if self.dim() < 4 {
            return None;
        }
        let c = self.curvature();
        Some(weyl(&self.metric, &c.lowered, &c.ricci, &c.scal))
    }

    fn compute_curvature(&self) -> CurvatureBundle {
        let n = self.dim();
        let gm = &self.gamma.0;
        let mut r = array4(n);
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut e = gm[l][j][k].diff(self.coord(i)) - gm[l][i][k].diff(self.coord(j));
                        for m in 0..n {
                            if !gm[l][i][m].is_zero() && !gm[m][j][k].is_zero() {
                                e = e + &gm[l][i][m] * &gm[m][j][k];
                            }
                            if !gm[l][j][m].is_zero() && !gm[m][i][k].is_zero() {
                                e = e - &gm[l][j][m] * &gm[m][i][k];
                            }
                        }
                        r[l][k][j][i] = -&e;
                        r[l][k][i][j] = e;
                    }
                }
            }
        }
        let g = &self.metric.g().0;
        let mut low = array4(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in (c + 1)..n {
                        let e: Expr = (0..n)
                            .filter(|e| !g[a][*e].is_zero() && !r[*e][b][c][d].is_zero())
                            .map(|e| &g[a][e] * &r[e][b][c][d])
                            .sum();
                        low[a][b][d][c] = -&e;
                        low[a][b][c][d] = e;
                    }
                }
            }
        }
        let ricci = Tensor2::from_fn(n, |b, d| (0..n).map(|a| r[a][b][a][d].clone()).sum());
        let scal = self.metric.trace(&ricci);
        CurvatureBundle {
            riemann: r,
            lowered: low,
            ricci,
            scal,
        }
    }

    /// `R(X,Y)Z`.
    pub fn riemann_apply(&self, x: &VectorField, y: &VectorField, z: &VectorField) -> VectorField {
        let n = self.dim();
        let r = &self.curvature().riemann;
        VectorField(
            (0..n)
                .map(|l| {
                    let mut acc = Expr::zero();
                    for k in 0..n {
                        if z.0[k].is_zero() {
                            continue;
                        }
                        for i in 0..n {
                            if x.0[i].is_zero() {
                                continue;
                            }
                            for j in 0..n {
                                if y.0[j].is_zero() || r[l][k][i][j].is_zero() {
                                    continue;
                                }
                                acc = acc + &r[l][k][i][j] * &x.0[i] * &y.0[j] * &z.0[k];
                            }
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    /// `(∇_i V)^j = d_i V^j + Γ^j_ik V^k`, indexed `[i][j]`.
    pub fn nabla_vector(&self, v: &VectorField) -> Vec<Vec<Expr>> {
        let n = self.dim();
        let gm = &self.gamma.0;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut e = v.0[j].diff(self.coord(i));
                        for k in 0..n {
                            if !gm[j][i][k].is_zero() && !v.0[k].is_zero() {
                                e = e + &gm[j][i][k] * &v.0[k];
                            }
                        }
                        e
                    })
                    .collect()
            })
            .collect()
    }

    /// `∇_X Y`.
    pub fn covariant_derivative(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let n = self.dim();
        let m = self.nabla_vector(y);
        VectorField(
            (0..n)
                .map(|j| (0..n).filter(|i| !x.0[*i].is_zero()).map(|i| &x.0[i] * &m[i][j]).sum())
                .collect(),
        )
    }

    /// `(∇_i w)_j = d_i w_j - Γ^k_ij w_k`.
    pub fn nabla_form(&self, w: &OneForm) -> Tensor2 {
        let n = self.dim();
        let gm = &self.gamma.0;
        Tensor2::from_fn(n, |i, j| {
            let mut e = w.0[j].diff(self.coord(i));
            for k in 0..n {
                if !gm[k][i][j].is_zero() && !w.0[k].is_zero() {
                    e = e - &gm[k][i][j] * &w.0[k];
                }
            }
            e
        })
    }

    /// `[k][i][j] = ∇_k T_ij`.
    pub fn nabla_tensor2(&self, t: &Tensor2) -> Vec<Vec<Vec<Expr>>> {
        let n = self.dim();
        let gm = &self.gamma.0;
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let mut e = t.0[i][j].diff(self.coord(k));
                                for m in 0..n {
                                    if !gm[m][k][i].is_zero() && !t.0[m][j].is_zero() {
                                        e = e - &gm[m][k][i] * &t.0[m][j];
                                    }
                                    if !gm[m][k][j].is_zero() && !t.0[i][m].is_zero() {
                                        e = e - &gm[m][k][j] * &t.0[i][m];
                                    }
                                }
                                e
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// `(£_V g)_ij = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k`.
    pub fn lie_derivative_metric(&self, v: &VectorField) -> Tensor2 {
        let n = self.dim();
        let g = &self.metric.g().0;
        let dv: Vec<Vec<Expr>> = (0..n)
            .map(|i| (0..n).map(|k| v.0[k].diff(self.coord(i))).collect())
            .collect();
        let mut t = Tensor2::zero(n);
        for i in 0..n {
            for j in i..n {
                let mut e = Expr::zero();
                for k in 0..n {
                    if !v.0[k].is_zero() {
                        e = e + &v.0[k] * g[i][j].diff(self.coord(k));
                    }
                    if !g[k][j].is_zero() && !dv[i][k].is_zero() {
                        e = e + &g[k][j] * &dv[i][k];
                    }
                    if !g[i][k].is_zero() && !dv[j][k].is_zero() {
                        e = e + &g[i][k] * &dv[j][k];
                    }
                }
                t.0[j][i] = e.clone();
                t.0[i][j] = e;
            }
        }
        t
    }

    /// `[X,Y]^j = X^i d_i Y^j - Y^i d_i X^j`.
    pub fn lie_bracket(&self, x: &VectorField, y: &VectorField) -> VectorField {
        lie_bracket(self.chart().coords(), x, y)
    }

    pub fn differential(&self, f: &Expr) -> OneForm {
        OneForm(self.chart().coords().iter().map(|s| f.diff(s)).collect())
    }

    pub fn gradient(&self, f: &Expr) -> VectorField {
        self.metric.raise(&self.differential(f))
    }

    /// `Hess f_ij = d_i d_j f - Γ^k_ij d_k f`.
    pub fn hessian(&self, f: &Expr) -> Tensor2 {
        self.nabla_form(&self.differential(f))
    }

    /// `∇_i V^i`.
    pub fn divergence(&self, v: &VectorField) -> Expr {
        let m = self.nabla_vector(v);
        (0..self.dim()).map(|i| m[i][i].clone()).sum()
    }

    /// `(div T)_j = g^{ik} ∇_k T_ij`.
    pub fn divergence_tensor2(&self, t: &Tensor2) -> OneForm {
        let n = self.dim();
        let nt = self.nabla_tensor2(t);
        let inv = &self.metric.inv().0;
        OneForm(
            (0..n)
                .map(|j| {
                    let mut e = Expr::zero();
                    for i in 0..n {
                        for k in 0..n {
                            if !inv[i][k].is_zero() && !nt[k][i][j].is_zero() {
                                e = e + &inv[i][k] * &nt[k][i][j];
                            }
                        }
                    }
                    e
                })
                .collect(),
        )
    }
}

pub fn lie_bracket(coords: &[Symbol], x: &VectorField, y: &VectorField) -> VectorField {
    let n = coords.len();
    VectorField(
        (0..n)
            .map(|j| {
                let mut e = Expr::zero();
                for i in 0..n {
                    if !x.0[i].is_zero() {
                        e = e + &x.0[i] * y.0[j].diff(&coords[i]);
                    }
                    if !y.0[i].is_zero() {
                        e = e - &y.0[i] * x.0[j].diff(&coords[i]);
                    }
                }
                e
            })
            .collect(),
    )
}

/// `Γ^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)`.
pub fn christoffel(metric: &Metric) -> Christoffel {
    let n = metric.dim();
    let coords = metric.chart().coords();
    let g = &metric.g().0;
    let inv = &metric.inv().0;
    let dg: Vec<Vec<Vec<Expr>>> = (0..n)
        .map(|l| (0..n).map(|i| (0..n).map(|j| g[i][j].diff(&coords[l])).collect()).collect())
        .collect();
    let half = Expr::frac(1, 2);
    let mut first = vec![vec![vec![Expr::zero(); n]; n]; n];
    for l in 0..n {
        for i in 0..n {
            for j in i..n {
                let e = (&dg[i][j][l] + &dg[j][i][l] - &dg[l][i][j]) * &half;
                first[l][j][i] = e.clone();
                first[l][i][j] = e;
            }
        }
    }
    let mut gamma = vec![vec![vec![Expr::zero(); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let e: Expr = (0..n)
                    .filter(|l| !inv[k][*l].is_zero() && !first[*l][i][j].is_zero())
                    .map(|l| &inv[k][l] * &first[l][i][j])
                    .sum();
                gamma[k][j][i] = e.clone();
                gamma[k][i][j] = e;
            }
        }
    }
    Christoffel(gamma)
}

/// Weyl tensor in the lowered index layout of [`CurvatureBundle::lowered`].
fn weyl(metric: &Metric, low: &Array4, ric: &Tensor2, scal: &Expr) -> Array4 {
    let n = metric.dim();
    let g = &metric.g().0;
    let r = &ric.0;
    let k1 = Expr::frac(1, (n - 2) as i64);
    let k2 = scal / Expr::int(((n - 1) * (n - 2)) as i64);
    let mut w = array4(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let ricci_part = &g[a][c] * &r[b][d] - &g[a][d] * &r[b][c] + &g[b][d] * &r[a][c] - &g[b][c] * &r[a][d];
                    let gg = &g[a][c] * &g[b][d] - &g[a][d] * &g[b][c];
                    w[a][b][c][d] = &low[a][b][c][d] - &k1 * ricci_part + &k2 * gg;
                }
            }
        }
    }
    w
}
