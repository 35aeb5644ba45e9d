use std::collections::HashMap;
use std::sync::Arc;

use crate::certify::{certify, sym_components, vec_components, CheckRecord};
use crate::riemann::{determinant, Chart, Geometry, Metric, Tensor2, VectorField};
use crate::symbolic::{Expr, Symbol};

use super::HypersurfaceError;

/// A map `φ` from a source chart into an ambient geometry of one higher
/// dimension, given by its ambient coordinate components.
#[derive(Debug, Clone)]
pub struct Immersion {
    source: Arc<Chart>,
    ambient: Arc<Geometry>,
    map: Vec<Expr>,
    /// `jacobian[i][A] = d_i φ^A`.
    jacobian: Vec<Vec<Expr>>,
    subst: HashMap<Symbol, Expr>,
}

impl Immersion {
    pub fn new(source: Arc<Chart>, ambient: Arc<Geometry>, map: Vec<Expr>) -> Result<Self, HypersurfaceError> {
        let n = source.dim();
        let m = ambient.dim();
        if m != n + 1 {
            return Err(HypersurfaceError::Codimension {
                source_dim: n,
                ambient_dim: m,
            });
        }
        if map.len() != m {
            return Err(HypersurfaceError::MapLength { expected: m, found: map.len() });
        }
        let known = source.symbols();
        for e in &map {
            if let Some(s) = e.symbols().into_iter().find(|s| !known.contains(s)) {
                return Err(HypersurfaceError::UnknownSymbol(s.to_string()));
            }
        }
        if let Some(p) = ambient.chart().params().iter().find(|p| !known.contains(p)) {
            return Err(HypersurfaceError::UnknownSymbol(p.to_string()));
        }
        let jacobian: Vec<Vec<Expr>> = source
            .coords()
            .iter()
            .map(|s| map.iter().map(|f| f.diff(s)).collect())
            .collect();
        let subst = ambient.chart().coords().iter().cloned().zip(map.iter().cloned()).collect();
        let imm = Immersion {
            source,
            ambient,
            map,
            jacobian,
            subst,
        };
        imm.check_rank()?;
        imm.check_image()?;
        Ok(imm)
    }

    /// Cauchy-Binet: rank n iff `det(J J^T)` does not vanish.
    fn check_rank(&self) -> Result<(), HypersurfaceError> {
        let n = self.source.dim();
        let jjt: Vec<Vec<Expr>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.jacobian[i].iter().zip(&self.jacobian[j]).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        if self.source.domain().nonvanishing(&determinant(&jjt))? {
            Ok(())
        } else {
            Err(HypersurfaceError::RankDeficient)
        }
    }

    /// Every sampled image point must satisfy the ambient chart constraints.
    fn check_image(&self) -> Result<(), HypersurfaceError> {
        let amb = self.ambient.chart();
        for p in self.source.domain().points() {
            let mut q = p.clone();
            for (s, f) in amb.coords().iter().zip(&self.map) {
                let v = f.eval(p).map_err(|e| HypersurfaceError::ChainConstraint(e.to_string()))?;
                q.insert(s.clone(), v);
            }
            for c in amb.constraints() {
                let ok = c.holds(&q).map_err(|e| HypersurfaceError::ChainConstraint(e.to_string()))?;
                if !ok {
                    return Err(HypersurfaceError::ChainConstraint(format!("{c} fails at an image point")));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn ambient(&self) -> &Arc<Geometry> {
        &self.ambient
    }

    pub fn map(&self) -> &[Expr] {
        &self.map
    }

    pub fn jacobian(&self) -> &[Vec<Expr>] {
        &self.jacobian
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// `f ∘ φ` for an ambient scalar.
    pub fn pullback(&self, f: &Expr) -> Expr {
        f.substitute(&self.subst)
    }

    /// `V ∘ φ`, componentwise.
    pub fn restrict(&self, v: &[Expr]) -> Vec<Expr> {
        v.iter().map(|e| self.pullback(e)).collect()
    }

    /// `dφ(X)` in ambient components.
    pub fn push(&self, x: &VectorField) -> Vec<Expr> {
        let m = self.ambient.dim();
        (0..m)
            .map(|a| {
                x.0.iter()
                    .zip(&self.jacobian)
                    .filter(|(xi, _)| !xi.is_zero())
                    .map(|(xi, row)| xi * &row[a])
                    .sum()
            })
            .collect()
    }

    /// `(φ* ω)_i = ω_A(φ) d_i φ^A`.
    pub fn pullback_form(&self, w: &[Expr]) -> Vec<Expr> {
        let w = self.restrict(w);
        self.jacobian
            .iter()
            .map(|row| row.iter().zip(&w).filter(|(_, c)| !c.is_zero()).map(|(j, c)| j * c).sum())
            .collect()
    }

    /// Ambient metric restricted to the image.
    pub fn ambient_metric(&self) -> Vec<Vec<Expr>> {
        self.ambient.metric().g().0.iter().map(|row| self.restrict(row)).collect()
    }

    pub(crate) fn ambient_inner(&self, g: &[Vec<Expr>], x: &[Expr], y: &[Expr]) -> Expr {
        let m = x.len();
        let mut acc = Expr::zero();
        for a in 0..m {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..m {
                if y[b].is_zero() || g[a][b].is_zero() {
                    continue;
                }
                acc = acc + &g[a][b] * &x[a] * &y[b];
            }
        }
        acc
    }

    /// `g_ij = g̃(dφ d_i, dφ d_j)`.
    pub fn induced_metric(&self) -> Tensor2 {
        let g = self.ambient_metric();
        let n = self.dim();
        Tensor2::from_fn(n, |i, j| self.ambient_inner(&g, &self.jacobian[i], &self.jacobian[j]))
    }

    /// Tangential part of an ambient field along the image, solved from
    /// `g(X, d_i) = g̃(V, dφ d_i)`.
    pub fn tangential(&self, metric: &Metric, v_on_image: &[Expr]) -> VectorField {
        let g = self.ambient_metric();
        let b: Vec<Expr> = self.jacobian.iter().map(|t| self.ambient_inner(&g, t, v_on_image)).collect();
        metric.raise(&crate::riemann::OneForm(b))
    }
}

/// Intrinsic and extrinsic data of a hypersurface.
#[derive(Debug)]
pub struct InducedGeometry {
    pub geometry: Geometry,
    /// Unit normal in ambient components along the image.
    pub normal: Vec<Expr>,
    /// `g̃(N, N)`, +1 or -1.
    pub normal_sign: i64,
    /// Second fundamental tensor `H_ij = g̃(∇̃_i dφ d_j, N)`.
    pub second_fundamental: Tensor2,
    /// Shape operator as a matrix, `shape[k][j] = B^k_j = g^{ki} H_ij`.
    pub shape: Tensor2,
    pub mean_curvature: Expr,
    /// Normalization, orthogonality, symmetry and compatibility certificates.
    pub checks: Vec<CheckRecord>,
}

impl InducedGeometry {
    pub fn trace_h(&self) -> Expr {
        self.geometry.metric().trace(&self.second_fundamental)
    }

    /// `H^2_ij = H_ik g^{kl} H_lj`.
    pub fn h_squared(&self) -> Tensor2 {
        self.geometry.metric().square(&self.second_fundamental)
    }

    /// The same hypersurface with the opposite unit normal.
    pub fn flipped(&self) -> InducedGeometry {
        let m1 = Expr::int(-1);
        InducedGeometry {
            geometry: Geometry::new(self.geometry.metric().clone()),
            normal: self.normal.iter().map(|e| -e).collect(),
            normal_sign: self.normal_sign,
            second_fundamental: self.second_fundamental.scale(&m1),
            shape: self.shape.scale(&m1),
            mean_curvature: -&self.mean_curvature,
            checks: self.checks.clone(),
        }
    }
}

/// Cofactor covector `n_A` with `n(dφ d_i) = 0`; `n_A N^A` is then the
/// determinant of the frame `(dφ d_1, ..., dφ d_n, N)`.
fn cofactor_normal(imm: &Immersion) -> Vec<Expr> {
    let n = imm.dim();
    let j = imm.jacobian();
    (0..=n)
        .map(|a| {
            let minor: Vec<Vec<Expr>> = (0..=n)
                .filter(|b| *b != a)
                .map(|b| (0..n).map(|i| j[i][b].clone()).collect())
                .collect();
            let d = determinant(&minor);
            if (a + n) % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

pub fn induce_geometry(imm: &Immersion) -> Result<InducedGeometry, HypersurfaceError> {
    let n = imm.dim();
    let m = n + 1;
    let dom = imm.source().domain();
    let names = imm.source().coords();
    let metric = Metric::new(imm.source().clone(), imm.induced_metric())?;

    let gt = imm.ambient_metric();
    let ginv: Vec<Vec<Expr>> = imm.ambient().metric().inv().0.iter().map(|r| imm.restrict(r)).collect();
    let cof = cofactor_normal(imm);
    let nn: Expr = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .filter(|(a, b)| !ginv[*a][*b].is_zero())
        .map(|(a, b)| &ginv[a][b] * &cof[a] * &cof[b])
        .sum();
    let vals = dom.values(&nn)?;
    let sign = if vals.iter().all(|v| *v > 0.0) {
        1
    } else if vals.iter().all(|v| *v < 0.0) {
        -1
    } else {
        return Err(HypersurfaceError::NullNormal(nn.to_string()));
    };
    if !dom.nonvanishing(&nn)? {
        return Err(HypersurfaceError::NullNormal(nn.to_string()));
    }
    let eps = Expr::int(sign);
    let inv_len = (&eps * &nn).sqrt().recip();
    let normal: Vec<Expr> = (0..m)
        .map(|a| {
            let up: Expr = (0..m).filter(|b| !ginv[a][*b].is_zero()).map(|b| &ginv[a][b] * &cof[b]).sum();
            &eps * &up * &inv_len
        })
        .collect();

    let gamma: Vec<Vec<Vec<Expr>>> = imm
        .ambient()
        .christoffel()
        .0
        .iter()
        .map(|k| k.iter().map(|r| imm.restrict(r)).collect())
        .collect();
    let jac = imm.jacobian();
    let mut h = Tensor2::zero(n);
    for i in 0..n {
        for jj in i..n {
            let accel: Vec<Expr> = (0..m)
                .map(|a| {
                    let mut e = jac[jj][a].diff(&names[i]);
                    for b in 0..m {
                        if jac[i][b].is_zero() {
                            continue;
                        }
                        for c in 0..m {
                            if !jac[jj][c].is_zero() && !gamma[a][b][c].is_zero() {
                                e = e + &gamma[a][b][c] * &jac[i][b] * &jac[jj][c];
                            }
                        }
                    }
                    e
                })
                .collect();
            let v = imm.ambient_inner(&gt, &accel, &normal);
            h.0[jj][i] = v.clone();
            h.0[i][jj] = v;
        }
    }
    let shape = metric.raise_first(&h);
    let mean_curvature = &metric.trace(&h) * &Expr::frac(1, n as i64);

    let mut checks = Vec::new();
    let unit = imm.ambient_inner(&gt, &normal, &normal) - &eps;
    checks.push(
        CheckRecord::certified("normal.unit", "g̃(N, N) = ±1", certify([("g̃(N,N)".to_string(), unit)], dom)?)
            .witness("sign", sign),
    );
    let orth: Vec<Expr> = jac.iter().map(|t| imm.ambient_inner(&gt, &normal, t)).collect();
    checks.push(CheckRecord::certified(
        "normal.orthogonal",
        "g̃(N, dφ d_i) = 0",
        certify(vec_components(&orth, names), dom)?,
    ));
    checks.push(CheckRecord::certified(
        "second-fundamental.symmetric",
        "H_ij = H_ji",
        certify(sym_components(&h.sub(&h.transpose()), names), dom)?,
    ));
    let compat = Tensor2::from_fn(n, |i, jj| {
        let gb: Expr = (0..n).map(|k| &metric.g().0[i][k] * &shape.0[k][jj]).sum();
        &h.0[i][jj] - &gb
    });
    checks.push(CheckRecord::certified(
        "shape.compatibility",
        "g(B(X), Y) = g̃(h(X, Y), N)",
        certify(compat.labelled(names, false), dom)?,
    ));
    Ok(InducedGeometry {
        geometry: Geometry::new(metric),
        normal,
        normal_sign: sign,
        second_fundamental: h,
        shape,
        mean_curvature,
        checks,
    })
}

/// Tangential and normal parts of an ambient field along a hypersurface.
#[derive(Debug, Clone)]
pub struct AmbientSplit {
    /// `V^T` on the source chart.
    pub tangential: VectorField,
    /// `ρ = g̃(V, N)`.
    pub rho: Expr,
    /// `dφ(V^T) + ρ N / g̃(N,N) = V ∘ φ`.
    pub reconstruction: CheckRecord,
}

pub fn split_ambient_field(imm: &Immersion, ind: &InducedGeometry, v: &VectorField) -> Result<AmbientSplit, HypersurfaceError> {
    let dom = imm.source().domain();
    let on_image = imm.restrict(&v.0);
    let tangential = imm.tangential(ind.geometry.metric(), &on_image);
    let gt = imm.ambient_metric();
    let rho = imm.ambient_inner(&gt, &on_image, &ind.normal);
    let coef = &rho * &Expr::int(ind.normal_sign);
    let pushed = imm.push(&tangential);
    let diff: Vec<Expr> = (0..on_image.len())
        .map(|a| &pushed[a] + &coef * &ind.normal[a] - &on_image[a])
        .collect();
    let reconstruction = CheckRecord::certified(
        "split.reconstruction",
        "dφ(V^T) + ρN = V along the image",
        certify(vec_components(&diff, imm.ambient().chart().coords()), dom)?,
    );
    Ok(AmbientSplit {
        tangential,
        rho,
        reconstruction,
    })
}
