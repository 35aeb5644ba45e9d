//! Independent numeric oracles: central finite differences and pointwise
//! least squares. Nothing here touches the symbolic simplifier beyond
//! evaluating input expressions at points.

use nalgebra::{DMatrix, DVector};

use crate::hypersurface::Immersion;
use crate::riemann::{Geometry, Metric, OneForm, VectorField};
use crate::symbolic::{EvalError, Expr, Point, Symbol};

fn step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// Central difference `d e / d s` at `p`.
pub fn fd_derivative(e: &Expr, s: &Symbol, p: &Point) -> Result<f64, EvalError> {
    let x = p.get(s).copied().ok_or_else(|| EvalError::Unbound(s.name().to_string()))?;
    let h = step(x);
    let mut q = p.clone();
    q.insert(s.clone(), x + h);
    let fp = e.eval(&q)?;
    q.insert(s.clone(), x - h);
    let fm = e.eval(&q)?;
    Ok((fp - fm) / (2.0 * h))
}

/// `d_i d_j e` by nested central differences.
pub fn fd_second_derivative(e: &Expr, si: &Symbol, sj: &Symbol, p: &Point) -> Result<f64, EvalError> {
    let x = p.get(si).copied().ok_or_else(|| EvalError::Unbound(si.name().to_string()))?;
    let h = 1e-4 * x.abs().max(1.0);
    let mut q = p.clone();
    q.insert(si.clone(), x + h);
    let fp = fd_derivative(e, sj, &q)?;
    q.insert(si.clone(), x - h);
    let fm = fd_derivative(e, sj, &q)?;
    Ok((fp - fm) / (2.0 * h))
}

fn eval_matrix(m: &[Vec<Expr>], p: &Point) -> Result<DMatrix<f64>, EvalError> {
    let mut out = DMatrix::zeros(m.len(), m.first().map_or(0, |r| r.len()));
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out[(i, j)] = e.eval(p)?;
        }
    }
    Ok(out)
}

/// `Γ^k_ij` at `p` from finite differences of the metric components alone.
pub fn fd_christoffel(metric: &Metric, p: &Point) -> Result<Vec<Vec<Vec<f64>>>, EvalError> {
    let n = metric.dim();
    let coords = metric.chart().coords();
    let g = &metric.g().0;
    let ginv = eval_matrix(g, p)?
        .try_inverse()
        .ok_or_else(|| EvalError::Domain("singular metric".into()))?;
    // dg[k][i][j] = d_k g_ij
    let mut dg = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                dg[k][i][j] = fd_derivative(&g[i][j], &coords[k], p)?;
            }
        }
    }
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                gamma[k][i][j] = (0..n)
                    .map(|l| 0.5 * ginv[(k, l)] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]))
                    .sum();
            }
        }
    }
    Ok(gamma)
}

/// `|a - b| / max(|a|, |b|, 1)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Worst relative discrepancy between the symbolic Christoffel symbols and
/// the finite-difference oracle over the given points.
pub fn christoffel_discrepancy(geo: &Geometry, points: &[Point]) -> Result<f64, EvalError> {
    let n = geo.dim();
    let sym = &geo.christoffel().0;
    let mut worst: f64 = 0.0;
    for p in points {
        let fd = fd_christoffel(geo.metric(), p)?;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max(rel_err(sym[k][i][j].eval(p)?, fd[k][i][j]));
                }
            }
        }
    }
    Ok(worst)
}

/// Second fundamental tensor at `p` from finite differences of the map and
/// of the ambient metric, with the normal taken from a numeric null space
/// and oriented so that `det(dφ d_1, ..., dφ d_n, N) > 0`.
pub fn fd_second_fundamental(imm: &Immersion, p: &Point) -> Result<Vec<Vec<f64>>, EvalError> {
    let n = imm.dim();
    let m = n + 1;
    let src = imm.source().coords();
    let map = imm.map();
    let mut q = p.clone();
    for (s, f) in imm.ambient().chart().coords().iter().zip(map) {
        q.insert(s.clone(), f.eval(p)?);
    }
    let gt = eval_matrix(&imm.ambient().metric().g().0, &q)?;
    let gamma = fd_christoffel(imm.ambient().metric(), &q)?;
    let mut jac = DMatrix::zeros(m, n);
    for i in 0..n {
        for a in 0..m {
            jac[(a, i)] = fd_derivative(&map[a], &src[i], p)?;
        }
    }
    // N spans the kernel of J^T g̃
    let jt_g = jac.transpose() * &gt;
    let svd = nalgebra::linalg::SVD::new(jt_g.clone().insert_rows(n, 1, 0.0), true, true);
    let vt = svd.v_t.ok_or_else(|| EvalError::Domain("svd failed".into()))?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, s)| if *s < acc.1 { (i, *s) } else { acc });
    let mut nv: DVector<f64> = vt.row(imin).transpose();
    let nn = (nv.transpose() * &gt * &nv)[(0, 0)];
    if nn.abs() < 1e-14 {
        return Err(EvalError::Domain("null normal".into()));
    }
    nv /= nn.abs().sqrt();
    let mut frame = DMatrix::zeros(m, m);
    frame.view_mut((0, 0), (m, n)).copy_from(&jac);
    frame.set_column(n, &nv);
    if frame.determinant() < 0.0 {
        nv = -nv;
    }
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut accel = DVector::zeros(m);
            for a in 0..m {
                let mut v = fd_second_derivative(&map[a], &src[i], &src[j], p)?;
                for b in 0..m {
                    for c in 0..m {
                        v += gamma[a][b][c] * jac[(b, i)] * jac[(c, j)];
                    }
                }
                accel[a] = v;
            }
            h[i][j] = (accel.transpose() * &gt * &nv)[(0, 0)];
        }
    }
    Ok(h)
}

/// Pointwise least-squares solve of `lhs = λ A + μ η⊗η` over the upper
/// triangle, where `(lhs, A)` is `(1/2 £_V g + Ric, g)` for the Ricci kind and
/// `(1/2 £_V g - scal g, -g)` for the Yamabe kind. The Lie derivative and
/// curvature are taken from the symbolic engine; only the solve is numeric.
pub fn least_squares_lambda_mu(
    geo: &Geometry,
    v: &VectorField,
    eta: Option<&OneForm>,
    yamabe: bool,
    p: &Point,
) -> Result<(f64, Option<f64>), EvalError> {
    let n = geo.dim();
    let lie = geo.lie_derivative_metric(v);
    let g = &geo.metric().g().0;
    let scal = if yamabe { geo.scal().eval(p)? } else { 0.0 };
    let eta_vals: Option<Vec<f64>> = match eta {
        Some(e) => {
            let vals = e.0.iter().map(|c| c.eval(p)).collect::<Result<Vec<_>, _>>()?;
            vals.iter().any(|x| x.abs() > 1e-12).then_some(vals)
        }
        None => None,
    };
    let cols = if eta_vals.is_some() { 2 } else { 1 };
    let rows = n * (n + 1) / 2;
    let mut a = DMatrix::zeros(rows, cols);
    let mut b = DVector::zeros(rows);
    let mut r = 0;
    for i in 0..n {
        for j in i..n {
            let gij = g[i][j].eval(p)?;
            let half_lie = 0.5 * lie.0[i][j].eval(p)?;
            if yamabe {
                a[(r, 0)] = -gij;
                b[r] = half_lie - scal * gij;
            } else {
                a[(r, 0)] = gij;
                b[r] = half_lie + geo.ricci().0[i][j].eval(p)?;
            }
            if let Some(e) = &eta_vals {
                a[(r, 1)] = e[i] * e[j];
            }
            r += 1;
        }
    }
    let svd = a.svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .map_err(|e| EvalError::Domain(e.to_string()))?;
    Ok((x[0], (cols == 2).then(|| x[1])))
}
