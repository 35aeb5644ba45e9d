use crate::certify::{certify, CheckRecord};
use crate::symbolic::Expr;

use super::{Geometry, GeometryError};

/// Structural identities every Levi-Civita curvature must satisfy.
pub fn verify_curvature_identities(geo: &Geometry) -> Result<Vec<CheckRecord>, GeometryError> {
    let n = geo.dim();
    let dom = geo.chart().domain();
    let s = geo.chart().coords();
    let gm = &geo.christoffel().0;
    let c = geo.curvature();
    let low = &c.lowered;
    let mut out = Vec::new();

    let ng = geo.nabla_tensor2(geo.metric().g());
    let mut comps = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                comps.push((format!("[{},{},{}]", s[k], s[i], s[j]), ng[k][i][j].clone()));
            }
        }
    }
    out.push(CheckRecord::certified("curvature.metric-compatibility", "∇g = 0", certify(comps, dom)?));

    let mut comps = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in (i + 1)..n {
                comps.push((format!("[{},{},{}]", s[k], s[i], s[j]), &gm[k][i][j] - &gm[k][j][i]));
            }
        }
    }
    out.push(CheckRecord::certified("curvature.torsion-free", "Γ^k_ij = Γ^k_ji", certify(comps, dom)?));

    let label = |a: usize, b: usize, cc: usize, d: usize| format!("[{},{},{},{}]", s[a], s[b], s[cc], s[d]);
    let mut anti = Vec::new();
    let mut pair = Vec::new();
    let mut bianchi = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    anti.push((label(a, b, cc, d), &low[a][b][cc][d] + &low[b][a][cc][d]));
                    anti.push((label(a, b, cc, d), &low[a][b][cc][d] + &low[a][b][d][cc]));
                    pair.push((label(a, b, cc, d), &low[a][b][cc][d] - &low[cc][d][a][b]));
                    if b < cc && cc < d {
                        let e = &low[a][b][cc][d] + &low[a][cc][d][b] + &low[a][d][b][cc];
                        bianchi.push((label(a, b, cc, d), e));
                    }
                }
            }
        }
    }
    out.push(CheckRecord::certified(
        "curvature.antisymmetry",
        "R_abcd = -R_bacd = -R_abdc",
        certify(anti, dom)?,
    ));
    out.push(CheckRecord::certified("curvature.pair-symmetry", "R_abcd = R_cdab", certify(pair, dom)?));
    out.push(CheckRecord::certified(
        "curvature.first-bianchi",
        "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0",
        certify(bianchi, dom)?,
    ));

    let ric = geo.ricci();
    out.push(CheckRecord::certified(
        "curvature.ricci-symmetric",
        "Ric_ij = Ric_ji",
        certify(ric.sub(&ric.transpose()).labelled(s, true), dom)?,
    ));

    let div = geo.divergence_tensor2(ric);
    let comps: Vec<(String, Expr)> = (0..n)
        .map(|j| (format!("[{}]", s[j]), geo.scal().diff(&s[j]) - Expr::int(2) * &div.0[j]))
        .collect();
    out.push(CheckRecord::certified(
        "curvature.contracted-bianchi",
        "d scal = 2 div(Ric)",
        certify(comps, dom)?,
    ));
    Ok(out)
}
