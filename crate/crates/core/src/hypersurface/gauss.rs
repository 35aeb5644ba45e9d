use crate::certify::{certify, certify_one, sym_components, CheckRecord, Outcome};
use crate::riemann::Geometry;
use crate::symbolic::Expr;

use super::{HypersurfaceError, Immersion, InducedGeometry};

/// Certify `R̃_abcd = c (g̃_ac g̃_bd - g̃_ad g̃_bc)` with constant `c`. When `c`
/// is not supplied it is read off the scalar curvature. Returns the record
/// and, when the gate passes, `c`.
pub fn certify_constant_curvature(geo: &Geometry, c: Option<&Expr>) -> Result<(CheckRecord, Option<Expr>), HypersurfaceError> {
    let n = geo.dim();
    let dom = geo.chart().domain();
    let names = geo.chart().coords();
    let c = match c {
        Some(c) => c.clone(),
        None => geo.scal() * &Expr::frac(1, (n * (n - 1)) as i64),
    };
    let g = &geo.metric().g().0;
    let low = &geo.curvature().lowered;
    let mut comps = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for cc in 0..n {
                for d in (cc + 1)..n {
                    let model = &c * &(&g[a][cc] * &g[b][d] - &g[a][d] * &g[b][cc]);
                    comps.push((
                        format!("[{},{},{},{}]", names[a], names[b], names[cc], names[d]),
                        &low[a][b][cc][d] - &model,
                    ));
                }
            }
        }
    }
    for s in names {
        comps.push((format!("d{s}(c)"), c.diff(s)));
    }
    let cert = certify(comps, dom)?;
    let id = "ambient.constant-curvature";
    let anchor = "R̃(X,Y)Z = c(g̃(Y,Z)X - g̃(X,Z)Y), c constant";
    if cert.passed() {
        Ok((CheckRecord::certified(id, anchor, cert).witness("c", &c), Some(c)))
    } else {
        let comp = cert.worst.as_ref().map(|w| w.0.clone()).unwrap_or_default();
        let mut r = CheckRecord::inapplicable(id, anchor, format!("ambient curvature is not constant at component {comp}"));
        r.residual = Some(cert);
        Ok((r, None))
    }
}

/// Gauss equation for a hypersurface of a constant-curvature ambient:
/// `Ric = ε(tr(H) H - H^2) + (n-1) c g` and its trace.
pub fn verify_gauss_equation(imm: &Immersion, ind: &InducedGeometry, c: Option<&Expr>) -> Result<Vec<CheckRecord>, HypersurfaceError> {
    let (gate, c) = certify_constant_curvature(imm.ambient(), c)?;
    let mut out = vec![gate];
    let ric_id = "gauss.ricci";
    let ric_anchor = "Ric = tr(H) H - H^2 + (n-1) c g";
    let scal_id = "gauss.scal";
    let scal_anchor = "scal = n(n-1) c + tr(H)^2 - tr(H^2)";
    let Some(c) = c else {
        let reason = "ambient is not of certified constant curvature";
        out.push(CheckRecord::inapplicable(ric_id, ric_anchor, reason));
        out.push(CheckRecord::inapplicable(scal_id, scal_anchor, reason));
        return Ok(out);
    };
    let c = imm.pullback(&c);
    let geo = &ind.geometry;
    let n = geo.dim();
    let dom = geo.chart().domain();
    let names = geo.chart().coords();
    let eps = Expr::int(ind.normal_sign);
    let g = geo.metric().g();
    let h = &ind.second_fundamental;
    let tr = ind.trace_h();
    let h2 = ind.h_squared();
    let nm1 = Expr::int(n as i64 - 1);
    let extrinsic = h.scale(&tr).sub(&h2).scale(&eps).add(&g.scale(&(&nm1 * &c)));
    let res = geo.ricci().sub(&extrinsic);
    out.push(
        CheckRecord::certified(ric_id, ric_anchor, certify(sym_components(&res, names), dom)?)
            .witness("c", &c)
            .witness("tr(H)", &tr),
    );
    let scal_ext = Expr::int((n * (n - 1)) as i64) * &c + &eps * &(&tr * &tr - geo.metric().trace(&h2));
    let cert = certify_one("scal", &(geo.scal() - &scal_ext), dom)?;
    let mut r = CheckRecord::certified(scal_id, scal_anchor, cert)
        .witness("scal", geo.scal())
        .witness("scal (extrinsic)", &scal_ext);
    if r.outcome == Outcome::CertifiedNumeric {
        r = r.witness("note", "intrinsic and extrinsic scal agree numerically only");
    }
    out.push(r);
    Ok(out)
}
