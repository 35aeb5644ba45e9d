use std::sync::Arc;

use crate::certify::{certify, certify_one, sym_components, vec_components, CheckRecord, Outcome};
use crate::riemann::{Chart, Geometry, Metric, OneForm, Tensor2, VectorField};
use crate::soliton::{finish, half, solution_record, solve_eta_ricci, solve_eta_yamabe, solve_pair, SolitonKind, SolitonSolution};
use crate::symbolic::Expr;

use super::{induce_geometry, split_ambient_field, verify_gauss_equation, HypersurfaceError, Immersion, InducedGeometry};

/// `M -> S^{n+1}(1) -> E^{n+2}`: a hypersurface of a chart on the unit
/// sphere, which is itself given by an explicit map into Euclidean space.
#[derive(Debug, Clone)]
pub struct SphereChain {
    pub outer: Immersion,
    pub sphere: Arc<Geometry>,
    pub inner: Immersion,
    /// Certificate for `g_E = I` and `|Φ|^2 = 1`.
    pub chain: CheckRecord,
}

impl SphereChain {
    pub fn new(
        euclid: Arc<Geometry>,
        sphere_chart: Arc<Chart>,
        outer_map: Vec<Expr>,
        source: Arc<Chart>,
        inner_map: Vec<Expr>,
    ) -> Result<Self, HypersurfaceError> {
        let outer = Immersion::new(sphere_chart.clone(), euclid.clone(), outer_map)?;
        let m = euclid.dim();
        let ge = &euclid.metric().g().0;
        let mut comps = Vec::new();
        for a in 0..m {
            for b in a..m {
                let id = if a == b { Expr::one() } else { Expr::zero() };
                comps.push((format!("g_E[{a},{b}]"), outer.pullback(&ge[a][b]) - id));
            }
        }
        let r2: Expr = outer.map().iter().map(|x| x * x).sum();
        comps.push(("|Φ|^2 - 1".to_string(), r2 - Expr::one()));
        let cert = certify(comps, sphere_chart.domain())?;
        if !cert.passed() {
            let comp = cert.worst.as_ref().map(|w| w.0.clone()).unwrap_or_default();
            return Err(HypersurfaceError::ChainConstraint(format!(
                "outer map is not into the unit sphere of a Cartesian chart (component {comp})"
            )));
        }
        let chain = CheckRecord::certified("sphere.chain", "Φ maps into S^{n+1}(1) ⊂ E^{n+2}, N_S = position", cert);
        let sphere = Arc::new(Geometry::new(Metric::new(sphere_chart, outer.induced_metric())?));
        let inner = Immersion::new(source, sphere.clone(), inner_map)?;
        Ok(SphereChain {
            outer,
            sphere,
            inner,
            chain,
        })
    }
}

#[derive(Debug)]
pub struct SphereReport {
    pub induced: InducedGeometry,
    /// Tangential part of `V` on the sphere chart.
    pub xi: VectorField,
    /// `ϱ = <V, N_S>` on the sphere chart.
    pub varrho: Expr,
    pub u: VectorField,
    /// `δ = <V, N>` on the source chart.
    pub delta: Expr,
    pub eta: OneForm,
    pub ricci: Option<SolitonSolution>,
    pub yamabe: Option<SolitonSolution>,
    pub records: Vec<CheckRecord>,
}

fn agreement(id: &str, anchor: &str, identity: &Option<SolitonSolution>, direct: &Option<SolitonSolution>, geo: &Geometry) -> Result<CheckRecord, HypersurfaceError> {
    let dom = geo.chart().domain();
    let (Some(t), Some(d)) = (identity, direct) else {
        return Ok(CheckRecord::inapplicable(id, anchor, "one of the two solves has no solution"));
    };
    let mut comps = vec![("lambda".to_string(), &t.lambda - &d.lambda)];
    let mu_note = match (&t.mu, &d.mu) {
        (Some(a), Some(b)) => {
            comps.push(("mu".to_string(), a - b));
            "determined in both"
        }
        (None, None) => "undetermined in both",
        _ => {
            return Ok(CheckRecord::new(id, anchor, Outcome::Failed).witness("mu", "determined by only one of the solves"));
        }
    };
    Ok(CheckRecord::certified(id, anchor, certify(comps, dom)?)
        .witness("lambda", &t.lambda)
        .witness("mu", mu_note))
}

/// Torse-forming `V` on `E^{n+2}` with `DV = a I + ψ ⊗ V` (all in Euclidean
/// coordinates), analysed along `M ⊂ S^{n+1}(1)`.
pub fn sphere_hypersurface_analysis(chain: &SphereChain, v: &VectorField, a: &Expr, psi: &OneForm) -> Result<SphereReport, HypersurfaceError> {
    let outer = &chain.outer;
    let inner = &chain.inner;
    let mut records = vec![chain.chain.clone()];
    let ind = induce_geometry(inner)?;
    records.extend(ind.checks.iter().cloned());
    records.extend(verify_gauss_equation(inner, &ind, Some(&Expr::one()))?);

    let geo = &ind.geometry;
    let n = geo.dim();
    let dom = geo.chart().domain();
    let names = geo.chart().coords();
    let sphere_names = chain.sphere.chart().coords();
    let m = n + 1;

    // sphere level
    let v_s = outer.restrict(&v.0);
    let xi = outer.tangential(chain.sphere.metric(), &v_s);
    let varrho = outer.ambient_inner(&outer.ambient_metric(), &v_s, outer.map());
    let a_s = outer.pullback(a);
    let psi_s = outer.pullback_form(&psi.0);

    // hypersurface level
    let split = split_ambient_field(inner, &ind, &xi)?;
    let u = split.tangential.clone();
    let delta = split.rho.clone();
    let rho_m = inner.pullback(&varrho);
    let a_m = inner.pullback(&a_s);
    let psi_m = OneForm(inner.pullback_form(&psi_s));
    let xi_m = inner.restrict(&xi.0);
    let jac = inner.jacobian();

    // V = dΦ(dφ U + δ N) + ϱ Φ along M
    let w: Vec<Expr> = inner.push(&u).iter().zip(&ind.normal).map(|(p, nn)| p + &(&delta * nn)).collect();
    let v_m = inner.restrict(&v_s);
    let phi_m = inner.restrict(outer.map());
    let outer_jac: Vec<Vec<Expr>> = outer.jacobian().iter().map(|r| inner.restrict(r)).collect();
    let recon: Vec<Expr> = (0..v.0.len())
        .map(|e| {
            let t: Expr = (0..m).map(|al| &outer_jac[al][e] * &w[al]).sum();
            t + &rho_m * &phi_m[e] - &v_m[e]
        })
        .collect();
    records.push(
        CheckRecord::certified(
            "sphere.reconstruction",
            "V|_M = U + δN + ϱN_S",
            certify(vec_components(&recon, outer.ambient().chart().coords()), dom)?,
        )
        .witness("delta", &delta)
        .witness("varrho", &rho_m),
    );

    let ra = &rho_m - &a_m;
    let nabla_xi: Vec<Vec<Expr>> = chain.sphere.nabla_vector(&xi).iter().map(|r| inner.restrict(r)).collect();
    let mut comps = Vec::new();
    for i in 0..n {
        for b in 0..m {
            let d: Expr = (0..m).filter(|al| !jac[i][*al].is_zero()).map(|al| &jac[i][al] * &nabla_xi[al][b]).sum();
            let e = d + &ra * &jac[i][b] - &psi_m.0[i] * &xi_m[b];
            comps.push((format!("[{},{}]", names[i], sphere_names[b]), e));
        }
    }
    records.push(CheckRecord::certified(
        "sphere.xi-recurrence",
        "∇̄_X ξ + (ϱ - a)X = ψ(X)ξ",
        certify(comps, dom)?,
    ));

    let gs = inner.ambient_metric();
    let comps: Vec<(String, Expr)> = (0..n)
        .map(|i| {
            let e = rho_m.diff(&names[i]) - inner.ambient_inner(&gs, &jac[i], &xi_m) - &psi_m.0[i] * &rho_m;
            (format!("[{}]", names[i]), e)
        })
        .collect();
    records.push(CheckRecord::certified(
        "sphere.varrho-derivative",
        "X(ϱ) - g(X, ξ) = ψ(X)ϱ",
        certify(comps, dom)?,
    ));

    let h = &ind.second_fundamental;
    let nabla_u = geo.nabla_vector(&u);
    let res = Tensor2::from_fn(n, |i, j| {
        let id = if i == j { ra.clone() } else { Expr::zero() };
        &nabla_u[i][j] - &psi_m.0[i] * &u.0[j] + id - &delta * &ind.shape.0[j][i]
    });
    records.push(CheckRecord::certified(
        "sphere.nabla-u",
        "∇_X U = ψ(X)U - (ϱ - a)X + δB(X)",
        certify(res.labelled(names, false), dom)?,
    ));

    let hu = h.contract(&u);
    let comps: Vec<(String, Expr)> = (0..n)
        .map(|i| {
            let e = &psi_m.0[i] * &delta - &hu.0[i] - delta.diff(&names[i]);
            (format!("[{}]", names[i]), e)
        })
        .collect();
    records.push(CheckRecord::certified(
        "sphere.delta-derivative",
        "ψ(X)δ = g(B(X), U) + X(δ)",
        certify(comps, dom)?,
    ));

    let g = geo.metric().g().clone();
    let eta = geo.metric().lower(&u);
    let sym = psi_m.sym_product(&eta);
    let lie_model = sym.sub(&g.scale(&(Expr::int(2) * &ra))).add(&h.scale(&(Expr::int(2) * &delta)));
    records.push(CheckRecord::certified(
        "sphere.lie-u",
        "(£_U g)(X,Y) = ψ(X)g(U,Y) + ψ(Y)g(U,X) - 2(ϱ - a)g(X,Y) + 2δH(X,Y)",
        certify(sym_components(&geo.lie_derivative_metric(&u).sub(&lie_model), names), dom)?,
    ));

    let tr = ind.trace_h();
    let h2 = ind.h_squared();
    let half_sym = sym.scale(&half());
    let eta_opt = Some(&eta);

    // Ricci form of the sphere identity, solved for λ g + μ η⊗η
    let nm1 = Expr::int(n as i64 - 1);
    let t1 = h
        .scale(&(&tr + &delta))
        .add(&g.scale(&(&nm1 - &rho_m + &a_m)))
        .sub(&h2)
        .add(&half_sym);
    let zero = Tensor2::zero(n);
    let res = solve_pair(geo, SolitonKind::EtaRicci, &t1, &g, &zero, eta_opt).and_then(|(l, mu)| {
        let fit = g.scale(&l).add(&eta.tensor(&eta).scale(&mu.clone().unwrap_or_default()));
        finish(geo, SolitonKind::EtaRicci, l, mu, t1.sub(&fit))
    });
    let anchor_i = "H^2 = (tr H + δ)H + (n - 1 - ϱ - λ + a)g - μη⊗η + 1/2[ψ(X)g(U,Y) + ψ(Y)g(U,X)]";
    let (rec, ricci) = solution_record("sphere.soliton-ricci", anchor_i, res)?;
    records.push(rec);
    let (rec, direct) = solution_record(
        "sphere.soliton-ricci.direct",
        "1/2 £_U g + Ric = λ g + μ η⊗η",
        solve_eta_ricci(geo, &u, eta_opt),
    )?;
    records.push(rec);
    records.push(agreement(
        "sphere.soliton-ricci.agreement",
        "(λ, μ) from the sphere identity equal the direct η-Ricci solve",
        &ricci,
        &direct,
        geo,
    )?);

    // Yamabe form: δH + 1/2 sym = -λ g + μ η⊗η + C g
    let c = Expr::int((n * (n - 1)) as i64) + &tr * &tr - geo.metric().trace(&h2) + &rho_m - &a_m;
    let lhs = h.scale(&delta).add(&half_sym);
    let neg_g = g.scale(&Expr::int(-1));
    let cg = g.scale(&c);
    let res = solve_pair(geo, SolitonKind::EtaYamabe, &lhs, &neg_g, &cg, eta_opt).and_then(|(l, mu)| {
        let fit = neg_g
            .scale(&l)
            .add(&eta.tensor(&eta).scale(&mu.clone().unwrap_or_default()))
            .add(&cg);
        finish(geo, SolitonKind::EtaYamabe, l, mu, lhs.sub(&fit))
    });
    let anchor_ii = "δH = (n(n-1) + (tr H)^2 - tr(H^2) + ϱ - λ - a)g + μη⊗η - 1/2[ψ(X)g(U,Y) + ψ(Y)g(U,X)]";
    let (rec, yamabe) = solution_record("sphere.soliton-yamabe", anchor_ii, res)?;
    records.push(rec);
    let (rec, direct) = solution_record(
        "sphere.soliton-yamabe.direct",
        "1/2 £_U g = (scal - λ) g + μ η⊗η",
        solve_eta_yamabe(geo, &u, eta_opt),
    )?;
    records.push(rec);
    records.push(agreement(
        "sphere.soliton-yamabe.agreement",
        "(λ, μ) from the sphere identity equal the direct η-Yamabe solve",
        &yamabe,
        &direct,
        geo,
    )?);

    let pq_id = "sphere.pseudo-quasi-umbilical";
    let pq_anchor = "H = αg + βη⊗η + E, tr E = 0";
    match &yamabe {
        Some(s) if dom.nonvanishing(&delta)? => {
            let inv = delta.recip();
            let nf = Expr::frac(1, n as i64);
            let pu = psi_m.apply(&u);
            let alpha = &(&c - &s.lambda - &(&pu * &nf)) * &inv;
            let beta = &s.mu_or_zero() * &inv;
            let e = sym
                .sub(&g.scale(&(Expr::int(2) * &pu * &nf)))
                .scale(&(&inv * &Expr::frac(-1, 2)));
            let trace = certify_one("tr_g E", &geo.metric().trace(&e), dom)?;
            let fit = g.scale(&alpha).add(&eta.tensor(&eta).scale(&beta)).add(&e);
            let mut comps = sym_components(&h.sub(&fit), names);
            comps.push(("tr_g E".into(), geo.metric().trace(&e)));
            let mut r = CheckRecord::certified(pq_id, pq_anchor, certify(comps, dom)?)
                .witness("alpha", &alpha)
                .witness("beta", &beta);
            if !trace.passed() {
                r.outcome = Outcome::Failed;
            }
            records.push(r);
        }
        Some(_) => records.push(CheckRecord::inapplicable(pq_id, pq_anchor, "δ vanishes somewhere on the domain")),
        None => records.push(CheckRecord::inapplicable(pq_id, pq_anchor, "no η-Yamabe solution")),
    }

    Ok(SphereReport {
        induced: ind,
        xi,
        varrho,
        u,
        delta,
        eta,
        ricci,
        yamabe,
        records,
    })
}
