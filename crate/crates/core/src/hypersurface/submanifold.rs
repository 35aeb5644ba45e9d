use crate::certify::{certify, certify_one, sym_components, vec_components, CheckRecord};
use crate::riemann::OneForm;
use crate::soliton::{half, solution_record, solve_eta_ricci, solve_eta_yamabe, SolitonKind, SolitonSolution};
use crate::symbolic::Expr;

use super::{AmbientSplit, HypersurfaceError, Immersion, InducedGeometry};

#[derive(Debug, Clone)]
pub struct SubmanifoldReport {
    pub kind: SolitonKind,
    /// `η = (V^T)♭`.
    pub eta: OneForm,
    pub solution: Option<SolitonSolution>,
    pub records: Vec<CheckRecord>,
}

/// Soliton with potential `V^T` on a hypersurface, for an ambient
/// torse-forming `V` with `∇̃V = a I + ψ ⊗ V`. `a` and `ψ` are given in
/// ambient coordinates; `c` is a certified ambient constant curvature, if any.
pub fn solve_submanifold_soliton(
    imm: &Immersion,
    ind: &InducedGeometry,
    split: &AmbientSplit,
    a: &Expr,
    psi: &OneForm,
    kind: SolitonKind,
    c: Option<&Expr>,
) -> Result<SubmanifoldReport, HypersurfaceError> {
    let geo = &ind.geometry;
    let n = geo.dim();
    let dom = geo.chart().domain();
    let names = geo.chart().coords();
    let g = geo.metric().g().clone();
    let h = &ind.second_fundamental;
    let a = imm.pullback(a);
    let psi = OneForm(imm.pullback_form(&psi.0));
    let vt = &split.tangential;
    let eta = geo.metric().lower(vt);
    // ρ H enters through g̃(h(X,Y), V⊥) = ρ H(X,Y) / g̃(N,N)
    let rho = &split.rho * &Expr::int(ind.normal_sign);
    let rho_h = h.scale(&rho);
    let sym = psi.sym_product(&eta).scale(&half());
    let ricci = matches!(kind, SolitonKind::EtaRicci | SolitonKind::Ricci);
    let prefix = if ricci { "submanifold.ricci" } else { "submanifold.yamabe" };
    let id = |s: &str| format!("{prefix}.{s}");
    let mut records = Vec::new();

    let lie = geo.lie_derivative_metric(vt).scale(&half());
    let model = g.scale(&a).add(&rho_h).add(&sym);
    records.push(CheckRecord::certified(
        id("lie-derivative"),
        "1/2 £_{V^T} g = a g + g̃(h, V⊥) + 1/2(ψ⊗η + η⊗ψ)",
        certify(sym_components(&lie.sub(&model), names), dom)?,
    ));

    let eta_arg = matches!(kind, SolitonKind::EtaRicci | SolitonKind::EtaYamabe).then_some(&eta);
    let (rec, solution) = if ricci {
        solution_record(
            &id("soliton"),
            "1/2 £_{V^T} g + Ric = λ g + μ η⊗η",
            solve_eta_ricci(geo, vt, eta_arg),
        )?
    } else {
        solution_record(
            &id("soliton"),
            "1/2 £_{V^T} g = (scal - λ) g + μ η⊗η",
            solve_eta_yamabe(geo, vt, eta_arg),
        )?
    };
    records.push(rec);
    let pair = solution.as_ref().map(|s| (s.lambda.clone(), s.mu_or_zero()));
    let eta2 = eta.tensor(&eta);
    let eps = Expr::int(ind.normal_sign);
    let tr = ind.trace_h();
    let h2 = ind.h_squared();

    let (form_id, form_anchor, hs_id, hs_anchor) = if ricci {
        (
            id("form"),
            "Ric = (λ - a) g - ρH + μ η⊗η - 1/2(ψ⊗η + η⊗ψ)",
            id("hypersurface"),
            "H^2 = (ρ + tr H) H + ((n-1)c - λ + a) g - μ η⊗η + 1/2(ψ⊗η + η⊗ψ)",
        )
    } else {
        (
            id("form"),
            "(scal - λ - a) g - ρH + μ η⊗η - 1/2(ψ⊗η + η⊗ψ) = 0",
            id("hypersurface"),
            "ρH = (n(n-1)c + (tr H)^2 - tr(H^2) - λ - a) g + μ η⊗η - 1/2(ψ⊗η + η⊗ψ)",
        )
    };
    let Some((lambda, mu)) = pair else {
        let reason = "no soliton solution to substitute";
        records.push(CheckRecord::inapplicable(&form_id, form_anchor, reason));
        records.push(CheckRecord::inapplicable(&hs_id, hs_anchor, reason));
        records.push(CheckRecord::inapplicable(id("minimal-scal"), "minimal case scal identity", reason));
        return Ok(SubmanifoldReport {
            kind,
            eta,
            solution,
            records,
        });
    };

    let res = if ricci {
        geo.ricci()
            .sub(&g.scale(&(&lambda - &a)))
            .add(&rho_h)
            .sub(&eta2.scale(&mu))
            .add(&sym)
    } else {
        g.scale(&(geo.scal() - &lambda - &a)).sub(&rho_h).add(&eta2.scale(&mu)).sub(&sym)
    };
    records.push(CheckRecord::certified(&form_id, form_anchor, certify(sym_components(&res, names), dom)?));

    match c {
        Some(c) => {
            let c = imm.pullback(c);
            let nm1 = Expr::int(n as i64 - 1);
            let res = if ricci {
                // ε H^2 = ε tr(H) H + ρ' H + ((n-1)c - λ + a) g - μ η⊗η + sym
                h2.scale(&eps)
                    .sub(&h.scale(&(&eps * &tr + &rho)))
                    .sub(&g.scale(&(&nm1 * &c - &lambda + &a)))
                    .add(&eta2.scale(&mu))
                    .sub(&sym)
            } else {
                let k = Expr::int((n * (n - 1)) as i64) * &c + &eps * &(&tr * &tr - geo.metric().trace(&h2));
                rho_h
                    .sub(&g.scale(&(k - &lambda - &a)))
                    .sub(&eta2.scale(&mu))
                    .add(&sym)
            };
            records.push(
                CheckRecord::certified(&hs_id, hs_anchor, certify(sym_components(&res, names), dom)?).witness("c", &c),
            );
        }
        None => records.push(CheckRecord::inapplicable(
            &hs_id,
            hs_anchor,
            "ambient is not of certified constant curvature",
        )),
    }

    let minimal = dom.zero_test(&tr)?.verdict.is_zero();
    let concircular = certify(vec_components(&psi.0, names), dom)?.passed();
    let (min_anchor, min_res) = if ricci {
        (
            "minimal and concircular: scal = n(λ - a) + μ|V^T|^2",
            geo.scal() - Expr::int(n as i64) * &(&lambda - &a) - &mu * &geo.metric().norm_sq(vt),
        )
    } else {
        (
            "minimal and concircular: scal = λ + a - μ|V^T|^2 / n",
            geo.scal() - &lambda - &a + &mu * &geo.metric().norm_sq(vt) * &Expr::frac(1, n as i64),
        )
    };
    if minimal && concircular {
        records.push(CheckRecord::certified(
            id("minimal-scal"),
            min_anchor,
            certify_one("scal", &min_res, dom)?,
        ));
    } else {
        let why = if minimal { "V is not concircular" } else { "hypersurface is not minimal" };
        records.push(CheckRecord::inapplicable(id("minimal-scal"), min_anchor, why));
    }
    Ok(SubmanifoldReport {
        kind,
        eta,
        solution,
        records,
    })
}
