//! Command dispatch: each command turns resolved documents into check records.

use soliton_core::certify::{certify, certify_one, CheckRecord, Outcome};
use soliton_core::hypersurface::{
    certify_constant_curvature, induce_geometry, sphere_hypersurface_analysis, solve_submanifold_soliton, split_ambient_field, umbilical_classify,
    verify_gauss_equation, verify_quasi_umbilical_proposition, HypersurfaceError, UmbilicalCandidates,
};
use soliton_core::riemann::{gram, tensor_on_frame, verify_curvature_identities, Geometry, OneForm, VectorField};
use soliton_core::soliton::{
    check_gradient_potential, classify_vector_field, einstein_classify, fmt_form, solution_record, solve_eta_ricci,
    solve_eta_yamabe, verify_concircular_identities, verify_hessian_torse_forming, verify_proposition_p,
    verify_torqued_structure, verify_yamabe_identities, EinsteinCandidates, EinsteinClass, EinsteinClassReport, SolitonError,
    SolitonKind, TorseFormingDecomposition,
};
use soliton_core::symbolic::Expr;

use crate::model::{InputError, Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Curvature,
    ClassifyVector,
    SolveRicci,
    SolveYamabe,
    CheckGradient,
    ClassifyEinstein,
    VerifyIdentities,
    Hypersurface,
    SphereHypersurface,
    VerifyAll,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Curvature => "curvature",
            Command::ClassifyVector => "classify-vector",
            Command::SolveRicci => "solve ricci",
            Command::SolveYamabe => "solve yamabe",
            Command::CheckGradient => "check gradient",
            Command::ClassifyEinstein => "classify einstein",
            Command::VerifyIdentities => "verify identities",
            Command::Hypersurface => "hypersurface",
            Command::SphereHypersurface => "sphere-hypersurface",
            Command::VerifyAll => "verify all",
        }
    }
}

/// Names of document objects selected by flags.
#[derive(Clone, Debug, Default)]
pub struct Selection {
    pub vector: Option<String>,
    pub eta: Option<String>,
    pub function: Option<String>,
    pub form_a: Option<String>,
    pub form_b: Option<String>,
    pub tensor: Option<String>,
    pub ambient_vector: Option<String>,
    pub frame: Option<String>,
    pub weyl: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Engine(String),
}

impl From<SolitonError> for CommandError {
    fn from(e: SolitonError) -> Self {
        CommandError::Engine(e.to_string())
    }
}

impl From<HypersurfaceError> for CommandError {
    fn from(e: HypersurfaceError) -> Self {
        CommandError::Engine(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Input(InputError::Usage(msg.into()))
}

fn sample(e: impl std::fmt::Display) -> CommandError {
    CommandError::Engine(e.to_string())
}

/// Records for one document, in emission order.
pub fn run(cmd: Command, model: &Model, sel: &Selection) -> Result<Vec<CheckRecord>, CommandError> {
    match cmd {
        Command::Curvature => curvature(model, sel),
        Command::ClassifyVector => {
            let v = required_vector(model, sel)?;
            let d = classify_vector_field(&model.geometry, &v)?;
            Ok(vec![torse_record("vector.torse-forming", &model.geometry, &d)])
        }
        Command::SolveRicci | Command::SolveYamabe => {
            let v = required_vector(model, sel)?;
            let eta = optional_form(model, sel.eta.as_deref())?;
            Ok(vec![solve(&model.geometry, &v, eta.as_ref(), cmd == Command::SolveYamabe)?])
        }
        Command::CheckGradient => {
            let v = required_vector(model, sel)?;
            let f = sel.function.as_deref().map(|f| model.function(f)).transpose()?;
            Ok(vec![check_gradient_potential(&model.geometry, &v, f.as_ref())?])
        }
        Command::ClassifyEinstein => {
            let a = optional_form(model, sel.form_a.as_deref().or(sel.eta.as_deref()))?;
            let b = optional_form(model, sel.form_b.as_deref())?;
            let e = sel.tensor.as_deref().map(|t| model.tensor(t)).transpose()?;
            let geo = &model.geometry;
            let rep = einstein_classify(geo, geo.ricci(), &EinsteinCandidates { a: a.as_ref(), b: b.as_ref(), e: e.as_ref() })?;
            Ok(vec![einstein_record("einstein.class", &rep)])
        }
        Command::VerifyIdentities => identities(model, sel),
        Command::Hypersurface => hypersurface(model, sel),
        Command::SphereHypersurface => sphere(model, sel),
        Command::VerifyAll => {
            let mut out = curvature(model, sel)?;
            if sel.vector.is_some() {
                out.extend(identities(model, sel)?);
            }
            let a = optional_form(model, sel.eta.as_deref())?;
            let geo = &model.geometry;
            let rep = einstein_classify(geo, geo.ricci(), &EinsteinCandidates { a: a.as_ref(), b: None, e: None })?;
            out.push(einstein_record("einstein.class", &rep));
            if let Some(emb) = &model.immersion {
                if emb.target.immersion.is_some() && sel.ambient_vector.is_some() {
                    out.extend(sphere(model, sel)?);
                } else {
                    out.extend(hypersurface(model, sel)?);
                }
            }
            Ok(out)
        }
    }
}

fn required_vector(model: &Model, sel: &Selection) -> Result<VectorField, CommandError> {
    let name = sel.vector.as_deref().ok_or_else(|| usage("this command needs --vector NAME"))?;
    Ok(model.vector(name)?)
}

fn optional_form(model: &Model, name: Option<&str>) -> Result<Option<OneForm>, CommandError> {
    Ok(name.map(|n| model.form(n)).transpose()?)
}

fn torse_record(id: &str, geo: &Geometry, d: &TorseFormingDecomposition) -> CheckRecord {
    let names = geo.chart().coords();
    let mut r = CheckRecord::certified(id, "∇_X V = aX + ψ(X)V", d.residual.clone()).witness("class", d.class);
    if d.is_torse_forming() {
        r = r.witness("a", &d.a).witness("psi", fmt_form(&d.psi, names));
        let sat: Vec<&str> = d.satisfied.iter().map(|c| c.as_str()).collect();
        r = r.witness("satisfied", sat.join(","));
    }
    if d.partial_pivot {
        r = r.witness("note", "pivot component of V vanishes at some sample points");
    }
    r
}

fn einstein_record(id: &str, rep: &EinsteinClassReport) -> CheckRecord {
    let mut r = CheckRecord::certified(id, "Ric = αg + βA⊗A + γ(A⊗B + B⊗A) + δB⊗B + E", rep.residual.clone())
        .witness("class", rep.class);
    if rep.class == EinsteinClass::Unclassified {
        r.outcome = Outcome::Undetermined("no decomposition over the given candidates".into());
    }
    for (k, v) in &rep.coefficients {
        r = r.witness(k, v);
    }
    if rep.ricci_flat {
        r = r.witness("ricci-flat", "true");
    }
    r
}

fn solve(geo: &Geometry, v: &VectorField, eta: Option<&OneForm>, yamabe: bool) -> Result<CheckRecord, CommandError> {
    let (rec, _) = if yamabe {
        solution_record("soliton.yamabe", "1/2 £_V g = (scal - λ) g + μ η⊗η", solve_eta_yamabe(geo, v, eta))?
    } else {
        solution_record("soliton.ricci", "1/2 £_V g + Ric = λ g + μ η⊗η", solve_eta_ricci(geo, v, eta))?
    };
    Ok(if yamabe { rec.witness("scal", geo.scal()) } else { rec })
}

fn curvature(model: &Model, sel: &Selection) -> Result<Vec<CheckRecord>, CommandError> {
    let geo = &model.geometry;
    let dom = geo.chart().domain();
    let names = geo.chart().coords();
    let n = geo.dim();
    let mut out = verify_curvature_identities(geo).map_err(sample)?;

    let tr = geo.metric().trace(geo.ricci());
    let mut r = CheckRecord::certified("curvature.scalar", "scal = g^{ij} R_ij", certify_one("scal", &(geo.scal() - &tr), dom).map_err(sample)?)
        .witness("scal", geo.scal())
        .witness("signature", geo.metric().signature());
    for i in 0..n {
        for j in i..n {
            let e = &geo.ricci().0[i][j];
            if !e.is_zero() {
                r = r.witness(&format!("Ric[{},{}]", names[i], names[j]), e);
            }
        }
    }
    out.push(r);

    if let Some(fname) = &sel.frame {
        let frame = model.frame(fname)?;
        let fields: Vec<VectorField> = frame.iter().map(|(_, v)| v.clone()).collect();
        let gm = gram(geo.metric(), &fields);
        let p0 = dom.points().first().cloned().unwrap_or_default();
        let mut comps = Vec::new();
        for a in 0..n {
            let s = gm[a][a].eval(&p0).map(f64::signum).unwrap_or(1.0);
            for b in a..n {
                let target = if a == b { Expr::int(s as i64) } else { Expr::zero() };
                comps.push((format!("g({},{})", frame[a].0, frame[b].0), &gm[a][b] - &target));
            }
        }
        let cert = certify(comps, dom).map_err(sample)?;
        let ric = tensor_on_frame(geo.ricci(), &fields);
        let mut r = CheckRecord::certified("frame.orthonormal", "g(E_a, E_b) = ±δ_ab", cert).witness("frame", fname);
        for a in 0..n {
            for b in a..n {
                if a == b || !ric[a][b].is_zero() {
                    r = r.witness(&format!("Ric({},{})", frame[a].0, frame[b].0), &ric[a][b]);
                }
            }
        }
        out.push(r);
    }

    if sel.weyl {
        let id = "curvature.weyl";
        let anchor = "g^{ac} W_abcd = 0";
        match geo.weyl() {
            None => out.push(CheckRecord::inapplicable(id, anchor, "the Weyl tensor is defined here for n >= 4")),
            Some(w) => {
                let ginv = &geo.metric().inv().0;
                let mut traces = Vec::new();
                let mut all = Vec::new();
                for b in 0..n {
                    for d in 0..n {
                        let mut s = Expr::zero();
                        for a in 0..n {
                            for c in 0..n {
                                s = &s + &(&ginv[a][c] * &w[a][b][c][d]);
                            }
                        }
                        traces.push((format!("[{},{}]", names[b], names[d]), s));
                        for a in 0..n {
                            for c in 0..n {
                                all.push((format!("[{},{},{},{}]", names[a], names[b], names[c], names[d]), w[a][b][c][d].clone()));
                            }
                        }
                    }
                }
                let flat = certify(all, dom).map_err(sample)?.passed();
                out.push(
                    CheckRecord::certified(id, anchor, certify(traces, dom).map_err(sample)?)
                        .witness("conformally-flat", if flat { "yes" } else { "no" }),
                );
            }
        }
    }
    Ok(out)
}

fn identities(model: &Model, sel: &Selection) -> Result<Vec<CheckRecord>, CommandError> {
    let geo = &model.geometry;
    let n = geo.dim();
    let v = required_vector(model, sel)?;
    let eta = optional_form(model, sel.eta.as_deref())?;
    let eta_or_zero = eta.clone().unwrap_or_else(|| OneForm::zero(n));
    let d = classify_vector_field(geo, &v)?;
    let mut out = vec![torse_record("vector.torse-forming", geo, &d)];
    out.extend(verify_concircular_identities(geo, &v, &d)?);

    let (ric_rec, ric) = solution_record("soliton.ricci", "1/2 £_V g + Ric = λ g + μ η⊗η", solve_eta_ricci(geo, &v, eta.as_ref()))?;
    out.push(ric_rec);
    match &ric {
        Some(sol) if d.is_torse_forming() => {
            out.extend(verify_proposition_p(geo, &v, &eta_or_zero, &d, sol)?);
            out.extend(verify_torqued_structure(geo, &v, &eta_or_zero, &d, sol)?);
        }
        _ => out.push(CheckRecord::inapplicable(
            "soliton.ricci.identities",
            "identities for η-Ricci solitons with torse-forming potential",
            "no torse-forming η-Ricci soliton to substitute",
        )),
    }

    let (yam_rec, yam) = solution_record("soliton.yamabe", "1/2 £_V g = (scal - λ) g + μ η⊗η", solve_eta_yamabe(geo, &v, eta.as_ref()))?;
    out.push(yam_rec.witness("scal", geo.scal()));
    match &yam {
        Some(sol) if d.is_torse_forming() => out.extend(verify_yamabe_identities(geo, &v, &eta_or_zero, &d, sol)?),
        _ => out.push(CheckRecord::inapplicable(
            "soliton.yamabe.identities",
            "identities for η-Yamabe solitons with torse-forming potential",
            "no torse-forming η-Yamabe soliton to substitute",
        )),
    }

    if let Some(f) = sel.function.as_deref().map(|f| model.function(f)).transpose()? {
        out.push(check_gradient_potential(geo, &v, Some(&f))?);
        match verify_hessian_torse_forming(geo, &f, None, None) {
            Ok(rs) => out.extend(rs),
            Err(SolitonError::Precondition(why)) => {
                out.push(CheckRecord::inapplicable("hessian.torse-forming", "Hess σ = a g + δ dσ⊗dσ", why))
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn ambient_field(model: &Model, sel: &Selection) -> Result<Option<VectorField>, CommandError> {
    match &sel.ambient_vector {
        Some(name) => Ok(Some(model.vector(name)?)),
        None => Ok(None),
    }
}

fn hypersurface(model: &Model, sel: &Selection) -> Result<Vec<CheckRecord>, CommandError> {
    let emb = model.embedding()?;
    let imm = &emb.immersion;
    let ambient = &emb.target;
    let ind = induce_geometry(imm)?;
    let mut out = ind.checks.clone();
    let (_, c) = certify_constant_curvature(imm.ambient(), None)?;
    out.extend(verify_gauss_equation(imm, &ind, c.as_ref())?);

    let Some(v) = ambient_field(ambient, sel)? else {
        let u = umbilical_classify(&ind, &UmbilicalCandidates::default())?;
        out.push(u.record());
        return Ok(out);
    };
    let geo_amb = &ambient.geometry;
    let d = classify_vector_field(geo_amb, &v)?;
    out.push(torse_record("ambient.torse-forming", geo_amb, &d));
    let split = split_ambient_field(imm, &ind, &v)?;
    out.push(split.reconstruction.clone().witness("rho", &split.rho));
    let eta = ind.geometry.metric().lower(&split.tangential);
    let cand = UmbilicalCandidates {
        varpi: (!split.tangential.is_zero()).then_some(&eta),
        eta: None,
    };
    out.push(umbilical_classify(&ind, &cand)?.record());

    if !d.is_torse_forming() {
        out.push(CheckRecord::inapplicable(
            "submanifold",
            "soliton with potential V^T",
            "ambient field is not torse-forming",
        ));
        return Ok(out);
    }
    for kind in [SolitonKind::EtaRicci, SolitonKind::EtaYamabe] {
        let rep = solve_submanifold_soliton(imm, &ind, &split, &d.a, &d.psi, kind, c.as_ref())?;
        out.extend(rep.records.iter().cloned());
        if kind == SolitonKind::EtaRicci {
            match &rep.solution {
                Some(sol) => {
                    let geo = &ind.geometry;
                    let ric = einstein_classify(geo, geo.ricci(), &EinsteinCandidates { a: Some(&rep.eta), b: None, e: None })?;
                    out.push(verify_quasi_umbilical_proposition(imm, &ind, &split, &d.a, &d.psi, sol, &ric)?);
                }
                None => out.push(CheckRecord::inapplicable(
                    "umbilical.proposition",
                    "H = (λ - a - α)/ρ g + (μ - β)/ρ η⊗η",
                    "no η-Ricci soliton on the hypersurface",
                )),
            }
        }
    }
    Ok(out)
}

fn sphere(model: &Model, sel: &Selection) -> Result<Vec<CheckRecord>, CommandError> {
    let chain = model.sphere_chain()?;
    let root = model.root();
    let name = sel
        .ambient_vector
        .as_deref()
        .ok_or_else(|| usage("sphere-hypersurface needs --ambient-vector NAME (a field on the Euclidean document)"))?;
    let v = root.vector(name)?;
    let d = classify_vector_field(&root.geometry, &v)?;
    let mut out = vec![torse_record("ambient.torse-forming", &root.geometry, &d)];
    if !d.is_torse_forming() {
        out.push(CheckRecord::inapplicable("sphere", "sphere hypersurface analysis", "ambient field is not torse-forming"));
        return Ok(out);
    }
    let rep = sphere_hypersurface_analysis(&chain, &v, &d.a, &d.psi)?;
    out.extend(rep.records.iter().cloned());
    out.push(umbilical_classify(&rep.induced, &UmbilicalCandidates::default())?.record());
    Ok(out)
}
