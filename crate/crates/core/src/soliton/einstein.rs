use std::collections::BTreeMap;
use std::fmt;

use crate::certify::{certify, certify_one, sym_components, Certification};
use crate::riemann::{Geometry, OneForm, Tensor2};
use crate::symbolic::{solve_linear_symbolic, Expr, LinSolveError};

use super::SolitonError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EinsteinClass {
    Einstein,
    QuasiEinstein,
    AlmostQuasiEinstein,
    GeneralizedQuasiEinstein,
    MixedGeneralizedQuasiEinstein,
    PseudoQuasiEinstein,
    Unclassified,
}

impl EinsteinClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EinsteinClass::Einstein => "einstein",
            EinsteinClass::QuasiEinstein => "quasi-einstein",
            EinsteinClass::AlmostQuasiEinstein => "almost-quasi-einstein",
            EinsteinClass::GeneralizedQuasiEinstein => "generalized-quasi-einstein",
            EinsteinClass::MixedGeneralizedQuasiEinstein => "mixed-generalized-quasi-einstein",
            EinsteinClass::PseudoQuasiEinstein => "pseudo-quasi-einstein",
            EinsteinClass::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for EinsteinClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default)]
pub struct EinsteinCandidates<'a> {
    pub a: Option<&'a OneForm>,
    pub b: Option<&'a OneForm>,
    pub e: Option<&'a Tensor2>,
}

#[derive(Clone, Debug)]
pub struct EinsteinClassReport {
    pub class: EinsteinClass,
    /// Recovered coefficient functions by name (`alpha`, `beta`, ...).
    pub coefficients: BTreeMap<String, Expr>,
    /// Residual of the accepted decomposition, or of the last attempt.
    pub residual: Certification,
    /// Set when `tr_g E` was tested.
    pub trace: Option<Certification>,
    /// Set when both `A` and `B` were given.
    pub orthogonality: Option<Certification>,
    pub ricci_flat: bool,
}

struct Attempt {
    class: EinsteinClass,
    names: Vec<&'static str>,
    basis: Vec<Tensor2>,
}

/// Fit `target = Σ c_k basis_k` with the shared linear solver. The inner
/// `Err` carries the failing residual certificate.
pub(crate) fn fit_linear(geo: &Geometry, target: &Tensor2, basis: &[Tensor2]) -> Result<Result<(Vec<Expr>, Certification), Certification>, SolitonError> {
    let n = geo.dim();
    let dom = geo.chart().domain();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            rows.push((basis.iter().map(|t| t.0[i][j].clone()).collect(), target.0[i][j].clone()));
        }
    }
    match solve_linear_symbolic(&rows, basis.len(), dom) {
        Ok(sol) => {
            let p = sol.particular();
            let mut fit = Tensor2::zero(n);
            for (c, t) in p.iter().zip(basis) {
                fit = fit.add(&t.scale(c));
            }
            let cert = certify(sym_components(&target.sub(&fit), geo.chart().coords()), dom)?;
            if cert.passed() {
                Ok(Ok((p, cert)))
            } else {
                Ok(Err(cert))
            }
        }
        Err(LinSolveError::Inconsistent { row, residual, cert }) => Ok(Err(Certification {
            verdict: cert.verdict,
            samples: cert.samples,
            tol: cert.tol,
            max_abs: cert.max_abs,
            worst: Some((format!("row {row}"), residual)),
        })),
        Err(LinSolveError::Sample(e)) => Err(e.into()),
        Err(e) => Err(SolitonError::Evaluation(e.to_string())),
    }
}

fn try_decompose(geo: &Geometry, ric: &Tensor2, att: &Attempt) -> Result<Result<(BTreeMap<String, Expr>, Certification), Certification>, SolitonError> {
    Ok(fit_linear(geo, ric, &att.basis)?.map(|(p, cert)| (att.names.iter().map(|s| s.to_string()).zip(p).collect(), cert)))
}

/// Place `ric` in the quasi-Einstein taxonomy, most specific class first.
pub fn einstein_classify(geo: &Geometry, ric: &Tensor2, cand: &EinsteinCandidates) -> Result<EinsteinClassReport, SolitonError> {
    let dom = geo.chart().domain();
    let g = geo.metric().g().clone();
    let ricci_flat = certify(sym_components(ric, geo.chart().coords()), dom)?.passed();
    let orthogonality = match (cand.a, cand.b) {
        (Some(a), Some(b)) => {
            let ip = geo.metric().inner(&geo.metric().raise(a), &geo.metric().raise(b));
            Some(certify_one("g(A#, B#)", &ip, dom)?)
        }
        _ => None,
    };
    let mut attempts = vec![Attempt {
        class: EinsteinClass::Einstein,
        names: vec!["alpha"],
        basis: vec![g.clone()],
    }];
    if let Some(a) = cand.a {
        attempts.push(Attempt {
            class: EinsteinClass::QuasiEinstein,
            names: vec!["alpha", "beta"],
            basis: vec![g.clone(), a.tensor(a)],
        });
    }
    if let Some(b) = cand.b {
        attempts.push(Attempt {
            class: EinsteinClass::QuasiEinstein,
            names: vec!["alpha", "gamma"],
            basis: vec![g.clone(), b.tensor(b)],
        });
    }
    if let (Some(a), Some(b)) = (cand.a, cand.b) {
        attempts.push(Attempt {
            class: EinsteinClass::GeneralizedQuasiEinstein,
            names: vec!["alpha", "beta", "gamma"],
            basis: vec![g.clone(), a.tensor(a), b.tensor(b)],
        });
        attempts.push(Attempt {
            class: EinsteinClass::AlmostQuasiEinstein,
            names: vec!["alpha", "delta"],
            basis: vec![g.clone(), a.sym_product(b)],
        });
        attempts.push(Attempt {
            class: EinsteinClass::MixedGeneralizedQuasiEinstein,
            names: vec!["alpha", "beta", "gamma", "delta"],
            basis: vec![g.clone(), a.tensor(a), b.tensor(b), a.sym_product(b)],
        });
    }
    let mut trace = None;
    if let Some(e) = cand.e {
        trace = Some(certify_one("tr_g E", &geo.metric().trace(e), dom)?);
        let mut basis = vec![g.clone()];
        let mut names = vec!["alpha"];
        if let Some(a) = cand.a {
            basis.push(a.tensor(a));
            names.push("beta");
        }
        basis.push(e.clone());
        names.push("gamma");
        attempts.push(Attempt {
            class: EinsteinClass::PseudoQuasiEinstein,
            names,
            basis,
        });
    }
    let orth_ok = orthogonality.as_ref().is_none_or(|c| c.passed());
    let mut last = None;
    for att in &attempts {
        let needs_orth = matches!(
            att.class,
            EinsteinClass::GeneralizedQuasiEinstein | EinsteinClass::AlmostQuasiEinstein | EinsteinClass::MixedGeneralizedQuasiEinstein
        );
        if needs_orth && !orth_ok {
            continue;
        }
        if att.class == EinsteinClass::PseudoQuasiEinstein && !trace.as_ref().is_some_and(|c| c.passed()) {
            continue;
        }
        match try_decompose(geo, ric, att)? {
            Ok((coefficients, residual)) => {
                return Ok(EinsteinClassReport {
                    class: att.class,
                    coefficients,
                    residual,
                    trace,
                    orthogonality,
                    ricci_flat,
                })
            }
            Err(c) => last = Some(c),
        }
    }
    let residual = match last {
        Some(c) => c,
        None => certify(sym_components(ric, geo.chart().coords()), dom)?,
    };
    Ok(EinsteinClassReport {
        class: EinsteinClass::Unclassified,
        coefficients: BTreeMap::new(),
        residual,
        trace,
        orthogonality,
        ricci_flat,
    })
}
