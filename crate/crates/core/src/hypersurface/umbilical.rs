use std::collections::BTreeMap;
use std::fmt;

use crate::certify::{certify, certify_one, sym_components, vec_components, Certification, CheckRecord, Outcome};
use crate::riemann::{OneForm, Tensor2};
use crate::soliton::{fit_linear, EinsteinClass, EinsteinClassReport, SolitonSolution};
use crate::symbolic::Expr;

use super::{AmbientSplit, HypersurfaceError, Immersion, InducedGeometry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UmbilicClass {
    TotallyUmbilical,
    QuasiUmbilical,
    TwoQuasiUmbilical,
    PseudoQuasiUmbilical,
    Unclassified,
}

impl UmbilicClass {
    pub fn as_str(self) -> &'static str {
        match self {
            UmbilicClass::TotallyUmbilical => "totally-umbilical",
            UmbilicClass::QuasiUmbilical => "quasi-umbilical",
            UmbilicClass::TwoQuasiUmbilical => "2-quasi-umbilical",
            UmbilicClass::PseudoQuasiUmbilical => "pseudo-quasi-umbilical",
            UmbilicClass::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for UmbilicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default)]
pub struct UmbilicalCandidates<'a> {
    pub varpi: Option<&'a OneForm>,
    pub eta: Option<&'a OneForm>,
}

#[derive(Clone, Debug)]
pub struct UmbilicalReport {
    pub class: UmbilicClass,
    pub coefficients: BTreeMap<String, Expr>,
    pub residual: Certification,
    pub orthogonality: Option<Certification>,
    /// Trace-free remainder `E` of the pseudo decomposition.
    pub remainder: Option<Tensor2>,
    /// `tr_g E` certificate.
    pub trace: Option<Certification>,
}

impl UmbilicalReport {
    pub fn record(&self) -> CheckRecord {
        let mut r = CheckRecord::certified(
            "umbilical.class",
            "H = αg + βϖ⊗ϖ + γη⊗η, or αg + βϖ⊗ϖ + E with tr E = 0",
            self.residual.clone(),
        );
        if self.class == UmbilicClass::Unclassified {
            r.outcome = Outcome::Undetermined("no decomposition over the given candidates".into());
        }
        r = r.witness("class", self.class);
        for (k, v) in &self.coefficients {
            r = r.witness(k, v);
        }
        if let Some(t) = &self.trace {
            r = r.witness("tr E", t.verdict.as_str());
        }
        r
    }
}

/// Decompose the second fundamental tensor, most specific class first.
pub fn umbilical_classify(ind: &InducedGeometry, cand: &UmbilicalCandidates) -> Result<UmbilicalReport, HypersurfaceError> {
    let geo = &ind.geometry;
    let n = geo.dim();
    let dom = geo.chart().domain();
    let names = geo.chart().coords();
    let metric = geo.metric();
    let g = metric.g().clone();
    let h = &ind.second_fundamental;
    let orthogonality = match (cand.varpi, cand.eta) {
        (Some(w), Some(e)) => Some(certify_one("g(ϖ#, η#)", &metric.inner(&metric.raise(w), &metric.raise(e)), dom)?),
        _ => None,
    };
    let mut attempts: Vec<(UmbilicClass, Vec<&str>, Vec<Tensor2>)> = vec![(UmbilicClass::TotallyUmbilical, vec!["alpha"], vec![g.clone()])];
    if let Some(w) = cand.varpi {
        attempts.push((UmbilicClass::QuasiUmbilical, vec!["alpha", "beta"], vec![g.clone(), w.tensor(w)]));
    }
    if let Some(e) = cand.eta {
        attempts.push((UmbilicClass::QuasiUmbilical, vec!["alpha", "gamma"], vec![g.clone(), e.tensor(e)]));
    }
    if let (Some(w), Some(e)) = (cand.varpi, cand.eta) {
        if orthogonality.as_ref().is_some_and(|c| c.passed()) {
            attempts.push((
                UmbilicClass::TwoQuasiUmbilical,
                vec!["alpha", "beta", "gamma"],
                vec![g.clone(), w.tensor(w), e.tensor(e)],
            ));
        }
    }
    let mut last = None;
    for (class, keys, basis) in &attempts {
        match fit_linear(geo, h, basis)? {
            Ok((coeffs, residual)) => {
                return Ok(UmbilicalReport {
                    class: *class,
                    coefficients: keys.iter().map(|k| k.to_string()).zip(coeffs).collect(),
                    residual,
                    orthogonality,
                    remainder: None,
                    trace: None,
                })
            }
            Err(c) => last = Some(c),
        }
    }

    // Pseudo decomposition. Any H splits as αg + βϖ⊗ϖ + E with tr E = 0, so
    // β is pinned by additionally requiring E(ϖ#, ϖ#) = 0.
    let tr = metric.trace(h);
    let form = cand.varpi.or(cand.eta);
    let (alpha, beta) = match form {
        Some(w) if dom.nonvanishing(&metric.norm_sq(&metric.raise(w)))? => {
            let wv = metric.raise(w);
            let w2 = metric.norm_sq(&wv);
            let hww = &h.apply(&wv, &wv) * &w2.recip();
            let nm1 = Expr::frac(1, n as i64 - 1);
            let alpha = &(&tr - &hww) * &nm1;
            let beta = &(&(Expr::int(n as i64) * &hww) - &tr) * &(&nm1 * &w2.recip());
            (alpha, Some(beta))
        }
        _ => (&tr * &Expr::frac(1, n as i64), None),
    };
    let mut fit = g.scale(&alpha);
    let mut coefficients = BTreeMap::from([("alpha".to_string(), alpha)]);
    if let (Some(w), Some(b)) = (form, beta) {
        fit = fit.add(&w.tensor(w).scale(&b));
        coefficients.insert("beta".into(), b);
    }
    let e = h.sub(&fit);
    let trace = certify_one("tr_g E", &metric.trace(&e), dom)?;
    if trace.passed() {
        let residual = certify(sym_components(&h.sub(&fit).sub(&e), names), dom)?;
        return Ok(UmbilicalReport {
            class: UmbilicClass::PseudoQuasiUmbilical,
            coefficients,
            residual,
            orthogonality,
            remainder: Some(e),
            trace: Some(trace),
        });
    }
    Ok(UmbilicalReport {
        class: UmbilicClass::Unclassified,
        coefficients: BTreeMap::new(),
        residual: last.unwrap_or(trace.clone()),
        orthogonality,
        remainder: None,
        trace: Some(trace),
    })
}

/// For concircular `V` and `Ric = αg + βη⊗η`, an η-Ricci soliton `(V^T, λ, μ)`
/// forces `H = (λ - a - α)/ρ g + (μ - β)/ρ η⊗η`.
pub fn verify_quasi_umbilical_proposition(
    imm: &Immersion,
    ind: &InducedGeometry,
    split: &AmbientSplit,
    a: &Expr,
    psi: &OneForm,
    sol: &SolitonSolution,
    ric: &EinsteinClassReport,
) -> Result<CheckRecord, HypersurfaceError> {
    let id = "umbilical.proposition";
    let anchor = "H = (λ - a - α)/ρ g + (μ - β)/ρ η⊗η";
    let geo = &ind.geometry;
    let dom = geo.chart().domain();
    let names = geo.chart().coords();
    let psi = imm.pullback_form(&psi.0);
    if !certify(vec_components(&psi, names), dom)?.passed() {
        return Ok(CheckRecord::inapplicable(id, anchor, "V is not concircular"));
    }
    if !matches!(ric.class, EinsteinClass::Einstein | EinsteinClass::QuasiEinstein) {
        return Ok(CheckRecord::inapplicable(id, anchor, format!("Ricci tensor is {}", ric.class)));
    }
    let rho = &split.rho * &Expr::int(ind.normal_sign);
    if !dom.nonvanishing(&rho)? {
        return Ok(CheckRecord::inapplicable(id, anchor, "ρ vanishes somewhere on the domain"));
    }
    let alpha = ric.coefficients.get("alpha").cloned().unwrap_or_default();
    let beta = ric
        .coefficients
        .get("beta")
        .or_else(|| ric.coefficients.get("gamma"))
        .cloned()
        .unwrap_or_default();
    let a = imm.pullback(a);
    let eta = geo.metric().lower(&split.tangential);
    let inv = rho.recip();
    let ah = &(&sol.lambda - &a - &alpha) * &inv;
    let bh = &(&sol.mu_or_zero() - &beta) * &inv;
    let model = geo.metric().g().scale(&ah).add(&eta.tensor(&eta).scale(&bh));
    let cert = certify(sym_components(&ind.second_fundamental.sub(&model), names), dom)?;
    Ok(CheckRecord::certified(id, anchor, cert).witness("alpha_H", &ah).witness("beta_H", &bh))
}
