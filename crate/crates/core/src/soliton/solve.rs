use std::fmt;

use crate::certify::{certify, sym_components, Certification, CheckRecord, Outcome};
use crate::riemann::{Geometry, OneForm, Tensor2, VectorField};
use crate::symbolic::{solve_linear_symbolic, Expr, LinSolveError, Unknown};

use super::SolitonError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolitonKind {
    EtaRicci,
    EtaYamabe,
    Ricci,
    Yamabe,
}

impl SolitonKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolitonKind::EtaRicci => "eta-ricci",
            SolitonKind::EtaYamabe => "eta-yamabe",
            SolitonKind::Ricci => "ricci",
            SolitonKind::Yamabe => "yamabe",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolitonSign {
    Shrinking,
    Steady,
    Expanding,
    NonConstant,
}

impl SolitonSign {
    pub fn as_str(self) -> &'static str {
        match self {
            SolitonSign::Shrinking => "shrinking",
            SolitonSign::Steady => "steady",
            SolitonSign::Expanding => "expanding",
            SolitonSign::NonConstant => "non-constant",
        }
    }
}

impl fmt::Display for SolitonSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct SolitonSolution {
    pub kind: SolitonKind,
    pub lambda: Expr,
    /// `None` when μ is not fixed by the equations.
    pub mu: Option<Expr>,
    pub residual: Certification,
    pub lambda_constant: bool,
    pub mu_constant: Option<bool>,
    pub sign: SolitonSign,
}

impl SolitonSolution {
    /// μ, with an undetermined value read as zero.
    pub fn mu_or_zero(&self) -> Expr {
        self.mu.clone().unwrap_or_else(Expr::zero)
    }
}

pub(crate) fn half() -> Expr {
    Expr::frac(1, 2)
}

fn is_constant(geo: &Geometry, f: &Expr) -> Result<bool, SolitonError> {
    let dom = geo.chart().domain();
    for s in geo.chart().coords() {
        if !dom.zero_test(&f.diff(s))?.verdict.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sign_of(geo: &Geometry, lambda: &Expr, constant: bool) -> Result<SolitonSign, SolitonError> {
    if !constant {
        return Ok(SolitonSign::NonConstant);
    }
    let dom = geo.chart().domain();
    if dom.zero_test(lambda)?.verdict.is_zero() {
        return Ok(SolitonSign::Steady);
    }
    let v = dom
        .points()
        .first()
        .map(|p| lambda.eval(p))
        .transpose()
        .map_err(|e| SolitonError::Evaluation(e.to_string()))?
        .unwrap_or(0.0);
    Ok(if v > 0.0 {
        SolitonSign::Shrinking
    } else {
        SolitonSign::Expanding
    })
}

/// Solve `lhs_ij = λ A_ij + μ η_i η_j + rhs0_ij` for `(λ, μ)`.
pub(crate) fn solve_pair(
    geo: &Geometry,
    kind: SolitonKind,
    lhs: &Tensor2,
    lambda_coeff: &Tensor2,
    offset: &Tensor2,
    eta: Option<&OneForm>,
) -> Result<(Expr, Option<Expr>), SolitonError> {
    let n = geo.dim();
    let dom = geo.chart().domain();
    let names = geo.chart().coords();
    let eta = eta.filter(|e| !e.is_zero());
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut coeffs = vec![lambda_coeff.0[i][j].clone()];
            if let Some(e) = eta {
                coeffs.push(&e.0[i] * &e.0[j]);
            }
            rows.push((coeffs, &lhs.0[i][j] - &offset.0[i][j]));
            labels.push(format!("[{},{}]", names[i], names[j]));
        }
    }
    let unknowns = if eta.is_some() { 2 } else { 1 };
    let sol = match solve_linear_symbolic(&rows, unknowns, dom) {
        Ok(s) => s,
        Err(LinSolveError::Inconsistent { row, residual, cert }) => {
            return Err(SolitonError::NotASoliton {
                kind: kind.as_str(),
                component: labels[row].clone(),
                residual,
                verdict: cert.verdict,
                max_abs: cert.max_abs,
                samples: cert.samples,
                tol: cert.tol,
            })
        }
        Err(LinSolveError::Sample(e)) => return Err(e.into()),
        Err(e) => return Err(SolitonError::Evaluation(e.to_string())),
    };
    let lambda = match &sol.unknowns[0] {
        Unknown::Determined(l) => l.clone(),
        Unknown::Undetermined => return Err(SolitonError::LambdaUndetermined),
    };
    let mu = if unknowns == 2 {
        sol.unknowns[1].value().cloned()
    } else {
        None
    };
    Ok((lambda, mu))
}

pub(crate) fn finish(
    geo: &Geometry,
    kind: SolitonKind,
    lambda: Expr,
    mu: Option<Expr>,
    residual: Tensor2,
) -> Result<SolitonSolution, SolitonError> {
    let residual = certify(sym_components(&residual, geo.chart().coords()), geo.chart().domain())?;
    let lambda_constant = is_constant(geo, &lambda)?;
    let mu_constant = match &mu {
        Some(m) => Some(is_constant(geo, m)?),
        None => None,
    };
    let sign = sign_of(geo, &lambda, lambda_constant)?;
    Ok(SolitonSolution {
        kind,
        lambda,
        mu,
        residual,
        lambda_constant,
        mu_constant,
        sign,
    })
}

fn eta_tensor(eta: Option<&OneForm>, mu: &Option<Expr>, n: usize) -> Tensor2 {
    match (eta, mu) {
        (Some(e), Some(m)) => e.tensor(e).scale(m),
        _ => Tensor2::zero(n),
    }
}

/// `1/2 £_V g + Ric = λ g + μ η⊗η`.
pub fn solve_eta_ricci(geo: &Geometry, v: &VectorField, eta: Option<&OneForm>) -> Result<SolitonSolution, SolitonError> {
    let n = geo.dim();
    let kind = if eta.is_some() {
        SolitonKind::EtaRicci
    } else {
        SolitonKind::Ricci
    };
    let lhs = geo.lie_derivative_metric(v).scale(&half()).add(geo.ricci());
    let g = geo.metric().g().clone();
    let (lambda, mu) = solve_pair(geo, kind, &lhs, &g, &Tensor2::zero(n), eta)?;
    let residual = lhs.sub(&g.scale(&lambda)).sub(&eta_tensor(eta, &mu, n));
    finish(geo, kind, lambda, mu, residual)
}

/// `1/2 £_V g = (scal - λ) g + μ η⊗η`.
pub fn solve_eta_yamabe(geo: &Geometry, v: &VectorField, eta: Option<&OneForm>) -> Result<SolitonSolution, SolitonError> {
    let n = geo.dim();
    let kind = if eta.is_some() {
        SolitonKind::EtaYamabe
    } else {
        SolitonKind::Yamabe
    };
    let lhs = geo.lie_derivative_metric(v).scale(&half());
    let g = geo.metric().g().clone();
    let scal_g = g.scale(geo.scal());
    let neg_g = g.scale(&Expr::int(-1));
    let (lambda, mu) = solve_pair(geo, kind, &lhs, &neg_g, &scal_g, eta)?;
    let residual = lhs
        .sub(&g.scale(&(geo.scal() - &lambda)))
        .sub(&eta_tensor(eta, &mu, n));
    finish(geo, kind, lambda, mu, residual)
}

/// Check record for a solve attempt. "Not a soliton" and an undetermined λ
/// become records; other errors propagate.
pub fn solution_record(
    id: &str,
    anchor: &str,
    res: Result<SolitonSolution, SolitonError>,
) -> Result<(CheckRecord, Option<SolitonSolution>), SolitonError> {
    match res {
        Ok(s) => {
            let mut r = CheckRecord::certified(id, anchor, s.residual.clone()).witness("lambda", &s.lambda);
            r = match &s.mu {
                Some(m) => r.witness("mu", m),
                None => r.witness("mu", "undetermined"),
            };
            r = r.witness("sign", s.sign);
            Ok((r, Some(s)))
        }
        Err(SolitonError::NotASoliton {
            kind,
            component,
            residual,
            verdict,
            max_abs,
            samples,
            tol,
        }) => {
            let mut r = CheckRecord::new(id, anchor, Outcome::Failed)
                .witness("verdict", "not a soliton").witness("kind", kind);
            r.residual = Some(Certification {
                verdict,
                samples,
                tol,
                max_abs,
                worst: Some((component, residual)),
            });
            Ok((r, None))
        }
        Err(SolitonError::LambdaUndetermined) => Ok((
            CheckRecord::new(id, anchor, Outcome::Undetermined("lambda is not fixed by the equations".into())),
            None,
        )),
        Err(e) => Err(e),
    }
}
