//! Componentwise certification of tensor residuals and the check records
//! that every analysis emits.

use std::collections::BTreeMap;
use std::fmt;

use crate::symbolic::{Domain, Expr, SampleError, Verdict};

/// Aggregate zero-test result over a list of labelled residual components.
#[derive(Clone, Debug, PartialEq)]
pub struct Certification {
    pub verdict: Verdict,
    pub samples: usize,
    pub tol: f64,
    pub max_abs: f64,
    /// Component with the largest sampled residual (the first failing one
    /// when the certification fails).
    pub worst: Option<(String, Expr)>,
}

impl Certification {
    pub fn passed(&self) -> bool {
        self.verdict.is_zero()
    }

    pub fn is_symbolic(&self) -> bool {
        self.verdict == Verdict::SymbolicZero
    }
}

/// Zero-test every component; the overall verdict is the weakest one.
pub fn certify<I>(components: I, domain: &Domain) -> Result<Certification, SampleError>
where
    I: IntoIterator<Item = (String, Expr)>,
{
    let mut verdict = Verdict::SymbolicZero;
    let mut max_abs: f64 = 0.0;
    let mut worst: Option<(String, Expr)> = None;
    let mut worst_abs: f64 = -1.0;
    let mut failing: Option<(String, Expr)> = None;
    let mut samples = 0;
    for (label, e) in components {
        let c = domain.zero_test(&e)?;
        samples = samples.max(c.samples);
        verdict = weaker(verdict, c.verdict);
        if c.max_abs > worst_abs {
            worst_abs = c.max_abs;
            worst = Some((label.clone(), e.clone()));
        }
        max_abs = max_abs.max(c.max_abs);
        if !c.verdict.is_zero() && failing.is_none() {
            failing = Some((label, e));
        }
    }
    Ok(Certification {
        verdict,
        samples,
        tol: domain.config().tol,
        max_abs,
        worst: failing.or(worst),
    })
}

pub fn certify_one(label: &str, e: &Expr, domain: &Domain) -> Result<Certification, SampleError> {
    certify([(label.to_string(), e.clone())], domain)
}

fn rank(v: Verdict) -> u8 {
    match v {
        Verdict::SymbolicZero => 0,
        Verdict::NumericZero => 1,
        Verdict::Inconclusive => 2,
        Verdict::NonZero => 3,
    }
}

fn weaker(a: Verdict, b: Verdict) -> Verdict {
    if rank(a) >= rank(b) {
        a
    } else {
        b
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    CertifiedSymbolic,
    CertifiedNumeric,
    Failed,
    Inapplicable(String),
    Undetermined(String),
}

impl Outcome {
    pub fn from_cert(c: &Certification) -> Outcome {
        match c.verdict {
            Verdict::SymbolicZero => Outcome::CertifiedSymbolic,
            Verdict::NumericZero => Outcome::CertifiedNumeric,
            Verdict::NonZero | Verdict::Inconclusive => Outcome::Failed,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::CertifiedSymbolic => "certified-symbolic",
            Outcome::CertifiedNumeric => "certified-numeric",
            Outcome::Failed => "failed",
            Outcome::Inapplicable(_) => "inapplicable",
            Outcome::Undetermined(_) => "undetermined",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::CertifiedSymbolic | Outcome::CertifiedNumeric)
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, Outcome::Failed)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One verified (or skipped) identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub id: String,
    /// Human-readable statement of the identity being checked.
    pub anchor: String,
    pub outcome: Outcome,
    pub witnesses: BTreeMap<String, String>,
    pub residual: Option<Certification>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, outcome: Outcome) -> Self {
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            outcome,
            witnesses: BTreeMap::new(),
            residual: None,
        }
    }

    pub fn certified(id: impl Into<String>, anchor: impl Into<String>, cert: Certification) -> Self {
        let mut r = CheckRecord::new(id, anchor, Outcome::from_cert(&cert));
        r.residual = Some(cert);
        r
    }

    pub fn inapplicable(id: impl Into<String>, anchor: impl Into<String>, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        let mut r = CheckRecord::new(id, anchor, Outcome::Inapplicable(reason.clone()));
        r.witnesses.insert("reason".into(), reason);
        r
    }

    pub fn witness(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.witnesses.insert(key.to_string(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome.is_certified()
    }
}

/// Residual components of a (0,2) tensor over the upper triangle.
pub fn sym_components(t: &crate::riemann::Tensor2, names: &[crate::symbolic::Symbol]) -> Vec<(String, Expr)> {
    t.labelled(names, true)
}

/// Residual components of a vector or form.
pub fn vec_components(v: &[Expr], names: &[crate::symbolic::Symbol]) -> Vec<(String, Expr)> {
    v.iter()
        .zip(names)
        .map(|(e, s)| (format!("[{s}]"), e.clone()))
        .collect()
}
