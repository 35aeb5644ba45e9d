//! Two-tier zero testing: exact simplification first, then deterministic
//! pseudo-random sampling inside the declared domain.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::Point;
use super::expr::{Expr, Symbol};
use super::EvalError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Greater,
    Less,
    NotEqual,
}

/// `symbol (>|<|!=) bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainConstraint {
    pub symbol: Symbol,
    pub relation: Relation,
    pub bound: Expr,
}

impl DomainConstraint {
    pub fn new(symbol: Symbol, relation: Relation, bound: Expr) -> Self {
        DomainConstraint { symbol, relation, bound }
    }

    pub fn holds(&self, p: &Point) -> Result<bool, EvalError> {
        let x = *p
            .get(&self.symbol)
            .ok_or_else(|| EvalError::Unbound(self.symbol.name().to_string()))?;
        let b = self.bound.eval(p)?;
        Ok(match self.relation {
            Relation::Greater => x > b,
            Relation::Less => x < b,
            Relation::NotEqual => (x - b).abs() > 1e-6 * (1.0 + b.abs()),
        })
    }
}

impl fmt::Display for DomainConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Greater => ">",
            Relation::Less => "<",
            Relation::NotEqual => "!=",
        };
        write!(f, "{} {op} {}", self.symbol, self.bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroConfig {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        ZeroConfig {
            samples: 32,
            tol: 1e-9,
            seed: 0x5EED,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    SymbolicZero,
    NumericZero,
    NonZero,
    Inconclusive,
}

impl Verdict {
    pub fn is_zero(self) -> bool {
        matches!(self, Verdict::SymbolicZero | Verdict::NumericZero)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::SymbolicZero => "symbolic-zero",
            Verdict::NumericZero => "numeric-zero",
            Verdict::NonZero => "nonzero",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCertificate {
    pub verdict: Verdict,
    pub samples: usize,
    pub max_abs: f64,
    pub tol: f64,
}

impl ZeroCertificate {
    pub fn symbolic() -> Self {
        ZeroCertificate {
            verdict: Verdict::SymbolicZero,
            samples: 0,
            max_abs: 0.0,
            tol: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SampleError {
    #[error("evaluation failed at {point}: {source}")]
    Evaluation { point: String, source: EvalError },
    #[error("could not draw a point satisfying the domain constraints after {0} attempts")]
    Rejection(usize),
}

/// Symbols, constraints, and the fixed sample points drawn from them.
#[derive(Clone, Debug)]
pub struct Domain {
    symbols: Vec<Symbol>,
    constraints: Vec<DomainConstraint>,
    config: ZeroConfig,
    points: Vec<Point>,
}

const MAX_ATTEMPTS: usize = 10_000;

impl Domain {
    pub fn new(symbols: Vec<Symbol>, constraints: Vec<DomainConstraint>, config: ZeroConfig) -> Result<Self, SampleError> {
        let points = draw_points(&symbols, &constraints, &config)?;
        Ok(Domain {
            symbols,
            constraints,
            config,
            points,
        })
    }

    /// Unconstrained domain over the given symbols with default settings.
    pub fn free(symbols: &[&str]) -> Self {
        Domain::new(symbols.iter().map(|s| Symbol::new(s)).collect(), Vec::new(), ZeroConfig::default())
            .expect("unconstrained sampling")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn constraints(&self) -> &[DomainConstraint] {
        &self.constraints
    }

    pub fn config(&self) -> &ZeroConfig {
        &self.config
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Same symbols and constraints under different settings.
    pub fn with_config(&self, config: ZeroConfig) -> Result<Self, SampleError> {
        Domain::new(self.symbols.clone(), self.constraints.clone(), config)
    }

    /// Extend with extra symbols (e.g. immersion parameters).
    pub fn extended(&self, symbols: &[Symbol], constraints: &[DomainConstraint]) -> Result<Self, SampleError> {
        let mut s = self.symbols.clone();
        for x in symbols {
            if !s.contains(x) {
                s.push(x.clone());
            }
        }
        let mut c = self.constraints.clone();
        c.extend(constraints.iter().cloned());
        Domain::new(s, c, self.config)
    }

    /// Classify `e` as zero or not on this domain.
    pub fn zero_test(&self, e: &Expr) -> Result<ZeroCertificate, SampleError> {
        if e.is_zero() {
            return Ok(ZeroCertificate::symbolic());
        }
        let tol = self.config.tol;
        let mut max_abs: f64 = 0.0;
        let mut exceeds = false;
        let mut decisive = false;
        for p in &self.points {
            let (v, scale) = e.eval_scaled(p).map_err(|source| SampleError::Evaluation {
                point: fmt_point(p, &self.symbols),
                source,
            })?;
            let bound = tol * scale.max(1.0);
            if !v.is_finite() {
                exceeds = true;
                decisive = true;
                max_abs = f64::INFINITY;
                continue;
            }
            max_abs = max_abs.max(v.abs());
            if v.abs() > bound {
                exceeds = true;
                if v.abs() >= 1e3 * bound {
                    decisive = true;
                }
            }
        }
        let verdict = match (exceeds, decisive) {
            (false, _) => Verdict::NumericZero,
            (true, true) => Verdict::NonZero,
            (true, false) => Verdict::Inconclusive,
        };
        Ok(ZeroCertificate {
            verdict,
            samples: self.points.len(),
            max_abs,
            tol,
        })
    }

    /// True when `e` is bounded away from zero at every sample point,
    /// relative to the magnitude of its terms.
    pub fn nonvanishing(&self, e: &Expr) -> Result<bool, SampleError> {
        if e.is_zero() {
            return Ok(false);
        }
        if e.manifestly_nonzero(&|s| self.sign_definite(s)) {
            return Ok(true);
        }
        for p in &self.points {
            let (v, scale) = e.eval_scaled(p).map_err(|source| SampleError::Evaluation {
                point: fmt_point(p, &self.symbols),
                source,
            })?;
            if !(v.abs() > 1e3 * self.config.tol * scale) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A symbol constrained away from zero by a constant bound.
    fn sign_definite(&self, s: &Symbol) -> bool {
        let zero = num_rational::BigRational::from_integer(0.into());
        self.constraints.iter().any(|c| {
            &c.symbol == s
                && c.bound.as_rational().is_some_and(|b| match c.relation {
                    Relation::Greater => b >= zero,
                    Relation::Less => b <= zero,
                    Relation::NotEqual => b == zero,
                })
        })
    }

    /// Values of `e` at every sample point.
    pub fn values(&self, e: &Expr) -> Result<Vec<f64>, SampleError> {
        self.points
            .iter()
            .map(|p| {
                e.eval(p).map_err(|source| SampleError::Evaluation {
                    point: fmt_point(p, &self.symbols),
                    source,
                })
            })
            .collect()
    }
}

pub fn fmt_point(p: &Point, order: &[Symbol]) -> String {
    let parts: Vec<String> = order
        .iter()
        .filter_map(|s| p.get(s).map(|v| format!("{s}={v:.6}")))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// A symbol is sampled log-uniformly when it is constrained `> b` with a
/// constant `b >= 0`.
fn strictly_positive(s: &Symbol, constraints: &[DomainConstraint]) -> bool {
    constraints.iter().any(|c| {
        &c.symbol == s
            && c.relation == Relation::Greater
            && c.bound.as_rational().is_some_and(|b| b >= num_rational::BigRational::from_integer(0.into()))
    })
}

fn draw_points(symbols: &[Symbol], constraints: &[DomainConstraint], cfg: &ZeroConfig) -> Result<Vec<Point>, SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let positive: Vec<bool> = symbols.iter().map(|s| strictly_positive(s, constraints)).collect();
    let (lo, hi) = (0.1f64.ln(), 10f64.ln());
    let mut out = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > MAX_ATTEMPTS {
                return Err(SampleError::Rejection(MAX_ATTEMPTS));
            }
            let mut p = Point::new();
            for (s, pos) in symbols.iter().zip(&positive) {
                let v = if *pos {
                    rng.gen_range(lo..hi).exp()
                } else {
                    rng.gen_range(-5.0..5.0)
                };
                p.insert(s.clone(), v);
            }
            let mut ok = true;
            for c in constraints {
                match c.holds(&p) {
                    Ok(true) => {}
                    Ok(false) => {
                        ok = false;
                        break;
                    }
                    Err(source) => {
                        return Err(SampleError::Evaluation {
                            point: fmt_point(&p, symbols),
                            source,
                        })
                    }
                }
            }
            if ok {
                out.push(p);
                break;
            }
        }
    }
    Ok(out)
}

/// Convenience: zero-test with the default configuration and no constraints.
pub fn is_identically_zero(e: &Expr, domain: &Domain) -> Result<ZeroCertificate, SampleError> {
    domain.zero_test(e)
}
