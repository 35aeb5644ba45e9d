use std::fmt;

use crate::certify::{certify, Certification};
use crate::riemann::{Geometry, OneForm, VectorField};
use crate::symbolic::{Expr, Symbol};

use super::SolitonError;

/// Classes of the torse-forming family, most specific first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldClass {
    Parallel,
    Concurrent,
    Concircular,
    Recurrent,
    Torqued,
    TorseForming,
    NotTorseForming,
}

impl FieldClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldClass::Parallel => "parallel",
            FieldClass::Concurrent => "concurrent",
            FieldClass::Concircular => "concircular",
            FieldClass::Recurrent => "recurrent",
            FieldClass::Torqued => "torqued",
            FieldClass::TorseForming => "torse-forming",
            FieldClass::NotTorseForming => "not-torse-forming",
        }
    }
}

impl fmt::Display for FieldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `∇_X V = aX + ψ(X)V`, recovered and certified.
#[derive(Clone, Debug)]
pub struct TorseFormingDecomposition {
    pub a: Expr,
    pub psi: OneForm,
    pub class: FieldClass,
    /// Every class whose defining identity certifies.
    pub satisfied: Vec<FieldClass>,
    pub residual: Certification,
    /// Pivot component used to recover ψ.
    pub pivot: usize,
    /// Set when the pivot component is not bounded away from zero on every
    /// sample point.
    pub partial_pivot: bool,
}

impl TorseFormingDecomposition {
    pub fn is_torse_forming(&self) -> bool {
        self.class != FieldClass::NotTorseForming
    }

    pub fn has(&self, c: FieldClass) -> bool {
        self.satisfied.contains(&c)
    }

    /// `ψ(V)`.
    pub fn psi_of(&self, v: &VectorField) -> Expr {
        self.psi.apply(v)
    }
}

fn choose_pivot(geo: &Geometry, v: &VectorField) -> Result<Option<usize>, SolitonError> {
    let n = v.dim();
    let dom = geo.chart().domain();
    let mut counts = vec![0usize; n];
    for p in dom.points() {
        let vals: Vec<f64> = v
            .0
            .iter()
            .map(|c| c.eval(p).map(f64::abs))
            .collect::<Result<_, _>>()
            .map_err(|e| SolitonError::Evaluation(e.to_string()))?;
        let m = vals.iter().cloned().fold(0.0, f64::max);
        if m == 0.0 {
            continue;
        }
        for (j, x) in vals.iter().enumerate() {
            if *x > 0.1 * m {
                counts[j] += 1;
            }
        }
    }
    let best = (0..n).filter(|j| !v.0[*j].is_zero()).max_by_key(|j| (counts[*j], std::cmp::Reverse(*j)));
    Ok(best.filter(|j| counts[*j] > 0))
}

/// Recover `(a, ψ)` with `(∇_i V)^j = a δ_i^j + ψ_i V^j` and tag the class.
pub fn classify_vector_field(geo: &Geometry, v: &VectorField) -> Result<TorseFormingDecomposition, SolitonError> {
    let n = geo.dim();
    if v.dim() != n {
        return Err(SolitonError::Dimension);
    }
    let dom = geo.chart().domain();
    let names: Vec<Symbol> = geo.chart().coords().to_vec();
    if v.is_zero() {
        let residual = certify(Vec::new(), dom)?;
        return Ok(TorseFormingDecomposition {
            a: Expr::zero(),
            psi: OneForm::zero(n),
            class: FieldClass::Parallel,
            satisfied: vec![
                FieldClass::Parallel,
                FieldClass::Concircular,
                FieldClass::Recurrent,
                FieldClass::TorseForming,
            ],
            residual,
            pivot: 0,
            partial_pivot: false,
        });
    }
    let m = geo.nabla_vector(v);
    let j = choose_pivot(geo, v)?.ok_or(SolitonError::PivotFailure)?;
    let partial_pivot = !dom.nonvanishing(&v.0[j])?;
    let vj_inv = v.0[j].recip();
    let mut psi = vec![Expr::zero(); n];
    for i in 0..n {
        if i != j {
            psi[i] = &m[i][j] * &vj_inv;
        }
    }
    let i0 = if j == 0 { 1 } else { 0 };
    let a = &m[i0][i0] - &psi[i0] * &v.0[i0];
    psi[j] = (&m[j][j] - &a) * &vj_inv;
    let psi = OneForm(psi);

    let mut comps = Vec::new();
    for i in 0..n {
        for k in 0..n {
            let mut r = &m[i][k] - &psi.0[i] * &v.0[k];
            if i == k {
                r = r - &a;
            }
            comps.push((format!("[{},{}]", names[i], names[k]), r));
        }
    }
    let residual = certify(comps, dom)?;

    let mut satisfied = Vec::new();
    if residual.passed() {
        let psi_zero = certify(crate::certify::vec_components(&psi.0, &names), dom)?.passed();
        let a_zero = dom.zero_test(&a)?.verdict.is_zero();
        let a_one = dom.zero_test(&(&a - &Expr::one()))?.verdict.is_zero();
        let psi_v_zero = dom.zero_test(&psi.apply(v))?.verdict.is_zero();
        if a_zero && psi_zero {
            satisfied.push(FieldClass::Parallel);
        }
        if a_one && psi_zero {
            satisfied.push(FieldClass::Concurrent);
        }
        if psi_zero {
            satisfied.push(FieldClass::Concircular);
        }
        if a_zero {
            satisfied.push(FieldClass::Recurrent);
        }
        if psi_v_zero && !psi_zero {
            satisfied.push(FieldClass::Torqued);
        }
        satisfied.push(FieldClass::TorseForming);
    }
    let class = satisfied.first().copied().unwrap_or(FieldClass::NotTorseForming);
    Ok(TorseFormingDecomposition {
        a,
        psi,
        class,
        satisfied,
        residual,
        pivot: j,
        partial_pivot,
    })
}
