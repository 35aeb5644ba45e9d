//! Small symbolic linear systems.

use super::expr::Expr;
use super::zero::{Domain, SampleError, Verdict, ZeroCertificate};

#[derive(Clone, Debug, PartialEq)]
pub enum Unknown {
    Determined(Expr),
    /// Not fixed by the system; the particular solution uses zero.
    Undetermined,
}

impl Unknown {
    pub fn value(&self) -> Option<&Expr> {
        match self {
            Unknown::Determined(e) => Some(e),
            Unknown::Undetermined => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub unknowns: Vec<Unknown>,
    /// Residual certificate for every input row.
    pub row_certificates: Vec<ZeroCertificate>,
}

impl LinearSolution {
    pub fn free(&self) -> Vec<usize> {
        self.unknowns
            .iter()
            .enumerate()
            .filter(|(_, u)| matches!(u, Unknown::Undetermined))
            .map(|(i, _)| i)
            .collect()
    }

    /// Particular solution with undetermined unknowns set to zero.
    pub fn particular(&self) -> Vec<Expr> {
        self.unknowns
            .iter()
            .map(|u| u.value().cloned().unwrap_or_else(Expr::zero))
            .collect()
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum LinSolveError {
    #[error("row {row} is inconsistent: residual {residual} ({})", cert.verdict)]
    Inconsistent {
        row: usize,
        residual: Expr,
        cert: ZeroCertificate,
    },
    #[error("malformed system: {0}")]
    Malformed(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// Solve `sum_j coeffs[j] * x_j = rhs` row by row.
///
/// Pivots are chosen among entries certified nonzero on the domain. Every
/// original row is then checked against the particular solution.
pub fn solve_linear_symbolic(rows: &[(Vec<Expr>, Expr)], n: usize, domain: &Domain) -> Result<LinearSolution, LinSolveError> {
    if let Some((i, _)) = rows.iter().enumerate().find(|(_, (c, _))| c.len() != n) {
        return Err(LinSolveError::Malformed(format!("row {i} has wrong length")));
    }
    let mut a: Vec<Vec<Expr>> = rows.iter().map(|(c, _)| c.clone()).collect();
    let mut b: Vec<Expr> = rows.iter().map(|(_, r)| r.clone()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r >= a.len() {
            break;
        }
        let mut best: Option<usize> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            if row[col].is_zero() {
                continue;
            }
            if domain.zero_test(&row[col])?.verdict == Verdict::NonZero
                && best.is_none_or(|j| row[col].size() < a[j][col].size())
            {
                best = Some(i);
            }
        }
        let Some(p) = best else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][col].recip();
        for j in col..n {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..a.len() {
            if i == r || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in col..n {
                let t = &f * &a[r][j];
                a[i][j] = &a[i][j] - &t;
            }
            let t = &f * &b[r];
            b[i] = &b[i] - &t;
        }
        pivots.push((r, col));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|(_, c)| *c).collect();
    let mut unknowns = vec![Unknown::Undetermined; n];
    for (row, col) in &pivots {
        let mut fixed = true;
        for j in 0..n {
            if !pivot_cols.contains(&j) && !a[*row][j].is_zero() && !domain.zero_test(&a[*row][j])?.verdict.is_zero() {
                fixed = false;
            }
        }
        unknowns[*col] = if fixed {
            Unknown::Determined(b[*row].clone())
        } else {
            Unknown::Undetermined
        };
    }
    let x: Vec<Expr> = pivots
        .iter()
        .fold(vec![Expr::zero(); n], |mut acc, (row, col)| {
            acc[*col] = b[*row].clone();
            acc
        });
    let mut row_certificates = Vec::with_capacity(rows.len());
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        let lhs: Expr = coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
        let residual = &lhs - rhs;
        let cert = domain.zero_test(&residual)?;
        if !cert.verdict.is_zero() {
            return Err(LinSolveError::Inconsistent { row: i, residual, cert });
        }
        row_certificates.push(cert);
    }
    Ok(LinearSolution {
        unknowns,
        row_certificates,
    })
}
