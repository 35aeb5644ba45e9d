//! Exact symbolic scalar expressions.

mod ast;
mod diff;
mod eval;
mod expr;
mod linsolve;
mod parse;
mod print;
mod zero;

pub use ast::{simplify, Ast, Func};
pub use eval::Point;
pub use expr::{Expr, Rational, Symbol};
pub use linsolve::{solve_linear_symbolic, LinSolveError, LinearSolution, Unknown};
pub use parse::{parse_ast, parse_expression};
pub use zero::{fmt_point, is_identically_zero, DomainConstraint, Domain, Relation, SampleError, Verdict, ZeroCertificate, ZeroConfig};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier '{name}' at {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("unknown function '{name}' at {pos}")]
    UnknownFunction { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("symbol '{0}' has no value")]
    Unbound(String),
    #[error("domain violation: {0}")]
    Domain(String),
}

/// `differentiate(e, s)`: exact partial derivative.
pub fn differentiate(e: &Expr, s: &Symbol) -> Expr {
    e.diff(s)
}
