//! Raw parse trees.
//!
//! An [`Ast`] keeps the user's input shape (no rewriting) so it can be
//! evaluated in floating point independently of the canonical form. The
//! property tests compare both routes.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use super::expr::{Expr, Rational, Symbol};
use super::EvalError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(Rational),
    Sym(Symbol),
    Pi,
    Euler,
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Call(Func, Box<Ast>),
}

impl Ast {
    /// Floating-point evaluation of the raw tree.
    pub fn eval(&self, point: &HashMap<Symbol, f64>) -> Result<f64, EvalError> {
        let v = match self {
            Ast::Num(q) => q.to_f64().unwrap_or(f64::NAN),
            Ast::Sym(s) => *point
                .get(s)
                .ok_or_else(|| EvalError::Unbound(s.name().to_string()))?,
            Ast::Pi => std::f64::consts::PI,
            Ast::Euler => std::f64::consts::E,
            Ast::Neg(a) => -a.eval(point)?,
            Ast::Add(a, b) => a.eval(point)? + b.eval(point)?,
            Ast::Sub(a, b) => a.eval(point)? - b.eval(point)?,
            Ast::Mul(a, b) => a.eval(point)? * b.eval(point)?,
            Ast::Div(a, b) => {
                let d = b.eval(point)?;
                if d == 0.0 {
                    return Err(EvalError::Domain("division by zero".into()));
                }
                a.eval(point)? / d
            }
            Ast::Pow(a, b) => {
                let base = a.eval(point)?;
                let e = b.eval(point)?;
                if base < 0.0 && e.fract() != 0.0 {
                    return Err(EvalError::Domain(format!("{base}^{e}")));
                }
                if base == 0.0 && e < 0.0 {
                    return Err(EvalError::Domain("division by zero".into()));
                }
                base.powf(e)
            }
            Ast::Call(f, a) => {
                let x = a.eval(point)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(EvalError::Domain(format!("ln({x})")));
                        }
                        x.ln()
                    }
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(EvalError::Domain(format!("sqrt({x})")));
                        }
                        x.sqrt()
                    }
                }
            }
        };
        Ok(v)
    }

    /// Symbols referenced by the tree, in first-occurrence order.
    pub fn symbols(&self) -> Vec<Symbol> {
        fn walk(a: &Ast, out: &mut Vec<Symbol>) {
            match a {
                Ast::Sym(s) => {
                    if !out.contains(s) {
                        out.push(s.clone())
                    }
                }
                Ast::Num(_) | Ast::Pi | Ast::Euler => {}
                Ast::Neg(x) | Ast::Call(_, x) => walk(x, out),
                Ast::Add(x, y) | Ast::Sub(x, y) | Ast::Mul(x, y) | Ast::Div(x, y) | Ast::Pow(x, y) => {
                    walk(x, out);
                    walk(y, out)
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Canonical form of a raw tree.
pub fn simplify(ast: &Ast) -> Expr {
    match ast {
        Ast::Num(q) => Expr::constant(q.clone()),
        Ast::Sym(s) => Expr::symbol(s),
        Ast::Pi => Expr::pi(),
        Ast::Euler => Expr::one().exp(),
        Ast::Neg(a) => -simplify(a),
        Ast::Add(a, b) => simplify(a) + simplify(b),
        Ast::Sub(a, b) => simplify(a) - simplify(b),
        Ast::Mul(a, b) => simplify(a) * simplify(b),
        Ast::Div(a, b) => simplify(a) * reciprocal(b),
        Ast::Pow(a, b) => simplify(a).pow(&simplify(b)),
        Ast::Call(f, a) => {
            let x = simplify(a);
            match f {
                Func::Exp => x.exp(),
                Func::Ln => x.ln(),
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Sqrt => x.sqrt(),
            }
        }
    }
}

/// Reciprocal that distributes over products and integer powers, so factored
/// denominators keep their factorization.
fn reciprocal(ast: &Ast) -> Expr {
    match ast {
        Ast::Mul(a, b) => reciprocal(a) * reciprocal(b),
        Ast::Div(a, b) => simplify(b) * reciprocal(a),
        Ast::Neg(a) => -reciprocal(a),
        Ast::Pow(a, k) => match simplify(k).as_i64() {
            Some(k) if k > 0 => reciprocal(a).powi(k),
            _ => simplify(ast).recip(),
        },
        _ => simplify(ast).recip(),
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Num(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "({}/{})", q.numer(), q.denom())
                }
            }
            Ast::Sym(s) => write!(f, "{s}"),
            Ast::Pi => f.write_str("pi"),
            Ast::Euler => f.write_str("e"),
            Ast::Neg(a) => write!(f, "(-{a})"),
            Ast::Add(a, b) => write!(f, "({a} + {b})"),
            Ast::Sub(a, b) => write!(f, "({a} - {b})"),
            Ast::Mul(a, b) => write!(f, "({a}*{b})"),
            Ast::Div(a, b) => write!(f, "({a}/{b})"),
            Ast::Pow(a, b) => write!(f, "({a}^{b})"),
            Ast::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
