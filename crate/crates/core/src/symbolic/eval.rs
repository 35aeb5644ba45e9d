//! Floating-point evaluation of canonical expressions.

use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive};

use super::expr::{Atom, Expr, Poly, Rational, Symbol};
use super::EvalError;

pub type Point = HashMap<Symbol, f64>;

fn q64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn powq(base: f64, e: &Rational) -> Result<f64, EvalError> {
    if e.is_integer() {
        let k = e.to_integer().to_i32().unwrap_or(i32::MAX);
        if base == 0.0 && k < 0 {
            return Err(EvalError::Domain("division by zero".into()));
        }
        return Ok(base.powi(k));
    }
    if base < 0.0 {
        if e.denom() % 2u32 == 1u32.into() {
            let mag = (-base).powf(q64(e));
            let odd_numer = e.numer().abs() % 2u32 == 1u32.into();
            return Ok(if odd_numer { -mag } else { mag });
        }
        return Err(EvalError::Domain(format!("even root of {base}")));
    }
    if base == 0.0 && e.is_negative() {
        return Err(EvalError::Domain("division by zero".into()));
    }
    Ok(base.powf(q64(e)))
}

fn eval_atom(a: &Atom, p: &Point) -> Result<f64, EvalError> {
    Ok(match a {
        Atom::Sym(s) => *p
            .get(s)
            .ok_or_else(|| EvalError::Unbound(s.name().to_string()))?,
        Atom::Pi => std::f64::consts::PI,
        Atom::Exp(u) => u.eval(p)?.exp(),
        Atom::Ln(u) => {
            let x = u.eval(p)?;
            if x <= 0.0 {
                return Err(EvalError::Domain(format!("ln({x})")));
            }
            x.ln()
        }
        Atom::Sin(u) => u.eval(p)?.sin(),
        Atom::Cos(u) => u.eval(p)?.cos(),
        Atom::Root(u) => u.eval(p)?,
    })
}

/// Value and sum of absolute term values.
fn eval_poly(poly: &Poly, p: &Point) -> Result<(f64, f64), EvalError> {
    let mut cache: HashMap<&Atom, f64> = HashMap::new();
    let mut val = 0.0;
    let mut abs = 0.0;
    for (m, c) in &poly.0 {
        let mut t = q64(c);
        for (a, e) in &m.0 {
            let x = match cache.get(a) {
                Some(x) => *x,
                None => {
                    let x = eval_atom(a, p)?;
                    cache.insert(a, x);
                    x
                }
            };
            t *= powq(x, e)?;
        }
        val += t;
        abs += t.abs();
    }
    Ok((val, abs))
}

impl Expr {
    pub fn eval(&self, p: &Point) -> Result<f64, EvalError> {
        self.eval_scaled(p).map(|(v, _)| v)
    }

    /// Value together with a magnitude scale for relative tolerances: the sum
    /// of absolute numerator terms over the absolute denominator.
    pub fn eval_scaled(&self, p: &Point) -> Result<(f64, f64), EvalError> {
        let (n, nabs) = eval_poly(&self.num, p)?;
        let mut d = 1.0;
        for (poly, k) in &self.den {
            let (v, _) = eval_poly(poly, p)?;
            d *= v.powi(*k as i32);
        }
        if d == 0.0 {
            return Err(EvalError::Domain("division by zero".into()));
        }
        Ok((n / d, nabs / d.abs()))
    }

    /// Evaluation with a named-value map.
    pub fn evaluate_at(&self, point: &[(&str, f64)]) -> Result<f64, EvalError> {
        let p: Point = point.iter().map(|(k, v)| (Symbol::new(k), *v)).collect();
        self.eval(&p)
    }
}
