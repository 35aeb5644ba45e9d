//! Parseable text form of canonical expressions.

use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::expr::{Atom, Expr, Monomial, Poly, Rational};

fn fmt_exp(e: &Rational) -> String {
    if e.is_integer() {
        format!("{}", e.numer())
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

fn fmt_atom_pow(a: &Atom, e: &Rational, out: &mut String) {
    let one = e.is_one();
    match a {
        Atom::Sym(s) => out.push_str(s.name()),
        Atom::Pi => out.push_str("pi"),
        Atom::Exp(u) => {
            let _ = write!(out, "exp({u})");
        }
        Atom::Ln(u) => {
            let _ = write!(out, "ln({u})");
        }
        Atom::Sin(u) => {
            let _ = write!(out, "sin({u})");
        }
        Atom::Cos(u) => {
            let _ = write!(out, "cos({u})");
        }
        Atom::Root(u) => {
            if *e == Rational::new(1.into(), 2.into()) {
                let _ = write!(out, "sqrt({u})");
                return;
            }
            match u.as_rational() {
                Some(c) if c.is_integer() && !c.is_negative() => {
                    let _ = write!(out, "{}", c.numer());
                }
                _ => {
                    let _ = write!(out, "({u})");
                }
            }
            let _ = write!(out, "^{}", fmt_exp(e));
            return;
        }
    }
    if !one {
        let _ = write!(out, "^{}", fmt_exp(e));
    }
}

/// One term, without its sign.
fn fmt_term(c: &Rational, m: &Monomial) -> String {
    let c = c.abs();
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    if !c.numer().is_one() {
        num.push(format!("{}", c.numer()));
    }
    if !c.denom().is_one() {
        den.push(format!("{}", c.denom()));
    }
    for (a, e) in &m.0 {
        let mut s = String::new();
        if e.is_positive() {
            fmt_atom_pow(a, e, &mut s);
            num.push(s);
        } else {
            fmt_atom_pow(a, &-e, &mut s);
            den.push(s);
        }
    }
    let mut out = if num.is_empty() { "1".to_string() } else { num.join("*") };
    match den.len() {
        0 => {}
        1 => {
            let _ = write!(out, "/{}", den[0]);
        }
        _ => {
            let _ = write!(out, "/({})", den.join("*"));
        }
    }
    out
}

fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.0.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&fmt_term(c, m));
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = fmt_poly(&self.num);
        if self.den.is_empty() {
            return f.write_str(&num);
        }
        if self.num.len() > 1 {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(p, k)| {
                if *k == 1 {
                    format!("({})", fmt_poly(p))
                } else {
                    format!("({})^{k}", fmt_poly(p))
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "/{}", parts[0])
        } else {
            write!(f, "/({})", parts.join("*"))
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}
