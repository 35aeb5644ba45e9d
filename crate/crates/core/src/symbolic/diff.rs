//! Differentiation and substitution on canonical expressions.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::expr::{rat, Atom, Expr, Monomial, Poly, Rational, Symbol};

impl Atom {
    fn depends_on(&self, s: &Symbol) -> bool {
        match self {
            Atom::Sym(t) => t == s,
            Atom::Pi => false,
            Atom::Exp(u) | Atom::Ln(u) | Atom::Sin(u) | Atom::Cos(u) | Atom::Root(u) => u.depends_on(s),
        }
    }

    /// Derivative of the atom's underlying value (for roots: of the base).
    fn derivative(&self, s: &Symbol) -> Expr {
        match self {
            Atom::Sym(t) => {
                if t == s {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Atom::Pi => Expr::zero(),
            Atom::Exp(u) => u.diff(s) * u.exp(),
            Atom::Ln(u) => u.diff(s) / u,
            Atom::Sin(u) => u.diff(s) * u.cos(),
            Atom::Cos(u) => -(u.diff(s) * u.sin()),
            Atom::Root(u) => u.diff(s),
        }
    }
}

fn diff_poly(p: &Poly, s: &Symbol) -> Expr {
    let mut acc = Expr::zero();
    for (m, c) in &p.0 {
        for (a, e) in &m.0 {
            if !a.depends_on(s) {
                continue;
            }
            let mut rest = m.0.clone();
            let entry = rest.get_mut(a).expect("atom present");
            *entry -= Rational::one();
            if entry.is_zero() {
                rest.remove(a);
            }
            let rest = Expr::from_term(c * e, Monomial(rest));
            acc = acc + rest * a.derivative(s);
        }
    }
    acc
}

impl Expr {
    /// Exact partial derivative with respect to `s`.
    pub fn diff(&self, s: &Symbol) -> Expr {
        if !self.depends_on(s) {
            return Expr::zero();
        }
        let dnum = diff_poly(&self.num, s);
        if self.den.is_empty() {
            return dnum;
        }
        let dinv = Expr::den_recip(&self.den);
        let mut log_deriv = Expr::zero();
        for (p, k) in &self.den {
            let dp = diff_poly(p, s);
            if dp.is_zero() {
                continue;
            }
            log_deriv = log_deriv + dp * Expr::from_poly(p.clone()).recip().scale(&rat(*k as i64));
        }
        dnum * dinv - self * &log_deriv
    }

    /// Rebuild the expression with every atom passed through `f`; atoms for
    /// which `f` returns `None` are rebuilt from their (recursively mapped)
    /// arguments.
    pub(crate) fn map_atoms(&self, f: &dyn Fn(&Atom) -> Option<Expr>) -> Expr {
        let map_poly = |p: &Poly| -> Expr {
            let mut acc = Expr::zero();
            for (m, c) in &p.0 {
                let mut term = Expr::constant(c.clone());
                for (a, e) in &m.0 {
                    let v = match f(a) {
                        Some(v) => v.pow_rational(e),
                        None => match a {
                            Atom::Sym(_) | Atom::Pi => Expr::from_term(Rational::one(), Monomial::atom(a.clone(), e.clone())),
                            Atom::Exp(u) => u.map_atoms(f).exp().pow_rational(e),
                            Atom::Ln(u) => u.map_atoms(f).ln().pow_rational(e),
                            Atom::Sin(u) => u.map_atoms(f).sin().pow_rational(e),
                            Atom::Cos(u) => u.map_atoms(f).cos().pow_rational(e),
                            Atom::Root(u) => u.map_atoms(f).pow_rational(e),
                        },
                    };
                    term = term * v;
                }
                acc = acc + term;
            }
            acc
        };
        let mut out = map_poly(&self.num);
        for (p, k) in &self.den {
            out = out * map_poly(p).recip().powi(*k as i64);
        }
        out
    }

    /// Simultaneous substitution of symbols by expressions.
    pub fn substitute(&self, map: &HashMap<Symbol, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        self.map_atoms(&|a| match a {
            Atom::Sym(s) => map.get(s).cloned(),
            _ => None,
        })
    }

    pub fn substitute_one(&self, s: &Symbol, value: &Expr) -> Expr {
        let mut m = HashMap::new();
        m.insert(s.clone(), value.clone());
        self.substitute(&m)
    }

    /// Re-run every constructor from scratch. Canonical inputs are fixed points.
    pub fn resimplify(&self) -> Expr {
        self.map_atoms(&|_| None)
    }
}
