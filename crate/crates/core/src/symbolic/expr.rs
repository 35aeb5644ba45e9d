//! Canonical expression representation.
//!
//! An [`Expr`] is a quotient of a sparse polynomial numerator by a product of
//! primitive polynomial factors. Polynomial terms are exact rational
//! coefficients times monomials over *atoms*: symbols, `pi`, and the
//! transcendental heads `exp`, `ln`, `sin`, `cos` plus fractional-power roots.
//!
//! Normal-form rules applied on every construction:
//!
//! * all `exp` factors of a term merge into a single `exp(sum of arguments)`;
//! * `cos(u)^k` with `k >= 2` is rewritten through `1 - sin(u)^2`;
//! * root atoms carry an exponent in `(0, 1)`; integer parts are multiplied out;
//! * monomial exponents may be negative (Laurent), so monomial denominators
//!   never appear as polynomial factors;
//! * denominator factors are primitive (no monomial content) with leading
//!   coefficient one, and are cancelled against the numerator by exact division
//!   whenever possible.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A named scalar variable (coordinate or parameter).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Atom {
    Sym(Symbol),
    Pi,
    Exp(Expr),
    Ln(Expr),
    Sin(Expr),
    Cos(Expr),
    /// Base of a fractional power. Constant bases are primes (or unfactored
    /// cofactors); non-constant bases are non-monomial expressions.
    Root(Expr),
}

impl Atom {
    fn is_exp(&self) -> bool {
        matches!(self, Atom::Exp(_))
    }

    /// Atoms that may be pulled out of a polynomial as monomial content.
    fn is_content_atom(&self) -> bool {
        matches!(self, Atom::Sym(_) | Atom::Pi | Atom::Ln(_) | Atom::Sin(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub(crate) struct Monomial(pub(crate) BTreeMap<Atom, Rational>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub(crate) struct Poly(pub(crate) BTreeMap<Monomial, Rational>);

/// Canonical symbolic scalar expression.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    pub(crate) num: Poly,
    pub(crate) den: Vec<(Poly, u32)>,
}

// ---------------------------------------------------------------------------
// Monomials

impl Monomial {
    pub(crate) fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub(crate) fn atom(a: Atom, e: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !e.is_zero() {
            m.insert(a, e);
        }
        Monomial(m)
    }

    pub(crate) fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent-wise product without normal-form rewriting (except exp merge).
    fn raw_mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (a, e) in &other.0 {
            let entry = out.entry(a.clone()).or_insert_with(Rational::zero);
            *entry += e;
            if entry.is_zero() {
                out.remove(a);
            }
        }
        Monomial(out).merge_exp()
    }

    fn raw_pow(&self, q: &Rational) -> Monomial {
        if q.is_zero() {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(a, e)| (a.clone(), e * q)).collect()).merge_exp()
    }

    fn inverse(&self) -> Monomial {
        self.raw_pow(&rat(-1))
    }

    /// Collapse every `exp(u)^k` factor into one `exp(sum k*u)` with exponent one.
    fn merge_exp(mut self) -> Monomial {
        let exps: Vec<(Atom, Rational)> = self
            .0
            .iter()
            .filter(|(a, _)| a.is_exp())
            .map(|(a, e)| (a.clone(), e.clone()))
            .collect();
        if exps.is_empty() || (exps.len() == 1 && exps[0].1.is_one()) {
            return self;
        }
        let mut arg = Expr::zero();
        for (a, e) in exps {
            self.0.remove(&a);
            if let Atom::Exp(u) = a {
                arg = &arg + &(&u * &Expr::constant(e));
            }
        }
        if !arg.is_zero() {
            self.0.insert(Atom::Exp(arg), Rational::one());
        }
        self
    }

    fn exp_arg(&self) -> Option<&Expr> {
        self.0.keys().find_map(|a| match a {
            Atom::Exp(u) => Some(u),
            _ => None,
        })
    }

    pub(crate) fn symbols_into(&self, out: &mut BTreeSet<Symbol>) {
        for a in self.0.keys() {
            match a {
                Atom::Sym(s) => {
                    out.insert(s.clone());
                }
                Atom::Pi => {}
                Atom::Exp(u) | Atom::Ln(u) | Atom::Sin(u) | Atom::Cos(u) | Atom::Root(u) => {
                    u.symbols_into(out)
                }
            }
        }
    }
}

/// Multiplication-compatible total order on monomials: lexicographic on the
/// exponent vector over non-exp atoms, then on the exp argument.
fn monomial_order(a: &Monomial, b: &Monomial) -> Ordering {
    let mut ia = a.0.iter().filter(|(k, _)| !k.is_exp()).peekable();
    let mut ib = b.0.iter().filter(|(k, _)| !k.is_exp()).peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some((_, ea)), None) => {
                let o = ea.cmp(&&Rational::zero());
                if o != Ordering::Equal {
                    return o;
                }
                ia.next();
            }
            (None, Some((_, eb))) => {
                let o = Rational::zero().cmp(eb);
                if o != Ordering::Equal {
                    return o;
                }
                ib.next();
            }
            (Some((ka, ea)), Some((kb, eb))) => match ka.cmp(kb) {
                Ordering::Equal => {
                    let o = ea.cmp(eb);
                    if o != Ordering::Equal {
                        return o;
                    }
                    ia.next();
                    ib.next();
                }
                Ordering::Less => {
                    let o = ea.cmp(&&Rational::zero());
                    if o != Ordering::Equal {
                        return o;
                    }
                    ia.next();
                }
                Ordering::Greater => {
                    let o = Rational::zero().cmp(eb);
                    if o != Ordering::Equal {
                        return o;
                    }
                    ib.next();
                }
            },
        }
    }
    let zero = Expr::zero();
    let ua = a.exp_arg().unwrap_or(&zero);
    let ub = b.exp_arg().unwrap_or(&zero);
    expr_lex(ua, ub)
}

/// Order on expressions compatible with addition (coefficient-vector lex).
fn expr_lex(a: &Expr, b: &Expr) -> Ordering {
    if !a.den.is_empty() || !b.den.is_empty() {
        return a.cmp(b);
    }
    let mut ia = a.num.0.iter().peekable();
    let mut ib = b.num.0.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => return Ordering::Equal,
            (Some((_, ca)), None) => return ca.cmp(&&Rational::zero()),
            (None, Some((_, cb))) => return Rational::zero().cmp(cb),
            (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                Ordering::Equal => {
                    let o = ca.cmp(cb);
                    if o != Ordering::Equal {
                        return o;
                    }
                    ia.next();
                    ib.next();
                }
                Ordering::Less => return ca.cmp(&&Rational::zero()),
                Ordering::Greater => return Rational::zero().cmp(cb),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomials

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub(crate) fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub(crate) fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn len(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.0.remove(&m);
                }
            }
            None => {
                self.0.insert(m, c);
            }
        }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.0 {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub(crate) fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub(crate) fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub(crate) fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    pub(crate) fn as_constant(&self) -> Option<Rational> {
        if self.0.is_empty() {
            return Some(Rational::zero());
        }
        match self.single_term() {
            Some((m, c)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    fn lead(&self) -> Option<(&Monomial, &Rational)> {
        self.0.iter().max_by(|a, b| monomial_order(a.0, b.0))
    }

    /// Multiply by a single term; `None` if some product leaves normal form.
    fn mul_term_simple(&self, c: &Rational, m: &Monomial) -> Option<Poly> {
        let mut out = Poly::zero();
        for (pm, pc) in &self.0 {
            match normalize(pc * c, pm.raw_mul(m)) {
                Normalized::Simple(k, mm) => out.add_term(mm, k),
                Normalized::Complex(_) => return None,
            }
        }
        Some(out)
    }

    /// Exact quotient `self / divisor`, if found by leading-term division.
    fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (dm, dc) = divisor.lead()?;
        let dm_inv = dm.inverse();
        let limit = 4 * (self.len() + divisor.len()) + 16;
        let size_cap = 4 * self.len() + divisor.len() + 16;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        for _ in 0..limit {
            if rem.is_zero() {
                return Some(quot);
            }
            if rem.len() > size_cap {
                return None;
            }
            let (lm, lc) = rem.lead()?;
            let (k, qm) = match normalize(Rational::one(), lm.raw_mul(&dm_inv)) {
                Normalized::Simple(k, m) => (k, m),
                Normalized::Complex(_) => return None,
            };
            let qc = lc * k / dc;
            let sub = divisor.mul_term_simple(&qc, &qm)?;
            rem = rem.add(&sub.neg());
            quot.add_term(qm, qc);
        }
        None
    }

    /// Split into `coef * content * primitive` with primitive leading coefficient one.
    ///
    /// The content takes, per atom, the minimum exponent over all terms (absent
    /// atoms count as exponent zero).
    fn primitive_parts(&self) -> (Rational, Monomial, Poly) {
        let mut atoms: BTreeSet<&Atom> = BTreeSet::new();
        for m in self.0.keys() {
            atoms.extend(m.0.keys().filter(|a| a.is_content_atom()));
        }
        let mut content = BTreeMap::new();
        for a in atoms {
            let e = self
                .0
                .keys()
                .map(|m| m.0.get(a).cloned().unwrap_or_else(Rational::zero))
                .min()
                .unwrap_or_else(Rational::zero);
            if !e.is_zero() {
                content.insert(a.clone(), e);
            }
        }
        let content = Monomial(content);
        let inv = content.inverse();
        let mut reduced = Poly::zero();
        for (m, c) in &self.0 {
            reduced.add_term(m.raw_mul(&inv), c.clone());
        }
        let lc = reduced
            .lead()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::one);
        let prim = reduced.scale(&lc.recip());
        (lc, content, prim)
    }

    pub(crate) fn symbols_into(&self, out: &mut BTreeSet<Symbol>) {
        for m in self.0.keys() {
            m.symbols_into(out);
        }
    }
}

// ---------------------------------------------------------------------------
// Term normalization

pub(crate) enum Normalized {
    Simple(Rational, Monomial),
    Complex(Expr),
}

/// Bring a raw `coef * monomial` into normal form.
pub(crate) fn normalize(coef: Rational, mono: Monomial) -> Normalized {
    if coef.is_zero() {
        return Normalized::Simple(coef, Monomial::one());
    }
    let mut coef = coef;
    let mut mono = mono.merge_exp();
    let mut extra: Vec<Expr> = Vec::new();

    let keys: Vec<Atom> = mono.0.keys().cloned().collect();
    for a in keys {
        let e = mono.0[&a].clone();
        match &a {
            Atom::Root(base) => {
                let k = e.floor();
                if k.is_zero() {
                    continue;
                }
                let r = &e - &k;
                if r.is_zero() {
                    mono.0.remove(&a);
                } else {
                    mono.0.insert(a.clone(), r);
                }
                let k = k.to_integer().to_i64().expect("root exponent overflow");
                match base.as_rational() {
                    Some(b) => coef *= pow_rational_int(&b, k),
                    None => extra.push(base.powi(k)),
                }
            }
            Atom::Cos(u) if e >= rat(2) => {
                let k = (&e / rat(2)).floor();
                let r = &e - &(&k * rat(2));
                if r.is_zero() {
                    mono.0.remove(&a);
                } else {
                    mono.0.insert(a.clone(), r);
                }
                let s = Expr::from_atom(Atom::Sin(u.clone()));
                let one_minus = &Expr::one() - &(&s * &s);
                extra.push(one_minus.powi(k.to_integer().to_i64().unwrap()));
            }
            _ => {}
        }
    }
    if extra.is_empty() {
        Normalized::Simple(coef, mono)
    } else {
        let mut acc = Expr::from_simple(coef, mono);
        for x in extra {
            acc = &acc * &x;
        }
        Normalized::Complex(acc)
    }
}

pub(crate) fn pow_rational_int(b: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(b.clone(), k as usize)
    } else {
        num_traits::pow(b.recip(), (-k) as usize)
    }
}

// ---------------------------------------------------------------------------
// Expressions

impl Expr {
    pub fn zero() -> Self {
        Expr {
            num: Poly::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Expr {
            num: Poly::constant(c),
            den: Vec::new(),
        }
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(rat(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Expr::constant(ratio(n, d))
    }

    pub fn symbol(s: &Symbol) -> Self {
        Expr::from_atom(Atom::Sym(s.clone()))
    }

    pub fn var(name: &str) -> Self {
        Expr::symbol(&Symbol::new(name))
    }

    pub fn pi() -> Self {
        Expr::from_atom(Atom::Pi)
    }

    pub(crate) fn from_atom(a: Atom) -> Self {
        Expr::from_term(Rational::one(), Monomial::atom(a, Rational::one()))
    }

    pub(crate) fn from_simple(c: Rational, m: Monomial) -> Self {
        Expr {
            num: Poly::term(c, m),
            den: Vec::new(),
        }
    }

    pub(crate) fn from_term(c: Rational, m: Monomial) -> Self {
        match normalize(c, m) {
            Normalized::Simple(c, m) => Expr::from_simple(c, m),
            Normalized::Complex(e) => e,
        }
    }

    pub(crate) fn from_poly(p: Poly) -> Self {
        Expr {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_one())
    }

    /// The exact value when the expression is a rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.den.is_empty() {
            return None;
        }
        self.num.as_constant()
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_i64())
    }

    pub fn is_constant(&self) -> bool {
        self.symbols().is_empty()
    }

    /// Number of polynomial terms (numerator plus denominator factors).
    pub fn size(&self) -> usize {
        self.num.len() + self.den.iter().map(|(p, _)| p.len()).sum::<usize>()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.symbols_into(&mut out);
        out
    }

    pub(crate) fn symbols_into(&self, out: &mut BTreeSet<Symbol>) {
        self.num.symbols_into(out);
        for (p, _) in &self.den {
            p.symbols_into(out);
        }
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        self.symbols().contains(s)
    }

    /// Single-term numerator built from atoms that cannot vanish.
    pub(crate) fn manifestly_nonzero(&self, sym_ok: &dyn Fn(&Symbol) -> bool) -> bool {
        let Some((m, _)) = self.num.single_term() else {
            return false;
        };
        m.0.keys().all(|a| match a {
            Atom::Pi | Atom::Exp(_) => true,
            Atom::Root(b) => b.as_rational().is_some(),
            Atom::Sym(s) => sym_ok(s),
            _ => false,
        })
    }

    /// Sign of the first stored numerator coefficient; used to canonicalize
    /// odd/even function arguments.
    pub(crate) fn leading_sign_negative(&self) -> bool {
        self.num
            .0
            .values()
            .next()
            .map(|c| c.is_negative())
            .unwrap_or(false)
    }

    pub(crate) fn den_expr(den: &[(Poly, u32)]) -> Expr {
        let mut acc = Expr::one();
        for (p, k) in den {
            acc = &acc * &Expr::from_poly(p.clone()).powi(*k as i64);
        }
        acc
    }

    /// `1 / prod(p^k)` keeping the factorization.
    pub(crate) fn den_recip(den: &[(Poly, u32)]) -> Expr {
        Expr::build(Poly::constant(Rational::one()), den.to_vec())
    }

    fn build(num: Poly, mut den: Vec<(Poly, u32)>) -> Expr {
        if num.is_zero() {
            return Expr::zero();
        }
        let mut num = num;
        for (p, k) in den.iter_mut() {
            while *k > 0 {
                match num.exact_div(p) {
                    Some(q) => {
                        num = q;
                        *k -= 1;
                    }
                    None => break,
                }
            }
        }
        den.retain(|(_, k)| *k > 0);
        Expr { num, den }
    }

    fn merge_den(a: &[(Poly, u32)], b: &[(Poly, u32)]) -> Vec<(Poly, u32)> {
        let mut map: BTreeMap<Poly, u32> = a.iter().cloned().collect();
        for (p, k) in b {
            *map.entry(p.clone()).or_insert(0) += k;
        }
        map.into_iter().collect()
    }

    fn mul_poly(a: &Poly, b: &Poly) -> Expr {
        let mut simple = Poly::zero();
        let mut complex: Vec<Expr> = Vec::new();
        for (ma, ca) in &a.0 {
            for (mb, cb) in &b.0 {
                match normalize(ca * cb, ma.raw_mul(mb)) {
                    Normalized::Simple(c, m) => simple.add_term(m, c),
                    Normalized::Complex(e) => complex.push(e),
                }
            }
        }
        let mut out = Expr::from_poly(simple);
        for e in complex {
            out = &out + &e;
        }
        out
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Expr::build(self.num.add(&other.num), self.den.clone());
        }
        // lcm of the factored denominators
        let mut lcm: BTreeMap<Poly, u32> = self.den.iter().cloned().collect();
        for (p, k) in &other.den {
            let e = lcm.entry(p.clone()).or_insert(0);
            *e = (*e).max(*k);
        }
        let missing = |den: &[(Poly, u32)]| -> Vec<(Poly, u32)> {
            let have: BTreeMap<&Poly, u32> = den.iter().map(|(p, k)| (p, *k)).collect();
            lcm.iter()
                .filter_map(|(p, k)| {
                    let h = have.get(p).copied().unwrap_or(0);
                    (k > &h).then(|| (p.clone(), k - h))
                })
                .collect()
        };
        let fa = Expr::den_expr(&missing(&self.den));
        let fb = Expr::den_expr(&missing(&other.den));
        // fa and fb are polynomials (no denominators)
        let na = Expr::mul_poly(&self.num, &fa.num);
        let nb = Expr::mul_poly(&other.num, &fb.num);
        let sum = &na + &nb;
        let den: Vec<(Poly, u32)> = lcm.into_iter().collect();
        // `sum` may itself carry denominators from normalization
        let merged = Expr::merge_den(&den, &sum.den);
        Expr::build(sum.num, merged)
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = self.as_rational() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_rational() {
            return self.scale(&c);
        }
        let prod = Expr::mul_poly(&self.num, &other.num);
        let den = Expr::merge_den(&Expr::merge_den(&self.den, &other.den), &prod.den);
        Expr::build(prod.num, den)
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    /// Multiplicative inverse. Panics on the zero expression.
    pub fn recip(&self) -> Expr {
        assert!(!self.is_zero(), "reciprocal of zero expression");
        let den_poly = Expr::den_expr(&self.den);
        if let Some((m, c)) = self.num.single_term() {
            let inv = Expr::from_term(c.recip(), m.inverse());
            return &inv * &den_poly;
        }
        let (lc, content, prim) = self.num.primitive_parts();
        let scale = Expr::from_term(lc.recip(), content.inverse());
        let base = &scale * &den_poly;
        if let Some((m, c)) = prim.single_term() {
            return &base * &Expr::from_term(c.recip(), m.inverse());
        }
        let den = Expr::merge_den(&base.den, &[(prim, 1)]);
        Expr::build(base.num, den)
    }

    pub fn div(&self, other: &Expr) -> Expr {
        self.mul(&other.recip())
    }

    pub fn powi(&self, k: i64) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        if k < 0 {
            return self.recip().powi(-k);
        }
        if let Some((m, c)) = self.num.single_term() {
            if self.den.is_empty() {
                let c = pow_rational_int(c, k);
                return Expr::from_term(c, m.raw_pow(&rat(k)));
            }
        }
        let mut base = self.clone();
        let mut acc = Expr::one();
        let mut n = k as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Real power with an exact rational exponent.
    ///
    /// Fractional powers of monomials distribute over their atoms, which
    /// takes the principal branch for positive atoms.
    pub fn pow_rational(&self, q: &Rational) -> Expr {
        if q.is_integer() {
            return self.powi(q.to_integer().to_i64().expect("exponent overflow"));
        }
        if self.is_zero() {
            return Expr::zero();
        }
        if !self.den.is_empty() {
            let num = Expr::from_poly(self.num.clone()).pow_rational(q);
            let mut acc = num;
            for (p, k) in &self.den {
                let f = Expr::from_poly(p.clone()).pow_rational(&(-q * rat(*k as i64)));
                acc = &acc * &f;
            }
            return acc;
        }
        if let Some((m, c)) = self.num.single_term() {
            if let Some(cpow) = rational_root(c, q) {
                return &cpow * &Expr::from_term(Rational::one(), m.raw_pow(q));
            }
            return Expr::from_term(Rational::one(), Monomial::atom(Atom::Root(self.clone()), q.clone()));
        }
        let (lc, content, prim) = self.num.primitive_parts();
        if lc.is_positive() {
            let cpow = rational_root(&lc, q).expect("positive base");
            let cont = Expr::from_term(Rational::one(), content.raw_pow(q));
            let root = Expr::from_term(
                Rational::one(),
                Monomial::atom(Atom::Root(Expr::from_poly(prim)), q.clone()),
            );
            &(&cpow * &cont) * &root
        } else {
            Expr::from_term(Rational::one(), Monomial::atom(Atom::Root(self.clone()), q.clone()))
        }
    }

    pub fn sqrt(&self) -> Expr {
        self.pow_rational(&ratio(1, 2))
    }

    /// Power with an arbitrary exponent expression.
    pub fn pow(&self, exponent: &Expr) -> Expr {
        if let Some(q) = exponent.as_rational() {
            return self.pow_rational(&q);
        }
        if self.is_euler() {
            return exponent.exp();
        }
        (exponent * &self.ln()).exp()
    }

    fn is_euler(&self) -> bool {
        match self.num.single_term() {
            Some((m, c)) if c.is_one() && self.den.is_empty() && m.0.len() == 1 => {
                matches!(m.0.iter().next(), Some((Atom::Exp(u), e)) if e.is_one() && u.is_one())
            }
            _ => false,
        }
    }

    pub fn exp(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        // exp(ln(u)) = u
        if let Some(inner) = self.as_single_atom().and_then(|a| match a {
            Atom::Ln(u) => Some(u.clone()),
            _ => None,
        }) {
            return inner;
        }
        Expr::from_atom(Atom::Exp(self.clone()))
    }

    pub fn ln(&self) -> Expr {
        if self.is_one() {
            return Expr::zero();
        }
        if let Some(Atom::Exp(u)) = self.as_single_atom() {
            return u.clone();
        }
        Expr::from_atom(Atom::Ln(self.clone()))
    }

    pub fn sin(&self) -> Expr {
        if self.is_zero() {
            return Expr::zero();
        }
        if let Some(v) = special_sin(self, false) {
            return v;
        }
        if self.leading_sign_negative() {
            return Expr::from_atom(Atom::Sin(self.neg())).neg();
        }
        Expr::from_atom(Atom::Sin(self.clone()))
    }

    pub fn cos(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        if let Some(v) = special_sin(self, true) {
            return v;
        }
        if self.leading_sign_negative() {
            return Expr::from_atom(Atom::Cos(self.neg()));
        }
        Expr::from_atom(Atom::Cos(self.clone()))
    }

    pub fn tan(&self) -> Expr {
        self.sin().div(&self.cos())
    }

    /// `Some(atom)` when the expression is exactly one atom to the first power.
    pub(crate) fn as_single_atom(&self) -> Option<&Atom> {
        if !self.den.is_empty() {
            return None;
        }
        let (m, c) = self.num.single_term()?;
        if !c.is_one() || m.0.len() != 1 {
            return None;
        }
        let (a, e) = m.0.iter().next()?;
        e.is_one().then_some(a)
    }

    /// Rational multiple of pi, if the expression is exactly `q*pi`.
    fn as_pi_multiple(&self) -> Option<Rational> {
        if !self.den.is_empty() {
            return None;
        }
        let (m, c) = self.num.single_term()?;
        if m.0.len() == 1 {
            if let Some((Atom::Pi, e)) = m.0.iter().next() {
                if e.is_one() {
                    return Some(c.clone());
                }
            }
        }
        None
    }
}

/// `c^q` as an exact expression with radicals, `None` for an even root of a
/// negative number.
fn rational_root(c: &Rational, q: &Rational) -> Option<Expr> {
    if c.is_negative() {
        let d = q.denom();
        if d.is_even() {
            return None;
        }
        let pos = rational_root(&-c, q)?;
        return Some(if q.numer().is_odd() { pos.neg() } else { pos });
    }
    let mut acc = Expr::one();
    for (n, sign) in [(c.numer().clone(), 1i64), (c.denom().clone(), -1i64)] {
        for (p, mult) in factor(&n) {
            let e = q * rat(mult as i64 * sign);
            let k = e.floor();
            let r = &e - &k;
            let pr = Rational::from_integer(p.clone());
            let ki = k.to_integer().to_i64().expect("exponent overflow");
            let mut f = Expr::constant(pow_rational_int(&pr, ki));
            if !r.is_zero() {
                f = &f
                    * &Expr::from_simple(
                        Rational::one(),
                        Monomial::atom(Atom::Root(Expr::constant(pr)), r),
                    );
            }
            acc = &acc * &f;
        }
    }
    Some(acc)
}

/// Trial-division factorization; cofactors above the search bound are
/// returned unfactored.
fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    if n <= BigInt::one() {
        return out;
    }
    let mut p = BigInt::from(2);
    let bound = BigInt::from(100_000);
    while &p * &p <= n && p < bound {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Exact sine (or cosine) at rational multiples of pi with denominators
/// dividing 4 or 6.
fn special_sin(arg: &Expr, cosine: bool) -> Option<Expr> {
    let mut q = arg.as_pi_multiple()?;
    if cosine {
        q += ratio(1, 2);
    }
    let two = rat(2);
    q = &q - &(&two * (&q / &two).floor());
    let mut sign = 1;
    if q >= Rational::one() {
        sign = -1;
        q -= Rational::one();
    }
    if q > ratio(1, 2) {
        q = Rational::one() - q;
    }
    let v = if q.is_zero() {
        Expr::zero()
    } else if q == ratio(1, 6) {
        Expr::frac(1, 2)
    } else if q == ratio(1, 4) {
        &Expr::int(2).sqrt() * &Expr::frac(1, 2)
    } else if q == ratio(1, 3) {
        &Expr::int(3).sqrt() * &Expr::frac(1, 2)
    } else if q == ratio(1, 2) {
        Expr::one()
    } else {
        return None;
    };
    Some(if sign < 0 { v.neg() } else { v })
}

// ---------------------------------------------------------------------------
// Operator sugar

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                Expr::$f(self, rhs)
            }
        }
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$f(&self, &rhs)
            }
        }
        impl std::ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                Expr::$f(&self, rhs)
            }
        }
        impl std::ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}
