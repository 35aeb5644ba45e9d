#![allow(dead_code)]

use std::sync::Arc;

use soliton_core::hypersurface::SphereChain;
use soliton_core::riemann::{Chart, Geometry, Metric, OneForm, Tensor2, VectorField};
use soliton_core::symbolic::{parse_expression, DomainConstraint, Expr, Relation, Symbol, ZeroConfig};

pub fn chart(coords: &[&str], cons: &[(&str, Relation, &str)]) -> Arc<Chart> {
    let syms: Vec<Symbol> = coords.iter().map(|s| Symbol::new(s)).collect();
    let cons = cons
        .iter()
        .map(|(s, r, b)| DomainConstraint::new(Symbol::new(s), *r, parse_expression(b, &syms).unwrap()))
        .collect();
    Arc::new(Chart::new(syms, vec![], cons, ZeroConfig::default()).unwrap())
}

pub fn ex(chart: &Chart, s: &str) -> Expr {
    parse_expression(s, &chart.symbols()).unwrap()
}

pub fn exs(chart: &Chart, s: &[&str]) -> Vec<Expr> {
    s.iter().map(|x| ex(chart, x)).collect()
}

pub fn diag(chart: Arc<Chart>, d: &[&str]) -> Arc<Geometry> {
    let e = exs(&chart, d);
    let g = Tensor2::from_fn(e.len(), |i, j| if i == j { e[i].clone() } else { Expr::zero() });
    Arc::new(Geometry::new(Metric::new(chart, g).unwrap()))
}

pub fn vector(geo: &Geometry, s: &[&str]) -> VectorField {
    VectorField(exs(geo.chart(), s))
}

pub fn form(geo: &Geometry, s: &[&str]) -> OneForm {
    OneForm(exs(geo.chart(), s))
}

/// Geometry with potential field, 1-form and (optional) potential function.
pub struct Fixture {
    pub geo: Arc<Geometry>,
    pub v: VectorField,
    pub eta: OneForm,
    pub f: Option<Expr>,
}

fn fixture(geo: Arc<Geometry>, v: &[&str], eta: &[&str], f: Option<&str>) -> Fixture {
    Fixture {
        v: vector(&geo, v),
        eta: form(&geo, eta),
        f: f.map(|f| ex(geo.chart(), f)),
        geo,
    }
}

pub fn upper_half_space() -> Arc<Chart> {
    chart(&["x", "y", "z"], &[("z", Relation::Greater, "0")])
}

pub fn hyperbolic() -> Fixture {
    let geo = diag(upper_half_space(), &["1/z^2", "1/z^2", "1/z^2"]);
    fixture(geo, &["0", "0", "-z"], &["0", "0", "-1/z"], Some("-ln(z)"))
}

pub fn perturbed_hyperbolic() -> Fixture {
    let geo = diag(upper_half_space(), &["(1+z)/z^2", "1/z^2", "1/z^2"]);
    fixture(geo, &["0", "0", "-z"], &["0", "0", "-1/z"], None)
}

pub fn lorentz() -> Fixture {
    let geo = diag(chart(&["x", "y", "z"], &[]), &["exp(-2*z)", "exp(2*x-2*z)", "-1"]);
    fixture(geo, &["0", "0", "1"], &["0", "0", "1"], Some("-z"))
}

/// Orthonormal frame of the Lorentzian fixture, timelike last.
pub fn lorentz_frame(geo: &Geometry) -> Vec<VectorField> {
    vec![
        vector(geo, &["exp(z)", "0", "0"]),
        vector(geo, &["0", "exp(z-x)", "0"]),
        vector(geo, &["0", "0", "1"]),
    ]
}

pub fn flat() -> Fixture {
    let geo = diag(chart(&["x", "y", "z"], &[]), &["1", "1", "1"]);
    fixture(geo, &["x", "y", "z"], &["x", "y", "z"], Some("(x^2+y^2+z^2)/2"))
}

pub fn flat_spherical() -> Fixture {
    let ch = chart(
        &["s", "th", "ph"],
        &[("s", Relation::Greater, "0"), ("th", Relation::Greater, "0"), ("th", Relation::Less, "pi")],
    );
    let geo = diag(ch, &["1", "s^2", "s^2*sin(th)^2"]);
    fixture(geo, &["s", "0", "0"], &["s", "0", "0"], Some("s^2/2"))
}

pub fn torqued() -> Fixture {
    let geo = diag(chart(&["t", "x", "y"], &[]), &["1", "4/(1+exp(t+x))^2", "4/(1+exp(t+x))^2"]);
    fixture(geo, &["2/(1+exp(t+x))", "0", "0"], &["2/(1+exp(t+x))", "0", "0"], None)
}

pub fn euclid(coords: &[&str]) -> Arc<Geometry> {
    diag(chart(coords, &[]), &vec!["1"; coords.len()])
}

pub fn colatitude_chart() -> Arc<Chart> {
    chart(&["th", "ph"], &[("th", Relation::Greater, "0"), ("th", Relation::Less, "pi")])
}

pub fn s3_chart() -> Arc<Chart> {
    chart(
        &["chi", "th", "ph"],
        &[
            ("chi", Relation::Greater, "0"),
            ("chi", Relation::Less, "pi"),
            ("th", Relation::Greater, "0"),
            ("th", Relation::Less, "pi"),
        ],
    )
}

pub const S3_MAP: [&str; 4] = ["sin(chi)*sin(th)*cos(ph)", "sin(chi)*sin(th)*sin(ph)", "sin(chi)*cos(th)", "cos(chi)"];

/// Latitude sphere `chi = theta0` in the unit 3-sphere of E^4.
pub fn latitude(theta0: &str) -> SphereChain {
    let e4 = euclid(&["x1", "x2", "x3", "x4"]);
    let s3 = s3_chart();
    let m = colatitude_chart();
    let outer = exs(&s3, &S3_MAP);
    let inner = exs(&m, &[theta0, "th", "ph"]);
    SphereChain::new(e4, s3, outer, m, inner).unwrap()
}

/// Assert `e` is identically zero on the chart of `geo`.
pub fn assert_zero(geo: &Geometry, e: &Expr, what: &str) {
    let c = geo.chart().domain().zero_test(e).unwrap();
    assert!(c.verdict.is_zero(), "{what}: {e} is not zero ({:?}, max {})", c.verdict, c.max_abs);
}

/// Assert `a == b` exactly (the difference reduces to 0 symbolically).
pub fn assert_exact(a: &Expr, b: &Expr, what: &str) {
    assert!((a - b).is_zero(), "{what}: {a} != {b}");
}
