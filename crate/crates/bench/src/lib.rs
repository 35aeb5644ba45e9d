//! Fixtures shared by the engine benchmarks.

use std::sync::Arc;

use soliton_core::hypersurface::SphereChain;
use soliton_core::riemann::{Chart, Geometry, Metric, OneForm, Tensor2, VectorField};
use soliton_core::symbolic::{parse_expression, DomainConstraint, Expr, Relation, Symbol, ZeroConfig};

fn chart(coords: &[&str], cons: &[(&str, Relation, &str)]) -> Arc<Chart> {
    let syms: Vec<Symbol> = coords.iter().map(|s| Symbol::new(s)).collect();
    let cons = cons
        .iter()
        .map(|(s, r, b)| DomainConstraint::new(Symbol::new(s), *r, parse_expression(b, &syms).unwrap()))
        .collect();
    Arc::new(Chart::new(syms, vec![], cons, ZeroConfig::default()).unwrap())
}

fn exs(chart: &Chart, s: &[&str]) -> Vec<Expr> {
    s.iter().map(|x| parse_expression(x, &chart.symbols()).unwrap()).collect()
}

fn diag(chart: Arc<Chart>, d: &[&str]) -> Geometry {
    let e = exs(&chart, d);
    let g = Tensor2::from_fn(e.len(), |i, j| if i == j { e[i].clone() } else { Expr::zero() });
    Geometry::new(Metric::new(chart, g).unwrap())
}

/// Fresh (uncached) upper half-space model with `V = -z d/dz` and `η = V♭`.
pub fn hyperbolic() -> (Geometry, VectorField, OneForm) {
    let geo = diag(chart(&["x", "y", "z"], &[("z", Relation::Greater, "0")]), &["1/z^2", "1/z^2", "1/z^2"]);
    let v = VectorField(exs(geo.chart(), &["0", "0", "-z"]));
    let eta = geo.metric().lower(&v);
    (geo, v, eta)
}

/// Round metric on the 3-sphere in hyperspherical coordinates.
pub fn s3() -> Geometry {
    let ch = chart(
        &["chi", "th", "ph"],
        &[
            ("chi", Relation::Greater, "0"),
            ("chi", Relation::Less, "pi"),
            ("th", Relation::Greater, "0"),
            ("th", Relation::Less, "pi"),
        ],
    );
    diag(ch, &["1", "sin(chi)^2", "sin(chi)^2*sin(th)^2"])
}

/// Latitude sphere `chi = theta0` of the unit 3-sphere in E^4.
pub fn latitude(theta0: &str) -> SphereChain {
    let e4 = Arc::new(diag(chart(&["x1", "x2", "x3", "x4"], &[]), &["1", "1", "1", "1"]));
    let s3 = chart(
        &["chi", "th", "ph"],
        &[
            ("chi", Relation::Greater, "0"),
            ("chi", Relation::Less, "pi"),
            ("th", Relation::Greater, "0"),
            ("th", Relation::Less, "pi"),
        ],
    );
    let m = chart(&["th", "ph"], &[("th", Relation::Greater, "0"), ("th", Relation::Less, "pi")]);
    let outer = exs(&s3, &["sin(chi)*sin(th)*cos(ph)", "sin(chi)*sin(th)*sin(ph)", "sin(chi)*cos(th)", "cos(chi)"]);
    let inner = exs(&m, &[theta0, "th", "ph"]);
    SphereChain::new(e4, s3, outer, m, inner).unwrap()
}
