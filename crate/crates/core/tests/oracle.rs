mod common;

use common::*;
use soliton_core::hypersurface::{induce_geometry, Immersion};
use soliton_core::oracle::{christoffel_discrepancy, fd_second_fundamental, least_squares_lambda_mu, rel_err};
use soliton_core::riemann::Geometry;
use soliton_core::soliton::{solve_eta_ricci, solve_eta_yamabe};
use soliton_core::symbolic::Point;

fn points(geo: &Geometry, k: usize) -> Vec<Point> {
    geo.chart().domain().points().iter().take(k).cloned().collect()
}

#[test]
fn christoffel_symbols_match_finite_differences() {
    for (name, f) in [
        ("hyperbolic", hyperbolic()),
        ("perturbed", perturbed_hyperbolic()),
        ("lorentz", lorentz()),
        ("flat-spherical", flat_spherical()),
        ("torqued", torqued()),
    ] {
        let pts = points(&f.geo, 16);
        assert_eq!(pts.len(), 16);
        let worst = christoffel_discrepancy(&f.geo, &pts).unwrap();
        assert!(worst < 1e-5, "{name}: {worst:e}");
    }
}

#[test]
fn pointwise_least_squares_matches_symbolic_solve() {
    for (name, f) in [("hyperbolic", hyperbolic()), ("lorentz", lorentz()), ("flat", flat())] {
        let ricci = solve_eta_ricci(&f.geo, &f.v, Some(&f.eta)).unwrap();
        let yamabe = solve_eta_yamabe(&f.geo, &f.v, Some(&f.eta)).unwrap();
        for p in points(&f.geo, 8) {
            for (sol, yam) in [(&ricci, false), (&yamabe, true)] {
                let (l, m) = least_squares_lambda_mu(&f.geo, &f.v, Some(&f.eta), yam, &p).unwrap();
                let l_sym = sol.lambda.eval(&p).unwrap();
                assert!(rel_err(l, l_sym) < 1e-7, "{name} yamabe={yam}: lambda {l} vs {l_sym}");
                if let (Some(m), Some(ms)) = (m, &sol.mu) {
                    let ms = ms.eval(&p).unwrap();
                    assert!(rel_err(m, ms) < 1e-7, "{name} yamabe={yam}: mu {m} vs {ms}");
                }
            }
        }
    }
}

fn assert_h_matches(imm: &Immersion, what: &str) {
    let ind = induce_geometry(imm).unwrap();
    let n = imm.dim();
    for p in points(&ind.geometry, 8) {
        let fd = fd_second_fundamental(imm, &p).unwrap();
        for i in 0..n {
            for j in 0..n {
                let s = ind.second_fundamental.0[i][j].eval(&p).unwrap();
                assert!(rel_err(s, fd[i][j]) < 1e-5, "{what} H[{i}][{j}]: {s} vs {}", fd[i][j]);
            }
        }
    }
}

#[test]
fn second_fundamental_form_matches_finite_differences() {
    let e3 = euclid(&["x", "y", "z"]);
    let s2 = colatitude_chart();
    let map = exs(&s2, &["sin(th)*cos(ph)", "sin(th)*sin(ph)", "cos(th)"]);
    assert_h_matches(&Immersion::new(s2, e3, map).unwrap(), "S2");
    for t in ["pi/6", "pi/4", "pi/2"] {
        let chain = latitude(t);
        assert_h_matches(&chain.inner, t);
        assert_h_matches(&chain.outer, "S3");
    }
}
