mod common;

use common::*;
use proptest::prelude::*;
use soliton_core::riemann::{tensor_on_frame, verify_curvature_identities, Geometry, Metric, Signature};
use soliton_core::symbolic::{Expr, Relation};

fn identities_hold(geo: &Geometry, name: &str) {
    let recs = verify_curvature_identities(geo).unwrap();
    assert!(!recs.is_empty());
    for r in &recs {
        assert!(r.outcome.is_certified(), "{name}: {} is {}", r.id, r.outcome.as_str());
    }
}

#[test]
fn identities_on_every_fixture() {
    for (name, f) in [
        ("hyperbolic", hyperbolic()),
        ("perturbed", perturbed_hyperbolic()),
        ("lorentz", lorentz()),
        ("flat", flat()),
        ("flat-spherical", flat_spherical()),
        ("torqued", torqued()),
    ] {
        identities_hold(&f.geo, name);
    }
}

/// `g(R(d_c, d_d) d_b, d_a) = K (g_ac g_bd - g_ad g_bc)` for constant curvature `K`.
fn assert_constant_curvature(geo: &Geometry, k: &Expr) {
    let n = geo.dim();
    let g = &geo.metric().g().0;
    let low = &geo.curvature().lowered;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let want = k * &(&(&g[a][c] * &g[b][d]) - &(&g[a][d] * &g[b][c]));
                    assert_zero(geo, &(&low[a][b][c][d] - &want), &format!("R[{a}{b}{c}{d}]"));
                }
            }
        }
    }
}

#[test]
fn hyperbolic_space_has_curvature_minus_one() {
    let h = hyperbolic();
    assert_constant_curvature(&h.geo, &Expr::int(-1));
    assert_exact(h.geo.scal(), &Expr::int(-6), "scal");
    let g = h.geo.metric().g();
    for i in 0..3 {
        for j in 0..3 {
            assert_exact(&h.geo.ricci().0[i][j], &(&Expr::int(-2) * &g.0[i][j]), "Ric = -2g");
        }
    }
    assert_eq!(h.geo.metric().signature(), Signature::Riemannian);
}

#[test]
fn unit_sphere_chart_has_curvature_one() {
    let ch = colatitude_chart();
    let geo = diag(ch, &["1", "sin(th)^2"]);
    assert_constant_curvature(&geo, &Expr::one());
    assert_exact(geo.scal(), &Expr::int(2), "scal");
}

#[test]
fn round_three_sphere_has_scal_six() {
    let geo = diag(s3_chart(), &["1", "sin(chi)^2", "sin(chi)^2*sin(th)^2"]);
    assert_constant_curvature(&geo, &Expr::one());
    assert_exact(geo.scal(), &Expr::int(6), "scal = n(n-1)");
}

#[test]
fn lie_derivative_of_metric_is_symmetric() {
    for f in [hyperbolic(), lorentz(), flat_spherical(), torqued()] {
        let l = f.geo.lie_derivative_metric(&f.v);
        for i in 0..3 {
            for j in 0..3 {
                assert!((&l.0[i][j] - &l.0[j][i]).is_zero());
            }
        }
    }
}

#[test]
fn flat_charts_are_flat() {
    for f in [flat(), flat_spherical()] {
        let low = &f.geo.curvature().lowered;
        for e in low.iter().flatten().flatten().flatten() {
            assert_zero(&f.geo, e, "Riemann");
        }
        assert_zero(&f.geo, f.geo.scal(), "scal");
    }
}

#[test]
fn lorentz_ricci_on_orthonormal_frame() {
    let l = lorentz();
    assert_eq!(l.geo.metric().signature(), Signature::Lorentzian);
    let frame = lorentz_frame(&l.geo);
    let ric = tensor_on_frame(l.geo.ricci(), &frame);
    let ch = l.geo.chart();
    let want = [ex(ch, "2 - exp(2*z)"), ex(ch, "2 - exp(2*z)"), ex(ch, "-2")];
    for a in 0..3 {
        for b in 0..3 {
            let w = if a == b { want[a].clone() } else { Expr::zero() };
            assert_zero(&l.geo, &(&ric[a][b] - &w), &format!("Ric(E{a},E{b})"));
        }
    }
    // Frame trace with the Lorentzian signs.
    let tr = &(&ric[0][0] + &ric[1][1]) - &ric[2][2];
    assert_zero(&l.geo, &(&tr - l.geo.scal()), "scal from frame");
    assert_zero(&l.geo, &(l.geo.scal() - &ex(ch, "6 - 2*exp(2*z)")), "scal");
}

#[test]
fn weyl_tensor_needs_four_dimensions() {
    assert!(hyperbolic().geo.weyl().is_none());
    // A conformally flat 4-metric has vanishing Weyl tensor.
    let ch = chart(&["t", "x", "y", "z"], &[]);
    let geo = diag(ch, &["exp(2*t)", "exp(2*t)", "exp(2*t)", "exp(2*t)"]);
    let w = geo.weyl().unwrap();
    for e in w.iter().flatten().flatten().flatten() {
        assert_zero(&geo, e, "Weyl");
    }
}

#[test]
fn degenerate_metric_is_rejected() {
    let ch = chart(&["x", "y"], &[]);
    let g = soliton_core::riemann::Tensor2(vec![exs(&ch, &["1", "1"]), exs(&ch, &["1", "1"])]);
    assert!(Metric::new(ch, g).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Under `g -> c^2 g` Christoffel symbols and Ricci are unchanged and
    /// `scal` scales by `1/c^2`.
    #[test]
    fn homothety_covariance(p in 1i64..5, q in 1i64..4) {
        let ch = chart(&["t", "x", "y"], &[("t", Relation::Greater, "0")]);
        let base = ["1", "t^2", "t^2*exp(2*x)"];
        let c2 = format!("({p}/{q})^2");
        let scaled: Vec<String> = base.iter().map(|b| format!("{c2}*({b})")).collect();
        let scaled: Vec<&str> = scaled.iter().map(String::as_str).collect();
        let g1 = diag(ch.clone(), &base);
        let g2 = diag(ch.clone(), &scaled);
        let c2 = ex(&ch, &c2);
        for (a, b) in g1.christoffel().0.iter().flatten().flatten().zip(g2.christoffel().0.iter().flatten().flatten()) {
            prop_assert!((a - b).is_zero());
        }
        for (a, b) in g1.ricci().0.iter().flatten().zip(g2.ricci().0.iter().flatten()) {
            prop_assert!(g1.chart().domain().zero_test(&(a - b)).unwrap().verdict.is_zero());
        }
        let r = &(g2.scal() * &c2) - g1.scal();
        prop_assert!(g1.chart().domain().zero_test(&r).unwrap().verdict.is_zero());
    }
}
