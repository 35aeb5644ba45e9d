mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use soliton_core::certify::CheckRecord;
use soliton_core::hypersurface::*;
use soliton_core::riemann::{OneForm, VectorField};
use soliton_core::soliton::{classify_vector_field, einstein_classify, EinsteinCandidates, SolitonKind};
use soliton_core::symbolic::Expr;

fn rec<'a>(recs: &'a [CheckRecord], id: &str) -> &'a CheckRecord {
    recs.iter().find(|r| r.id == id).unwrap_or_else(|| panic!("no record {id}"))
}

fn certified(recs: &[CheckRecord], id: &str) {
    let r = rec(recs, id);
    assert!(r.outcome.is_certified(), "{id}: {} {:?}", r.outcome.as_str(), r.witnesses);
}

fn sphere2() -> Immersion {
    let e3 = euclid(&["x", "y", "z"]);
    let s2 = colatitude_chart();
    let map = exs(&s2, &["sin(th)*cos(ph)", "sin(th)*sin(ph)", "cos(th)"]);
    Immersion::new(s2, e3, map).unwrap()
}

fn plane() -> Immersion {
    let e3 = euclid(&["x", "y", "z"]);
    let ch = chart(&["u", "v"], &[]);
    let map = exs(&ch, &["u", "v", "0"]);
    Immersion::new(ch, e3, map).unwrap()
}

#[test]
fn round_sphere_in_euclidean_space() {
    let imm = sphere2();
    let ind = induce_geometry(&imm).unwrap();
    let geo = &ind.geometry;
    let g = geo.metric().g();
    assert_exact(&g.0[0][0], &Expr::one(), "g_thth");
    assert_zero(geo, &(&g.0[1][1] - &ex(geo.chart(), "sin(th)^2")), "g_phph");
    // Outward normal with det(frame, N) > 0 gives H = -g.
    for i in 0..2 {
        for j in 0..2 {
            assert_zero(geo, &(&ind.second_fundamental.0[i][j] + &g.0[i][j]), "H + g");
        }
    }
    for r in &ind.checks {
        assert!(r.outcome.is_certified(), "{}", r.id);
    }
    let gauss = verify_gauss_equation(&imm, &ind, None).unwrap();
    certified(&gauss, "gauss.ricci");
    certified(&gauss, "gauss.scal");
    let s = rec(&gauss, "gauss.scal");
    assert_eq!(s.witnesses["scal"], "2");
    assert_eq!(s.witnesses["scal (extrinsic)"], "2");
}

#[test]
fn position_field_on_sphere_gives_unit_lambda() {
    let imm = sphere2();
    let ind = induce_geometry(&imm).unwrap();
    let amb = imm.ambient().clone();
    let p = vector(&amb, &["x", "y", "z"]);
    let d = classify_vector_field(&amb, &p).unwrap();
    let sp = split_ambient_field(&imm, &ind, &p).unwrap();
    assert!(sp.reconstruction.outcome.is_certified());
    assert_exact(&sp.rho, &Expr::one(), "rho");
    for c in &sp.tangential.0 {
        assert!(c.is_zero());
    }
    let rep = solve_submanifold_soliton(&imm, &ind, &sp, &d.a, &d.psi, SolitonKind::EtaRicci, Some(&Expr::zero())).unwrap();
    certified(&rep.records, "submanifold.ricci.soliton");
    certified(&rep.records, "submanifold.ricci.hypersurface");
    assert_exact(&rep.solution.as_ref().unwrap().lambda, &Expr::one(), "lambda");
    let ricci = rep.solution.unwrap();
    let rep = solve_submanifold_soliton(&imm, &ind, &sp, &d.a, &d.psi, SolitonKind::EtaYamabe, Some(&Expr::zero())).unwrap();
    assert_exact(&rep.solution.as_ref().unwrap().lambda, &Expr::int(2), "yamabe lambda");

    let u = umbilical_classify(&ind, &UmbilicalCandidates::default()).unwrap();
    assert_eq!(u.class, UmbilicClass::TotallyUmbilical);
    assert_exact(&u.coefficients["alpha"], &Expr::int(-1), "alpha");

    let ric = einstein_classify(&ind.geometry, ind.geometry.ricci(), &EinsteinCandidates::default()).unwrap();
    let prop = verify_quasi_umbilical_proposition(&imm, &ind, &sp, &d.a, &d.psi, &ricci, &ric).unwrap();
    assert!(!prop.outcome.is_failed(), "{:?}", prop.witnesses);
}

#[test]
fn plane_is_steady_and_minimal() {
    let imm = plane();
    let ind = induce_geometry(&imm).unwrap();
    assert!(ind.second_fundamental.0.iter().flatten().all(Expr::is_zero));
    let amb = imm.ambient().clone();
    let z = vector(&amb, &["0", "0", "1"]);
    let sp = split_ambient_field(&imm, &ind, &z).unwrap();
    let rep =
        solve_submanifold_soliton(&imm, &ind, &sp, &Expr::zero(), &OneForm::zero(3), SolitonKind::EtaRicci, Some(&Expr::zero()))
            .unwrap();
    assert_exact(&rep.solution.as_ref().unwrap().lambda, &Expr::zero(), "lambda");
    assert_eq!(rec(&rep.records, "submanifold.ricci.soliton").witnesses["sign"], "steady");
    certified(&rep.records, "submanifold.ricci.minimal-scal");
}

fn check_latitude(theta0: &str) {
    let chain = latitude(theta0);
    assert!(chain.chain.outcome.is_certified());
    let e4 = chain.outer.ambient().clone();
    let v = VectorField(exs(e4.chart(), &["0", "0", "0", "1"]));
    let r = sphere_hypersurface_analysis(&chain, &v, &Expr::zero(), &OneForm::zero(4)).unwrap();
    let geo = &r.induced.geometry;
    let t0 = ex(geo.chart(), theta0);
    let cot = &t0.cos() / &t0.sin();
    let g = geo.metric().g();
    for i in 0..2 {
        for j in 0..2 {
            let want = &(-&cot) * &g.0[i][j];
            assert_zero(geo, &(&r.induced.second_fundamental.0[i][j] - &want), "H = -cot g");
        }
    }
    for id in [
        "gauss.ricci",
        "gauss.scal",
        "sphere.xi-recurrence",
        "sphere.nabla-u",
        "sphere.lie-u",
        "sphere.soliton-ricci.agreement",
        "sphere.soliton-yamabe.agreement",
    ] {
        certified(&r.records, id);
    }
    let gs = rec(&r.records, "gauss.scal");
    assert_eq!(gs.witnesses["scal"], gs.witnesses["scal (extrinsic)"]);
    for id in ["sphere.soliton-ricci.agreement", "sphere.soliton-yamabe.agreement"] {
        assert_eq!(rec(&r.records, id).witnesses["mu"], "undetermined in both");
    }
    let inv_sin2 = &Expr::one() / &t0.sin().powi(2);
    let ricci = r.ricci.as_ref().unwrap();
    let yamabe = r.yamabe.as_ref().unwrap();
    assert_zero(geo, &(&ricci.lambda - &inv_sin2), "lambda = 1/sin^2");
    assert_zero(geo, &(&yamabe.lambda - &(&Expr::int(2) * &inv_sin2)), "yamabe lambda = 2/sin^2");
    assert!(ricci.mu.is_none() && yamabe.mu.is_none());
}

#[test]
fn latitude_pi_over_6() {
    check_latitude("pi/6");
}

#[test]
fn latitude_pi_over_4() {
    check_latitude("pi/4");
}

#[test]
fn equator_is_totally_geodesic() {
    check_latitude("pi/2");
    let chain = latitude("pi/2");
    let ind = induce_geometry(&chain.inner).unwrap();
    assert!(ind.second_fundamental.0.iter().flatten().all(Expr::is_zero));
}

#[test]
fn non_hypersurface_is_rejected() {
    let e4 = euclid(&["a", "b", "c", "d"]);
    let ch = chart(&["u", "v"], &[]);
    assert!(Immersion::new(ch, Arc::clone(&e4), exs(&chart(&["u", "v"], &[]), &["u", "v", "0", "0"])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn latitude_family(k in 2i64..28) {
        // theta0 = k/10 in (0, pi)
        let theta0 = format!("{k}/10");
        let chain = latitude(&theta0);
        let e4 = chain.outer.ambient().clone();
        let v = VectorField(exs(e4.chart(), &["0", "0", "0", "1"]));
        let r = sphere_hypersurface_analysis(&chain, &v, &Expr::zero(), &OneForm::zero(4)).unwrap();
        let x = k as f64 / 10.0;
        let lambda = r.ricci.as_ref().unwrap().lambda.eval(&Default::default()).unwrap();
        prop_assert!((lambda - 1.0 / x.sin().powi(2)).abs() < 1e-12, "lambda {lambda}");
        prop_assert!(r.records.iter().all(|c| !c.outcome.is_failed()));
    }
}

fn verdicts(recs: &[CheckRecord]) -> Vec<(String, &'static str)> {
    recs.iter().map(|r| (r.id.clone(), r.outcome.as_str())).collect()
}

/// Records of the Gauss and submanifold checks under one normal orientation.
fn oriented_records(imm: &Immersion, ind: &InducedGeometry, v: &VectorField) -> (Vec<CheckRecord>, Expr) {
    let amb = imm.ambient();
    let d = classify_vector_field(amb, v).unwrap();
    let c = if imm.ambient().dim() == 3 { Expr::zero() } else { Expr::one() };
    let mut recs = verify_gauss_equation(imm, ind, Some(&c)).unwrap();
    let sp = split_ambient_field(imm, ind, v).unwrap();
    recs.push(sp.reconstruction.clone());
    for kind in [SolitonKind::EtaRicci, SolitonKind::EtaYamabe] {
        recs.extend(solve_submanifold_soliton(imm, ind, &sp, &d.a, &d.psi, kind, Some(&c)).unwrap().records);
    }
    recs.push(umbilical_classify(ind, &UmbilicalCandidates::default()).unwrap().record());
    (recs, sp.rho)
}

fn assert_flip_invariant(imm: &Immersion, v: &VectorField, what: &str) {
    let ind = induce_geometry(imm).unwrap();
    let flip = ind.flipped();
    for (a, b) in ind.second_fundamental.0.iter().flatten().zip(flip.second_fundamental.0.iter().flatten()) {
        assert!((a + b).is_zero(), "{what}: H not negated");
    }
    let (r1, rho1) = oriented_records(imm, &ind, v);
    let (r2, rho2) = oriented_records(imm, &flip, v);
    assert_eq!(verdicts(&r1), verdicts(&r2), "{what}");
    assert_zero(&ind.geometry, &(&rho1 + &rho2), &format!("{what}: rho"));
}

#[test]
fn normal_flip_leaves_verdicts_unchanged() {
    let imm = sphere2();
    let amb = imm.ambient().clone();
    assert_flip_invariant(&imm, &vector(&amb, &["x", "y", "z"]), "S2 position");
    assert_flip_invariant(&imm, &vector(&amb, &["0", "0", "1"]), "S2 constant");
    let imm = plane();
    assert_flip_invariant(&imm, &vector(&amb, &["0", "0", "1"]), "plane");
    for t in ["pi/6", "pi/3"] {
        let chain = latitude(t);
        let e4 = chain.outer.ambient().clone();
        let v = VectorField(exs(e4.chart(), &["0", "0", "0", "1"]));
        let xi = sphere_hypersurface_analysis(&chain, &v, &Expr::zero(), &OneForm::zero(4)).unwrap().xi;
        assert_flip_invariant(&chain.inner, &xi, t);
    }
}
