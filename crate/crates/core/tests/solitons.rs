mod common;

use common::*;
use proptest::prelude::*;
use soliton_core::certify::CheckRecord;
use soliton_core::riemann::OneForm;
use soliton_core::soliton::*;
use soliton_core::symbolic::{Expr, Relation};

fn rec<'a>(recs: &'a [CheckRecord], id: &str) -> &'a CheckRecord {
    recs.iter().find(|r| r.id == id).unwrap_or_else(|| panic!("no record {id}"))
}

fn certified(recs: &[CheckRecord], id: &str) {
    let r = rec(recs, id);
    assert!(r.outcome.is_certified(), "{id}: {} {:?}", r.outcome.as_str(), r.witnesses);
}

fn mu(s: &SolitonSolution) -> &Expr {
    s.mu.as_ref().expect("mu determined")
}

#[test]
fn hyperbolic_eta_ricci() {
    let h = hyperbolic();
    let s = solve_eta_ricci(&h.geo, &h.v, Some(&h.eta)).unwrap();
    assert_exact(&s.lambda, &Expr::int(-1), "lambda");
    assert_exact(mu(&s), &Expr::int(-1), "mu");
    assert!(s.residual.passed());
    assert_eq!(s.sign, SolitonSign::Expanding);
    assert_eq!(s.kind, SolitonKind::EtaRicci);
}

#[test]
fn hyperbolic_eta_yamabe() {
    let h = hyperbolic();
    let s = solve_eta_yamabe(&h.geo, &h.v, Some(&h.eta)).unwrap();
    assert_exact(&s.lambda, &Expr::int(-7), "lambda");
    assert_exact(mu(&s), &Expr::int(-1), "mu");
    assert_exact(h.geo.scal(), &Expr::int(-6), "scal");
}

#[test]
fn lorentz_eta_ricci() {
    let l = lorentz();
    let ch = l.geo.chart();
    let s = solve_eta_ricci(&l.geo, &l.v, Some(&l.eta)).unwrap();
    assert_zero(&l.geo, &(&s.lambda - &ex(ch, "1 - exp(2*z)")), "lambda");
    assert_zero(&l.geo, &(mu(&s) - &ex(ch, "-1 - exp(2*z)")), "mu");
    assert!(!s.lambda_constant);
    assert_eq!(s.sign, SolitonSign::NonConstant);
}

#[test]
fn lorentz_eta_yamabe() {
    let l = lorentz();
    let ch = l.geo.chart();
    let s = solve_eta_yamabe(&l.geo, &l.v, Some(&l.eta)).unwrap();
    assert_zero(&l.geo, &(&s.lambda - &ex(ch, "7 - 2*exp(2*z)")), "lambda");
    assert_zero(&l.geo, &(mu(&s) + &Expr::one()), "mu");
    assert_zero(&l.geo, &(l.geo.scal() - &ex(ch, "2*(3 - exp(2*z))")), "scal");
}

#[test]
fn gradient_potentials() {
    for f in [hyperbolic(), lorentz(), flat(), flat_spherical()] {
        let r = check_gradient_potential(&f.geo, &f.v, f.f.as_ref()).unwrap();
        assert!(r.outcome.is_certified(), "{:?}", r.witnesses);
        assert_eq!(r.id, "gradient.potential");
    }
    // Wrong potential is refuted.
    let h = hyperbolic();
    let wrong = ex(h.geo.chart(), "ln(z)");
    assert!(check_gradient_potential(&h.geo, &h.v, Some(&wrong)).unwrap().outcome.is_failed());
    // Closedness alone is reported as a necessary condition.
    let r = check_gradient_potential(&h.geo, &h.v, None).unwrap();
    assert_eq!(r.id, "gradient.closed-dual");
}

#[test]
fn torse_forming_classification() {
    let h = hyperbolic();
    let d = classify_vector_field(&h.geo, &h.v).unwrap();
    assert_eq!(d.class, FieldClass::TorseForming);
    assert_exact(&d.a, &Expr::one(), "a");
    assert_zero(&h.geo, &(&d.psi.0[2] - &ex(h.geo.chart(), "1/z")), "psi_z");

    let l = lorentz();
    let d = classify_vector_field(&l.geo, &l.v).unwrap();
    assert_eq!(d.class, FieldClass::TorseForming);
    assert_exact(&d.a, &Expr::int(-1), "a");
    assert_exact(&d.psi.0[2], &Expr::one(), "psi_z");

    for f in [flat(), flat_spherical()] {
        let d = classify_vector_field(&f.geo, &f.v).unwrap();
        assert_eq!(d.class, FieldClass::Concurrent);
        assert!(d.has(FieldClass::Concircular));
        assert_exact(&d.a, &Expr::one(), "a");
    }

    let t = torqued();
    let d = classify_vector_field(&t.geo, &t.v).unwrap();
    assert_eq!(d.class, FieldClass::Torqued);
    assert!(d.psi_of(&t.v).is_zero() || t.geo.chart().domain().zero_test(&d.psi_of(&t.v)).unwrap().verdict.is_zero());

    // Rotation field on the plane is not torse-forming.
    let geo = diag(chart(&["x", "y"], &[]), &["1", "1"]);
    let d = classify_vector_field(&geo, &vector(&geo, &["-y", "x"])).unwrap();
    assert_eq!(d.class, FieldClass::NotTorseForming);
}

#[test]
fn parallel_field_is_parallel() {
    let f = flat();
    let d = classify_vector_field(&f.geo, &vector(&f.geo, &["0", "0", "1"])).unwrap();
    assert_eq!(d.class, FieldClass::Parallel);
}

#[test]
fn concurrent_flat_solitons_shrink() {
    for f in [flat(), flat_spherical()] {
        let s = solve_eta_ricci(&f.geo, &f.v, Some(&f.eta)).unwrap();
        assert_exact(&s.lambda, &Expr::one(), "lambda");
        assert_eq!(s.sign, SolitonSign::Shrinking);
        let d = classify_vector_field(&f.geo, &f.v).unwrap();
        let recs = verify_concircular_identities(&f.geo, &f.v, &d).unwrap();
        for r in &recs {
            assert!(r.outcome.is_certified(), "{}", r.id);
        }
        let recs = verify_proposition_p(&f.geo, &f.v, &f.eta, &d, &s).unwrap();
        for r in &recs {
            assert!(!r.outcome.is_failed(), "{} {:?}", r.id, r.witnesses);
        }
    }
}

#[test]
fn yamabe_mu_zero_branch_on_concircular_field() {
    let f = flat();
    let d = classify_vector_field(&f.geo, &f.v).unwrap();
    let s = solve_eta_yamabe(&f.geo, &f.v, Some(&f.eta)).unwrap();
    assert_exact(mu(&s), &Expr::zero(), "mu");
    // mu = 0 forces lambda = scal - a.
    assert_exact(&s.lambda, &Expr::int(-1), "lambda");
    let recs = verify_yamabe_identities(&f.geo, &f.v, &f.eta, &d, &s).unwrap();
    certified(&recs, "yamabe.mu-zero");
    certified(&recs, "yamabe.vv");
}

#[test]
fn yamabe_identities_on_examples() {
    for f in [hyperbolic(), lorentz()] {
        let d = classify_vector_field(&f.geo, &f.v).unwrap();
        let s = solve_eta_yamabe(&f.geo, &f.v, Some(&f.eta)).unwrap();
        let recs = verify_yamabe_identities(&f.geo, &f.v, &f.eta, &d, &s).unwrap();
        certified(&recs, "yamabe.vv");
        certified(&recs, "yamabe.uu");
        certified(&recs, "yamabe.collinear");
        assert!(recs.iter().all(|r| !r.outcome.is_failed()));
    }
}

#[test]
fn hessian_of_potential_is_torse_forming() {
    let h = hyperbolic();
    let recs = verify_hessian_torse_forming(&h.geo, h.f.as_ref().unwrap(), None, None).unwrap();
    certified(&recs, "hessian.form");
    certified(&recs, "hessian.torse-forming");
    assert_eq!(rec(&recs, "hessian.form").witnesses["delta"], "-1");
}

#[test]
fn perturbed_metric_is_not_a_soliton() {
    let p = perturbed_hyperbolic();
    match solve_eta_ricci(&p.geo, &p.v, Some(&p.eta)) {
        Err(SolitonError::NotASoliton { component, residual, .. }) => {
            assert!(!component.is_empty());
            assert!(!residual.is_zero());
        }
        other => panic!("expected NotASoliton, got {other:?}"),
    }
    let (r, sol) = solution_record("soliton.ricci", "eta-Ricci", solve_eta_ricci(&p.geo, &p.v, Some(&p.eta))).unwrap();
    assert!(sol.is_none());
    assert!(r.outcome.is_failed());
    assert_eq!(r.witnesses["verdict"], "not a soliton");
    assert!(r.residual.as_ref().unwrap().max_abs > 0.0);
}

#[test]
fn einstein_taxonomy() {
    let h = hyperbolic();
    let e = einstein_classify(&h.geo, h.geo.ricci(), &EinsteinCandidates { a: Some(&h.eta), b: None, e: None }).unwrap();
    assert_eq!(e.class, EinsteinClass::Einstein);
    assert_exact(&e.coefficients["alpha"], &Expr::int(-2), "alpha");

    let t = torqued();
    let d = classify_vector_field(&t.geo, &t.v).unwrap();
    let e = einstein_classify(&t.geo, t.geo.ricci(), &EinsteinCandidates { a: Some(&t.eta), b: Some(&d.psi), e: None }).unwrap();
    assert_eq!(e.class, EinsteinClass::MixedGeneralizedQuasiEinstein);
    assert!(e.residual.passed());
}

#[test]
fn torqued_structure() {
    let t = torqued();
    let d = classify_vector_field(&t.geo, &t.v).unwrap();
    let s = solve_eta_ricci(&t.geo, &t.v, Some(&t.eta)).unwrap();
    let recs = verify_torqued_structure(&t.geo, &t.v, &t.eta, &d, &s).unwrap();
    certified(&recs, "torqued.orthogonality");
    assert!(recs.iter().all(|r| !r.outcome.is_failed()), "{recs:?}");
    // No torqued η-Yamabe soliton exists for this field.
    assert!(solve_eta_yamabe(&t.geo, &t.v, Some(&t.eta)).is_err());
}

#[test]
fn dual_relation_of_examples() {
    let h = hyperbolic();
    assert!(dual_relation(&h.geo, &h.v, &h.eta).unwrap().squares_agree());
    let zero = OneForm::zero(3);
    assert!(!dual_relation(&h.geo, &h.v, &zero).unwrap().squares_agree());
}

#[test]
fn gradient_soliton_matches_hessian_form() {
    for f in [hyperbolic(), lorentz(), flat()] {
        let pot = f.f.as_ref().unwrap();
        assert!(check_gradient_potential(&f.geo, &f.v, Some(pot)).unwrap().outcome.is_certified());
        let half_lie = f.geo.lie_derivative_metric(&f.v);
        let hess = f.geo.hessian(pot);
        for i in 0..3 {
            for j in 0..3 {
                assert_zero(&f.geo, &(&(&half_lie.0[i][j] / &Expr::int(2)) - &hess.0[i][j]), "1/2 Lie g = Hess f");
            }
        }
        let grad = f.geo.gradient(pot);
        let a = solve_eta_ricci(&f.geo, &f.v, Some(&f.eta)).unwrap();
        let b = solve_eta_ricci(&f.geo, &grad, Some(&f.eta)).unwrap();
        assert_zero(&f.geo, &(&a.lambda - &b.lambda), "lambda");
        assert_zero(&f.geo, &(mu(&a) - mu(&b)), "mu");
    }
}

#[test]
fn solutions_have_zero_residual_and_imply_the_vv_identity() {
    for f in [hyperbolic(), lorentz(), flat(), flat_spherical()] {
        let d = classify_vector_field(&f.geo, &f.v).unwrap();
        let r = solve_eta_ricci(&f.geo, &f.v, Some(&f.eta)).unwrap();
        let y = solve_eta_yamabe(&f.geo, &f.v, Some(&f.eta)).unwrap();
        assert!(r.residual.passed() && y.residual.passed());
        let recs = verify_yamabe_identities(&f.geo, &f.v, &f.eta, &d, &y).unwrap();
        certified(&recs, "yamabe.vv");
    }
}

fn lattice_consistent(d: &TorseFormingDecomposition) -> bool {
    let implied: &[FieldClass] = match d.class {
        FieldClass::Parallel => &[FieldClass::Concircular, FieldClass::Recurrent, FieldClass::TorseForming],
        FieldClass::Concurrent => &[FieldClass::Concircular, FieldClass::TorseForming],
        FieldClass::Concircular | FieldClass::Recurrent | FieldClass::Torqued => &[FieldClass::TorseForming],
        _ => &[],
    };
    d.has(d.class) && implied.iter().all(|c| d.has(*c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// `V -> cV` scales `a` by `c` and leaves `ψ` unchanged; the class tag
    /// stays consistent with the lattice.
    #[test]
    fn constant_rescaling_of_the_field(which in 0usize..5, p in 1i64..5, q in 1i64..4, neg in any::<bool>()) {
        let f = [hyperbolic, lorentz, flat, flat_spherical, torqued][which]();
        let c = Expr::int(if neg { -p } else { p }) / Expr::int(q);
        let cv = soliton_core::riemann::VectorField(f.v.0.iter().map(|e| &c * e).collect());
        let d1 = classify_vector_field(&f.geo, &f.v).unwrap();
        let d2 = classify_vector_field(&f.geo, &cv).unwrap();
        let dom = f.geo.chart().domain();
        prop_assert!(dom.zero_test(&(&d2.a - &(&c * &d1.a))).unwrap().verdict.is_zero());
        for (x, y) in d1.psi.0.iter().zip(&d2.psi.0) {
            prop_assert!(dom.zero_test(&(x - y)).unwrap().verdict.is_zero());
        }
        prop_assert!(lattice_consistent(&d1) && lattice_consistent(&d2));
    }

    /// `g = c^2 (dx^2 + dy^2 + dz^2) / z^2`, `V = -z d/dz`, `η = V♭`:
    /// `λ = 1 - 2/c^2`, `μ = -1/c^2`, worked by hand from `Ric = -2 g / c^2`
    /// and `£_V g = 2 c^2 (dx^2 + dy^2) / z^2`.
    #[test]
    fn scaled_hyperbolic_family(p in 1i64..6, q in 1i64..4) {
        let ch = chart(&["x", "y", "z"], &[("z", Relation::Greater, "0")]);
        let c2 = format!("({p}/{q})^2");
        let comp = format!("{c2}/z^2");
        let geo = diag(ch.clone(), &[&comp, &comp, &comp]);
        let v = vector(&geo, &["0", "0", "-z"]);
        let eta = geo.metric().lower(&v);
        let s = solve_eta_ricci(&geo, &v, Some(&eta)).unwrap();
        let c2 = ex(&ch, &c2);
        prop_assert!((&s.lambda - &(&Expr::one() - &(&Expr::int(2) / &c2))).is_zero(), "lambda = {}", s.lambda);
        prop_assert!((mu(&s) + &(&Expr::one() / &c2)).is_zero(), "mu = {}", mu(&s));
    }
}
