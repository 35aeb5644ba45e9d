use std::collections::HashMap;

use proptest::prelude::*;
use soliton_core::symbolic::{
    parse_ast, parse_expression, solve_linear_symbolic, Domain, DomainConstraint, Expr, ParseError, Point, Relation, Symbol,
    Unknown, Verdict, ZeroConfig,
};

fn xy() -> Vec<Symbol> {
    vec![Symbol::new("x"), Symbol::new("y")]
}

fn p(x: f64, y: f64) -> Point {
    HashMap::from([(Symbol::new("x"), x), (Symbol::new("y"), y)])
}

fn e(s: &str) -> Expr {
    parse_expression(s, &xy()).unwrap()
}

/// Random expression text over `x, y` whose denominators stay away from zero
/// on `[-1, 1]^2`.
fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        (1i32..6).prop_map(|k| k.to_string()),
        (1i32..5, 2i32..5).prop_map(|(a, b)| format!("{a}/{b}")),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/(2 + ({b})^2)")),
            (inner.clone(), 0u32..4).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("exp(({a})/4)")),
        ]
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplify_preserves_values(text in expr_text(), x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let ast = parse_ast(&text, &xy()).unwrap();
        let s = parse_expression(&text, &xy()).unwrap();
        let (a, b) = (ast.eval(&p(x, y)).unwrap(), s.eval(&p(x, y)).unwrap());
        prop_assert!(close(a, b, 1e-9), "{text}: {a} vs {b} ({s})");
    }

    #[test]
    fn simplify_is_idempotent_and_print_parse_round_trips(text in expr_text()) {
        let once = e(&text);
        let twice = e(&once.to_string());
        prop_assert_eq!(&once, &twice, "{} printed as {}", text, once);
        prop_assert_eq!(twice.to_string(), once.to_string());
    }

    #[test]
    fn derivative_is_linear(a in expr_text(), b in expr_text(), p in -4i64..5, q in 1i64..4, r in -4i64..5, t in 1i64..4) {
        let (a, b) = (e(&a), e(&b));
        let (al, be) = (e(&format!("{p}/{q}")), e(&format!("{r}/{t}")));
        let x = Symbol::new("x");
        let lhs = (&(&al * &a) + &(&be * &b)).diff(&x);
        let rhs = &(&al * &a.diff(&x)) + &(&be * &b.diff(&x));
        let dom = Domain::free(&["x", "y"]);
        prop_assert!(dom.zero_test(&(&lhs - &rhs)).unwrap().verdict.is_zero());
    }

    #[test]
    fn derivative_matches_central_differences(
        text in expr_text(),
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 32),
    ) {
        let f = e(&text);
        for s in ["x", "y"] {
            let s = Symbol::new(s);
            let df = f.diff(&s);
            for &(x, y) in &pts {
                let pt = p(x, y);
                let h = 1e-5;
                let mut q = pt.clone();
                q.insert(s.clone(), pt[&s] + h);
                let fp = f.eval(&q).unwrap();
                q.insert(s.clone(), pt[&s] - h);
                let fm = f.eval(&q).unwrap();
                let fd = (fp - fm) / (2.0 * h);
                let sym = df.eval(&pt).unwrap();
                prop_assert!(close(sym, fd, 1e-6), "d/d{s} {text} at ({x}, {y}): {sym} vs {fd}");
            }
        }
    }
}

proptest! {
    // Elimination over random rational-function entries is slow; fewer cases.
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn linear_solver_back_substitutes(
        a in prop::collection::vec(-3i64..4, 9),
        shift in -3i64..4,
        sol in prop::collection::vec(expr_text(), 3),
    ) {
        // A = M + (x^2 + 1) I with integer M keeps det nonzero for generic samples
        let dom = Domain::free(&["x", "y"]);
        let diag = e(&format!("x^2 + 4 + {}", shift.abs()));
        let mat: Vec<Vec<Expr>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { &diag + &Expr::int(a[3 * i + j]) } else { Expr::int(a[3 * i + j]) }).collect())
            .collect();
        let det = soliton_core::riemann::determinant(&mat);
        prop_assume!(dom.nonvanishing(&det).unwrap());
        let xs: Vec<Expr> = sol.iter().map(|s| e(s)).collect();
        let rows: Vec<(Vec<Expr>, Expr)> = mat
            .iter()
            .map(|row| (row.clone(), row.iter().zip(&xs).map(|(c, x)| c * x).sum()))
            .collect();
        let out = solve_linear_symbolic(&rows, 3, &dom).unwrap();
        for (u, want) in out.unknowns.iter().zip(&xs) {
            let Unknown::Determined(got) = u else { panic!("undetermined unknown") };
            prop_assert!(dom.zero_test(&(got - want)).unwrap().verdict.is_zero());
        }
    }
}

#[test]
fn exact_arithmetic_and_function_rules() {
    assert_eq!(e("1/3 + 1/6"), e("1/2"));
    assert_eq!(e("(x + 1)^2 - x^2 - 2*x"), Expr::one());
    assert_eq!(e("exp(x)*exp(-x)"), Expr::one());
    assert_eq!(e("x/x"), Expr::one());
    assert!(e("0.25 - 1/4").is_zero());
    assert_eq!(e("-z^2".replace('z', "x").as_str()), -(e("x^2")));
}

#[test]
fn derivatives_of_elementary_functions() {
    let x = Symbol::new("x");
    let dom = Domain::new(xy(), vec![DomainConstraint::new(x.clone(), Relation::Greater, Expr::zero())], ZeroConfig::default()).unwrap();
    let cases = [
        ("sin(x)", "cos(x)"),
        ("cos(x)", "-sin(x)"),
        ("exp(2*x)", "2*exp(2*x)"),
        ("ln(x)", "1/x"),
        ("sqrt(x)", "1/(2*sqrt(x))"),
        ("tan(x)", "1 + tan(x)^2"),
        ("x^3*y", "3*x^2*y"),
    ];
    for (f, df) in cases {
        let r = &e(f).diff(&x) - &e(df);
        assert!(dom.zero_test(&r).unwrap().verdict.is_zero(), "d/dx {f}");
    }
}

#[test]
fn zero_test_separates_identities_from_near_misses() {
    let dom = Domain::free(&["x", "y"]);
    assert!(dom.zero_test(&e("sin(x)^2 + cos(x)^2 - 1")).unwrap().verdict.is_zero());
    assert_eq!(dom.zero_test(&e("(x+y)^3 - x^3 - 3*x^2*y - 3*x*y^2 - y^3")).unwrap().verdict, Verdict::SymbolicZero);
    let c = dom.zero_test(&e("sin(x)^2 + cos(x)^2 - 1 + y/1000000")).unwrap();
    assert_eq!(c.verdict, Verdict::NonZero);
}

#[test]
fn zero_test_is_deterministic_per_seed() {
    let a = Domain::free(&["x", "y"]);
    let b = Domain::free(&["x", "y"]);
    assert_eq!(a.points(), b.points());
    let f = e("sin(x)^2 + cos(x)^2 - 1 + x*y/10");
    assert_eq!(a.zero_test(&f).unwrap(), b.zero_test(&f).unwrap());
    let other = a.with_config(ZeroConfig { seed: 7, ..ZeroConfig::default() }).unwrap();
    assert_ne!(a.points(), other.points());
}

#[test]
fn domain_constraints_hold_at_every_sample() {
    let syms = vec![Symbol::new("s"), Symbol::new("th")];
    let cons = vec![
        DomainConstraint::new(syms[0].clone(), Relation::Greater, Expr::zero()),
        DomainConstraint::new(syms[1].clone(), Relation::Greater, Expr::zero()),
        DomainConstraint::new(syms[1].clone(), Relation::Less, Expr::pi()),
    ];
    let dom = Domain::new(syms.clone(), cons.clone(), ZeroConfig::default()).unwrap();
    assert_eq!(dom.points().len(), 32);
    for pt in dom.points() {
        for c in &cons {
            assert!(c.holds(pt).unwrap(), "{c} fails at {pt:?}");
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    match parse_expression("x + q", &xy()) {
        Err(ParseError::UnknownIdentifier { pos, name }) => assert_eq!((pos, name.as_str()), (4, "q")),
        other => panic!("{other:?}"),
    }
    match parse_expression("x + foo(y)", &xy()) {
        Err(ParseError::UnknownFunction { pos, .. }) => assert_eq!(pos, 4),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_expression("x +", &xy()), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse_expression("x $ y", &xy()), Err(ParseError::Syntax { pos: 2, .. })));
}

#[test]
fn inconsistent_linear_system_is_reported() {
    let dom = Domain::free(&["x", "y"]);
    let rows = vec![(vec![Expr::one()], e("x")), (vec![Expr::one()], e("x + y"))];
    assert!(solve_linear_symbolic(&rows, 1, &dom).is_err());
    let rows = vec![(vec![Expr::one(), Expr::zero()], e("x"))];
    let s = solve_linear_symbolic(&rows, 2, &dom).unwrap();
    assert_eq!(s.free(), vec![1]);
}
