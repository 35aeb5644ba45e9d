//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see
//! the table.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::Value;
use soliton_core::oracle::christoffel_discrepancy;
use soliton_core::symbolic::{parse_expression, ZeroConfig};
use soliton_forge::{run, Model};

/// Relative tolerance of the Christoffel finite-difference oracle.
const FD_REL_TOL: f64 = 1e-5;
/// Number of sample points for the oracle comparison.
const FD_POINTS: usize = 16;
/// Zero-test tolerance used for every CLI run.
const ZERO_TOL: &str = "1e-9";
const SAMPLES: &str = "32";

type Check = Result<(), String>;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

struct Run {
    report: Value,
    stdout: String,
    code: i32,
}

fn forge(args: &[&str]) -> Result<Run, String> {
    let mut argv = vec!["soliton-forge".to_string()];
    for a in args {
        argv.push(if a.ends_with(".man") { corpus(a).display().to_string() } else { a.to_string() });
    }
    argv.extend(["--format", "json", "--tol", ZERO_TOL, "--samples", SAMPLES].map(String::from));
    let out = run(argv);
    if out.code == 2 {
        return Err(format!("{args:?}: {}", out.stderr.trim()));
    }
    let report = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    Ok(Run {
        report,
        stdout: out.stdout,
        code: out.code,
    })
}

fn record<'a>(r: &'a Run, id: &str) -> Result<&'a Value, String> {
    r.report["checks"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["id"] == id))
        .ok_or_else(|| format!("no record {id}"))
}

fn certified<'a>(r: &'a Run, id: &str) -> Result<&'a Value, String> {
    let c = record(r, id)?;
    let v = c["verdict"].as_str().unwrap_or("");
    if v.starts_with("certified") {
        Ok(c)
    } else {
        Err(format!("{id} is {v}"))
    }
}

fn witness<'a>(c: &'a Value, key: &str) -> Result<&'a str, String> {
    c["witnesses"][key].as_str().ok_or_else(|| format!("{} has no witness {key}", c["id"]))
}

/// The witness, read back as an expression, equals `want` on the document's
/// domain.
fn equals(doc: &str, c: &Value, key: &str, want: &str) -> Check {
    let got = witness(c, key)?;
    let m = Model::load(&corpus(doc), ZeroConfig::default()).map_err(|e| e.to_string())?;
    let syms = m.chart.symbols();
    let a = parse_expression(got, &syms).map_err(|e| format!("{key} = {got}: {e}"))?;
    let b = parse_expression(want, &syms).map_err(|e| e.to_string())?;
    let z = m.chart.domain().zero_test(&(&a - &b)).map_err(|e| e.to_string())?;
    if z.verdict.is_zero() {
        Ok(())
    } else {
        Err(format!("{} {key} = {got}, expected {want}", c["id"]))
    }
}

fn c1() -> Check {
    let r = forge(&["solve", "ricci", "hyperbolic.man", "--vector", "V", "--eta", "eta"])?;
    let c = certified(&r, "soliton.ricci")?;
    equals("hyperbolic.man", c, "lambda", "-1")?;
    equals("hyperbolic.man", c, "mu", "-1")
}

fn c2() -> Check {
    let r = forge(&["solve", "yamabe", "hyperbolic.man", "--vector", "V", "--eta", "eta"])?;
    let c = certified(&r, "soliton.yamabe")?;
    equals("hyperbolic.man", c, "lambda", "-7")?;
    equals("hyperbolic.man", c, "mu", "-1")?;
    equals("hyperbolic.man", c, "scal", "-6")
}

fn c3() -> Check {
    let r = forge(&["solve", "ricci", "lorentz.man", "--vector", "V", "--eta", "eta"])?;
    let c = certified(&r, "soliton.ricci")?;
    equals("lorentz.man", c, "lambda", "1 - exp(2*z)")?;
    equals("lorentz.man", c, "mu", "-1 - exp(2*z)")?;
    let r = forge(&["curvature", "lorentz.man", "--frame", "E"])?;
    let c = certified(&r, "frame.orthonormal")?;
    equals("lorentz.man", c, "Ric(E1,E1)", "2 - exp(2*z)")?;
    equals("lorentz.man", c, "Ric(E2,E2)", "2 - exp(2*z)")?;
    equals("lorentz.man", c, "Ric(E3,E3)", "-2")
}

fn c4() -> Check {
    let r = forge(&["solve", "yamabe", "lorentz.man", "--vector", "V", "--eta", "eta"])?;
    let c = certified(&r, "soliton.yamabe")?;
    equals("lorentz.man", c, "lambda", "7 - 2*exp(2*z)")?;
    equals("lorentz.man", c, "mu", "-1")?;
    equals("lorentz.man", c, "scal", "2*(3 - exp(2*z))")
}

fn c5() -> Check {
    for (doc, f) in [("hyperbolic.man", "-ln(z)"), ("lorentz.man", "-z")] {
        let r = forge(&["check", "gradient", doc, "--vector", "V", "--function", "f"])?;
        let c = certified(&r, "gradient.potential")?;
        equals(doc, c, "f", f)?;
    }
    Ok(())
}

fn c6() -> Check {
    for doc in ["flat.man", "flat_spherical.man"] {
        let r = forge(&["classify-vector", doc, "--vector", "P"])?;
        let c = certified(&r, "vector.torse-forming")?;
        if witness(c, "class")? != "concurrent" {
            return Err(format!("{doc}: class {}", witness(c, "class")?));
        }
        let r = forge(&["solve", "ricci", doc, "--vector", "P", "--eta", "eta"])?;
        let c = certified(&r, "soliton.ricci")?;
        equals(doc, c, "lambda", "1")?;
        if witness(c, "sign")? != "shrinking" {
            return Err(format!("{doc}: sign {}", witness(c, "sign")?));
        }
    }
    Ok(())
}

fn corpus_docs() -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(corpus(""))
        .unwrap()
        .filter_map(|e| {
            let n = e.ok()?.file_name().into_string().ok()?;
            n.ends_with(".man").then_some(n)
        })
        .collect();
    v.sort();
    v
}

fn c7() -> Check {
    const IDENTITIES: [&str; 7] = [
        "curvature.antisymmetry",
        "curvature.contracted-bianchi",
        "curvature.first-bianchi",
        "curvature.metric-compatibility",
        "curvature.pair-symmetry",
        "curvature.ricci-symmetric",
        "curvature.torsion-free",
    ];
    for doc in corpus_docs() {
        let r = forge(&["curvature", &doc])?;
        for id in IDENTITIES {
            certified(&r, id).map_err(|e| format!("{doc}: {e}"))?;
        }
        let m = Model::load(&corpus(&doc), ZeroConfig::default()).map_err(|e| e.to_string())?;
        let pts: Vec<_> = m.chart.domain().points().iter().take(FD_POINTS).cloned().collect();
        if pts.len() < FD_POINTS {
            return Err(format!("{doc}: only {} sample points", pts.len()));
        }
        let worst = christoffel_discrepancy(&m.geometry, &pts).map_err(|e| e.to_string())?;
        if worst > FD_REL_TOL {
            return Err(format!("{doc}: Christoffel vs finite differences {worst:e} > {FD_REL_TOL:e}"));
        }
    }
    Ok(())
}

fn gauss_exact(r: &Run, what: &str) -> Check {
    certified(r, "gauss.ricci").map_err(|e| format!("{what}: {e}"))?;
    let c = certified(r, "gauss.scal").map_err(|e| format!("{what}: {e}"))?;
    let (a, b) = (witness(c, "scal")?, witness(c, "scal (extrinsic)")?);
    if a != b {
        return Err(format!("{what}: intrinsic scal {a} != extrinsic {b}"));
    }
    Ok(())
}

const LATITUDES: [&str; 3] = ["latitude_pi6.man", "latitude_pi4.man", "latitude_pi2.man"];

fn c8() -> Check {
    let r = forge(&["hypersurface", "sphere2.man", "--ambient-vector", "P"])?;
    gauss_exact(&r, "sphere2")?;
    let r = forge(&["hypersurface", "plane.man", "--ambient-vector", "Z"])?;
    gauss_exact(&r, "plane")?;
    for doc in LATITUDES {
        let r = forge(&["sphere-hypersurface", doc, "--ambient-vector", "E4"])?;
        gauss_exact(&r, doc)?;
    }
    Ok(())
}

fn c9() -> Check {
    for (doc, lambda) in LATITUDES.iter().zip(["4", "2", "1"]) {
        let r = forge(&["sphere-hypersurface", doc, "--ambient-vector", "E4"])?;
        for id in ["sphere.xi-recurrence", "sphere.nabla-u", "sphere.lie-u"] {
            certified(&r, id).map_err(|e| format!("{doc}: {e}"))?;
        }
        for kind in ["ricci", "yamabe"] {
            let c = certified(&r, &format!("sphere.soliton-{kind}.agreement")).map_err(|e| format!("{doc}: {e}"))?;
            if witness(c, "mu")? != "undetermined in both" {
                return Err(format!("{doc}: {kind} mu {}", witness(c, "mu")?));
            }
        }
        let c = certified(&r, "sphere.soliton-ricci")?;
        equals(doc, c, "lambda", lambda)?;
    }
    Ok(())
}

fn c10() -> Check {
    for doc in ["hyperbolic.man", "lorentz.man"] {
        let r = forge(&["verify", "identities", doc, "--vector", "V", "--eta", "eta"])?;
        certified(&r, "yamabe.vv").map_err(|e| format!("{doc}: {e}"))?;
    }
    let r = forge(&["verify", "identities", "flat.man", "--vector", "P", "--eta", "eta"])?;
    certified(&r, "yamabe.mu-zero")?;
    let c = certified(&r, "soliton.yamabe")?;
    equals("flat.man", c, "mu", "0")
}

fn c11() -> Check {
    let args = ["solve", "ricci", "perturbed_hyperbolic.man", "--vector", "V", "--eta", "eta"];
    let r = forge(&args)?;
    if r.code == 0 {
        return Err("perturbed metric exited 0".into());
    }
    let c = record(&r, "soliton.ricci")?;
    if c["verdict"] != "failed" || witness(c, "verdict")? != "not a soliton" {
        return Err(format!("perturbed verdict {}", c["verdict"]));
    }
    let max: f64 = c["residual"]["max_abs"].as_str().unwrap_or("0").parse().map_err(|e| format!("{e}"))?;
    if max <= 0.0 || c["residual"]["component"].is_null() {
        return Err("residual is zero or has no component".into());
    }
    let again = forge(&args)?;
    if again.stdout != r.stdout {
        return Err("output differs between identical runs".into());
    }
    Ok(())
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Check); 11] = [
        ("hyperbolic eta-Ricci: lambda = mu = -1", c1),
        ("hyperbolic eta-Yamabe: lambda = -7, mu = -1, scal = -6", c2),
        ("Lorentzian eta-Ricci and frame Ricci", c3),
        ("Lorentzian eta-Yamabe", c4),
        ("gradient potentials", c5),
        ("flat concurrent fields, lambda = 1 shrinking", c6),
        ("curvature identities and Christoffel oracle", c7),
        ("Gauss equation suite", c8),
        ("sphere hypersurface recurrences and agreement", c9),
        ("Yamabe identities and mu = 0 branch", c10),
        ("negative control and determinism", c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("PASS  {:>2}  {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass ({:.1?})", criteria.len() - failed, criteria.len(), start.elapsed());
    assert_eq!(failed, 0);
}
