use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use soliton_bench::{hyperbolic, latitude, s3};
use soliton_core::hypersurface::sphere_hypersurface_analysis;
use soliton_core::riemann::{verify_curvature_identities, OneForm, VectorField};
use soliton_core::soliton::{solve_eta_ricci, solve_eta_yamabe};
use soliton_core::symbolic::Expr;

fn curvature(c: &mut Criterion) {
    c.bench_function("curvature/hyperbolic", |b| {
        b.iter(|| {
            let (geo, _, _) = hyperbolic();
            black_box(geo.scal().clone())
        })
    });
    c.bench_function("curvature/s3", |b| {
        b.iter(|| {
            let geo = s3();
            black_box(geo.scal().clone())
        })
    });
    c.bench_function("curvature/identities-s3", |b| {
        b.iter(|| black_box(verify_curvature_identities(&s3()).unwrap()))
    });
}

fn solve(c: &mut Criterion) {
    c.bench_function("solve/ricci-hyperbolic", |b| {
        b.iter(|| {
            let (geo, v, eta) = hyperbolic();
            black_box(solve_eta_ricci(&geo, &v, Some(&eta)).unwrap())
        })
    });
    c.bench_function("solve/yamabe-hyperbolic", |b| {
        b.iter(|| {
            let (geo, v, eta) = hyperbolic();
            black_box(solve_eta_yamabe(&geo, &v, Some(&eta)).unwrap())
        })
    });
}

fn hypersurface(c: &mut Criterion) {
    let mut g = c.benchmark_group("hypersurface");
    g.sample_size(20);
    g.bench_function("latitude-pi6", |b| {
        b.iter(|| {
            let chain = latitude("pi/6");
            let v = VectorField(vec![Expr::zero(), Expr::zero(), Expr::zero(), Expr::one()]);
            black_box(sphere_hypersurface_analysis(&chain, &v, &Expr::zero(), &OneForm::zero(4)).unwrap())
        })
    });
    g.finish();
}

criterion_group!(benches, curvature, solve, hypersurface);
criterion_main!(benches);
