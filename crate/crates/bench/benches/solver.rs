use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gallery_bench::{instance, vertex_model};
use gallery_core::bench::Class;
use gallery_core::engine::{solve, CutSet, SolveConfig};
use gallery_core::geom::number::int;
use gallery_core::instances;
use gallery_core::lp::{solve_lp, Arithmetic};
use gallery_core::model::{Model, PointSet};
use gallery_core::separation::{primal_separate, separate_sc};

fn lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_lp");
    let lpm = vertex_model(Class::Koch, 60, 1).lp_model().unwrap();
    for arithmetic in [Arithmetic::Exact, Arithmetic::Float] {
        group.bench_with_input(BenchmarkId::from_parameter(arithmetic), &lpm, |b, m| {
            b.iter(|| black_box(solve_lp(m, arithmetic).unwrap()))
        });
    }
    group.finish();
}

fn separation(c: &mut Criterion) {
    let model = vertex_model(Class::Koch, 60, 1);
    let x = solve_lp(&model.lp_model().unwrap(), Arithmetic::Exact).unwrap().primal;
    let tol = int(0);
    c.bench_function("primal_separate/koch-60", |b| {
        b.iter(|| black_box(primal_separate(&model, &x, &tol).unwrap()))
    });

    let f = instances::triangle_ring();
    let ring = Model::with_sets(
        f.polygon.clone(),
        PointSet::from_points(f.guards.clone()),
        PointSet::from_points(f.witnesses.clone()),
    )
    .unwrap();
    let x = solve_lp(&ring.lp_model().unwrap(), Arithmetic::Exact).unwrap().primal;
    c.bench_function("separate_sc/triangle-ring", |b| {
        b.iter(|| black_box(separate_sc(&ring, &x, 3, &tol)))
    });
}

fn full_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    let poly = instance(Class::Koch, 60, 1);
    for cuts in [CutSet::None, CutSet::Sc3Ec] {
        let cfg = SolveConfig { cuts, ..SolveConfig::default() };
        group.bench_with_input(BenchmarkId::new("koch-60", cuts), &cfg, |b, cfg| {
            b.iter(|| black_box(solve(&poly, cfg).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, lp, separation, full_solve);
criterion_main!(benches);
