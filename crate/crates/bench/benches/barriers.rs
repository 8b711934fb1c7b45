use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpnorm::transforms::numeric_dual_lbf;
use lpnorm::{
    dual_lbf, solve_dual_path, BarrierParameter, NewtonConfig, PathSchedule, QuadratureConfig,
};
use lpnorm_bench::fixtures;

fn dual_barrier(c: &mut Criterion) {
    let mut group = c.benchmark_group("dual_lbf");
    let par = BarrierParameter::new(10.0).unwrap();
    for f in fixtures() {
        group.bench_function(f.name, |b| b.iter(|| dual_lbf(&f.problem, &f.lambda, par)));
    }
}

fn dual_path(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_dual_path");
    let (sched, cfg) = (PathSchedule::default(), NewtonConfig::default());
    for f in fixtures() {
        group.bench_function(f.name, |b| {
            b.iter(|| solve_dual_path(&f.problem, &sched, &cfg, &f.lambda).unwrap())
        });
    }
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("numeric_dual_lbf");
    group.sample_size(10);
    let cfg = QuadratureConfig::default();
    for f in fixtures() {
        for p in [1.0, 50.0] {
            group.bench_with_input(BenchmarkId::new(f.name, p), &p, |b, &p| {
                b.iter(|| numeric_dual_lbf(&f.problem, &f.lambda, p, &cfg).unwrap())
            });
        }
    }
}

criterion_group!(benches, dual_barrier, dual_path, quadrature);
criterion_main!(benches);
