use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use transord::gof::{self, KTransform, TestKind, TestSpec};
use transord::ineq::{gini, GiniMethod};
use transord::shape::{gcm, gsm, TransformGraph};
use transord::{ParametricModel, SeedSpec};
use transord_bench::weibull_sample;

fn bench_gini(c: &mut Criterion) {
    let mut group = c.benchmark_group("gini");
    for n in [100, 1000, 10_000] {
        let s = weibull_sample(0.7, n, 1);
        group.bench_with_input(BenchmarkId::new("lstat", n), &s, |b, s| b.iter(|| gini(black_box(s), GiniMethod::LStat)));
        group.bench_with_input(BenchmarkId::new("lorenz", n), &s, |b, s| b.iter(|| gini(black_box(s), GiniMethod::Lorenz)));
    }
    group.finish();
}

fn bench_minorants(c: &mut Criterion) {
    let mut group = c.benchmark_group("minorant");
    for n in [100, 1000, 10_000] {
        let s = weibull_sample(1.5, n, 2);
        let graph = TransformGraph::from_sample(&s, &ParametricModel::UnitExponential, n).unwrap();
        group.bench_with_input(BenchmarkId::new("gcm", n), &graph, |b, g| b.iter(|| gcm(black_box(g))));
        group.bench_with_input(BenchmarkId::new("gsm", n), &graph, |b, g| b.iter(|| gsm(black_box(g))));
    }
    group.finish();
}

fn bench_statistics(c: &mut Criterion) {
    let g = ParametricModel::UnitExponential;
    let s = weibull_sample(0.8, 100, 3);
    c.bench_function("stat_star/100", |b| b.iter(|| gof::stat_star(black_box(&s), &g, KTransform::ApplyG, 0.05)));
    c.bench_function("stat_convex/100", |b| b.iter(|| gof::stat_convex(black_box(&s), &g, KTransform::ApplyG)));
    let spec = TestSpec {
        kind: TestKind::Star,
        g,
        k: KTransform::ApplyG,
        nu: 0.05,
        alpha: 0.1,
        sims: 1000,
        seed: SeedSpec::new(4, 0),
    };
    c.bench_function("null_distribution/star/n50/m1000", |b| b.iter(|| gof::null_distribution(black_box(&spec), 50)));
}

criterion_group!(benches, bench_gini, bench_minorants, bench_statistics);
criterion_main!(benches);
