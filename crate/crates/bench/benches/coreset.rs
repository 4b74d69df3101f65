//! Coreset construction throughput as the client set grows.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fptclust_core::coreset::{build_coreset, CoresetParams};
use fptclust_core::instance_gen::random_euclidean_instance;
use fptclust_core::metric::Objective;

fn bench_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("coreset-build");
    for n in [100usize, 200, 400] {
        let instance = random_euclidean_instance(n, 3, Objective::Median, 5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &instance, |b, inst| {
            let mut params = CoresetParams::new(0.2, 0.1, 9);
            params.size_multiplier = 0.5;
            b.iter(|| build_coreset(black_box(inst), &params).unwrap());
        });
    }
    group.finish();
}

fn bench_objectives(c: &mut Criterion) {
    let mut group = c.benchmark_group("coreset-objective");
    for objective in [Objective::Median, Objective::Means] {
        let instance = random_euclidean_instance(200, 3, objective, 5);
        let label = format!("{objective:?}");
        group.bench_with_input(BenchmarkId::from_parameter(&label), &instance, |b, inst| {
            let mut params = CoresetParams::new(0.3, 0.1, 9);
            params.size_multiplier = 0.05;
            b.iter(|| build_coreset(black_box(inst), &params).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_build, bench_objectives);
criterion_main!(benches);
