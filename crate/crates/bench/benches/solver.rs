//! Throughput of the clustering solver across its inner maximization engines
//! and across instance sizes.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fptclust_core::instance_gen::random_euclidean_instance;
use fptclust_core::metric::Objective;
use fptclust_core::solver::{solve_kmedian, solve_kmeans, Maximizer, SolverConfig};

fn engine_config(maximizer: Maximizer) -> SolverConfig {
    let mut config = SolverConfig::new(0.3);
    config.maximizer = maximizer;
    config.boost_rounds = 2;
    config.cg.steps = 30;
    config.cg.samples = 16;
    config
}

fn bench_engines(c: &mut Criterion) {
    let instance = random_euclidean_instance(12, 2, Objective::Median, 42);
    let mut group = c.benchmark_group("kmedian-engines");
    group.sample_size(20);
    for maximizer in [Maximizer::Exact, Maximizer::ContinuousGreedy, Maximizer::Greedy] {
        let label = format!("{maximizer:?}");
        group.bench_with_input(BenchmarkId::from_parameter(&label), &maximizer, |b, &m| {
            let config = engine_config(m);
            b.iter(|| solve_kmedian(black_box(&instance), &config, None).unwrap());
        });
    }
    group.finish();
}

fn bench_instance_size(c: &mut Criterion) {
    let mut group = c.benchmark_group("kmedian-greedy-scaling");
    group.sample_size(20);
    for n in [8usize, 12, 16, 24] {
        let instance = random_euclidean_instance(n, 2, Objective::Median, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &instance, |b, inst| {
            let config = engine_config(Maximizer::Greedy);
            b.iter(|| solve_kmedian(black_box(inst), &config, None).unwrap());
        });
    }
    group.finish();
}

fn bench_kmeans(c: &mut Criterion) {
    let instance = random_euclidean_instance(12, 2, Objective::Means, 42);
    let mut group = c.benchmark_group("kmeans");
    group.sample_size(20);
    group.bench_function("greedy-n12-k2", |b| {
        let config = engine_config(Maximizer::Greedy);
        b.iter(|| solve_kmeans(black_box(&instance), &config, None).unwrap());
    });
    group.finish();
}

criterion_group!(benches, bench_engines, bench_instance_size, bench_kmeans);
criterion_main!(benches);
