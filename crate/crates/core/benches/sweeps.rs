use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use diamond_lab::diamond::{self, GaloisParams};
use diamond_lab::engine::{certify_batch, BatchConfig, LambdaMode};
use diamond_lab::weights::{all_weights, WeightModel};
use diamond_lab::Exec;

fn strategies() -> Vec<(&'static str, Exec)> {
    let mut out = vec![("sequential", Exec::Sequential)];
    if Exec::Parallel.is_parallel() {
        out.push(("parallel", Exec::Parallel));
    }
    out
}

fn weight_sweep(c: &mut Criterion) {
    let model = WeightModel::new(5).unwrap();
    let weights = all_weights(5);
    let mut group = c.benchmark_group("weight_sweep_p5");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| model.sweep(&weights, exec))
        });
    }
    group.finish();
}

fn diamond_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("diamond_sweep_p5_p7");
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| diamond::sweep(&[5, 7], exec).unwrap())
        });
    }
    group.finish();
}

fn certification_batch(c: &mut Criterion) {
    let params = GaloisParams::new(5, 1, 0).unwrap();
    let jobs = BatchConfig {
        params,
        runs: 100,
        radius: 64,
        ext_degree: 4,
        max_support: 10,
        index_bound: 10,
        mode: LambdaMode::RandomDistinct,
        seed: 0,
    }
    .jobs()
    .unwrap();
    let mut group = c.benchmark_group("certify_batch_100");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| certify_batch(&jobs, &params, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, weight_sweep, diamond_sweep, certification_batch);
criterion_main!(benches);
