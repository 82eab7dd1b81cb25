use std::hint::black_box;

use ampcg::{Algorithm, LearnConfig, Variant};
use ampcg_bench::{fresh, gaussian_source, graphs};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn gaussian(c: &mut Criterion) {
    let mut group = c.benchmark_group("gaussian_p30_n1000");
    group.sample_size(20);
    let g = &graphs(30, 2.0, 1)[0];
    let src = gaussian_source(g, 1000, 0.01, 7);
    for algo in Algorithm::ALL {
        group.bench_with_input(BenchmarkId::from_parameter(algo), &algo, |b, &algo| {
            b.iter(|| algo.run(&fresh(&src), &LearnConfig::new(Variant::Stable), None).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_p20");
    group.sample_size(20);
    let g = &graphs(20, 2.0, 1)[0];
    let src = ampcg::CiSource::oracle(g.clone());
    for algo in [Algorithm::Pc(Variant::Stable), Algorithm::Lcd] {
        group.bench_with_input(BenchmarkId::from_parameter(algo), &algo, |b, &algo| {
            b.iter(|| black_box(algo.run(&fresh(&src), &LearnConfig::new(Variant::Stable), None).unwrap()))
        });
    }
    group.finish();
}

fn parallel_stable(c: &mut Criterion) {
    let mut group = c.benchmark_group("stable_parallel_p50");
    group.sample_size(10);
    let g = &graphs(50, 2.0, 1)[0];
    let src = gaussian_source(g, 2000, 0.005, 3);
    for parallel in [false, true] {
        let mut cfg = LearnConfig::new(Variant::Stable);
        cfg.parallel = parallel;
        group.bench_with_input(BenchmarkId::from_parameter(parallel), &cfg, |b, cfg| {
            b.iter(|| ampcg::learn(&fresh(&src), cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, gaussian, oracle, parallel_stable);
criterion_main!(benches);
