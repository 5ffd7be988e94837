//! Throughput of the verification suites: rayon fan-out against the
//! sequential fallback on identical seeded workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bures_core::par::Parallelism;
use bures_core::suites::{run_suite_with, SuiteId};

fn suite_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    for id in [SuiteId::Oracle, SuiteId::Factorization, SuiteId::Estimators] {
        let trials = 24;
        group.bench_with_input(BenchmarkId::new("sequential", id.name()), &id, |b, id| {
            b.iter(|| run_suite_with(*id, trials, 7, Parallelism::Sequential))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("rayon", id.name()), &id, |b, id| {
            b.iter(|| run_suite_with(*id, trials, 7, Parallelism::Rayon))
        });
    }
    group.finish();
}

fn sweep_modes(c: &mut Criterion) {
    use bures_core::sampling;
    use bures_core::subalgebras::rank_one_sweep;
    use bures_core::suites::scenarios;

    let mut rng = sampling::rng(7);
    let (nu, rho, _) = scenarios::sweep_pair(360, 30, &mut rng).expect("sweep pair");
    let mut group = c.benchmark_group("rank_one_sweep");
    group.bench_function("sequential", |b| {
        b.iter(|| rank_one_sweep(&nu, &rho, 360, 1e-7, Parallelism::Sequential).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("rayon", |b| {
        b.iter(|| rank_one_sweep(&nu, &rho, 360, 1e-7, Parallelism::Rayon).unwrap())
    });
    group.finish();
}

criterion_group!(benches, suite_modes, sweep_modes);
criterion_main!(benches);
