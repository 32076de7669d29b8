//! Data-parallel vs. single-threaded throughput for the two sweep-style
//! entry points: Monte Carlo discrimination trials and the sphere map.
//!
//! Run with `cargo bench -p rhosq`. Both paths produce bit-identical
//! results; these benches measure the speedup only.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::f64::consts::FRAC_PI_2;

use rhosq::discrimination::{build_pair, simulate_trials, simulate_trials_seq, Strategy};
use rhosq::transform::{sphere_map, sphere_map_seq, TwoQubitGate};

fn bench_simulate_trials(c: &mut Criterion) {
    let pair = build_pair(FRAC_PI_2, 0.0).expect("valid angle");
    let strategy = Strategy::Nonlinear(pair);
    let mut group = c.benchmark_group("simulate_trials");
    for n in [10_000u64, 100_000] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| simulate_trials(&strategy, n, 42).expect("valid strategy"))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| simulate_trials_seq(&strategy, n, 42).expect("valid strategy"))
        });
    }
    group.finish();
}

fn bench_sphere_map(c: &mut Criterion) {
    let gate = TwoQubitGate::exp_zx();
    let mut group = c.benchmark_group("sphere_map");
    for (n_theta, n_phi) in [(16usize, 32usize), (32, 64)] {
        let id = format!("{n_theta}x{n_phi}");
        group.bench_with_input(BenchmarkId::new("parallel", &id), &(), |b, _| {
            b.iter(|| sphere_map(&gate, n_theta, n_phi))
        });
        group.bench_with_input(BenchmarkId::new("sequential", &id), &(), |b, _| {
            b.iter(|| sphere_map_seq(&gate, n_theta, n_phi))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_simulate_trials, bench_sphere_map);
criterion_main!(benches);
