//! Compares the data-parallel execution path against the sequential fallback
//! on the three scan-shaped workloads: whole-graph unhappiness scans,
//! exhaustive equilibrium scans, and oracle validation batches.
//!
//! With the `parallel` feature enabled (the default), `ExecMode::Auto` fans
//! the per-item work out over the global thread pool; `ExecMode::Sequential`
//! forces the single-threaded path. Building with
//! `--no-default-features` makes both modes sequential, which this suite
//! makes visible as identical timings.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use swapgames::analysis::{oracle_validate, poa_scan, unhappy_players, ScanMode, ScanOptions};
use swapgames::instances::gen_ts_prime;
use swapgames::{Attitude, CostKind, ExecMode, PlayerModel};

const MODES: [(&str, ExecMode); 2] = [
    ("auto", ExecMode::Auto),
    ("sequential", ExecMode::Sequential),
];

fn bench_unhappy_scan(c: &mut Criterion) {
    let g = gen_ts_prime(7).expect("p >= 3");
    let model = PlayerModel::new(Attitude::Pessimistic, CostKind::Sum, 3);
    let mut group = c.benchmark_group("unhappy_players/ts_prime_p7");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| unhappy_players(black_box(&g), black_box(&model), exec))
        });
    }
    group.finish();
}

fn bench_equilibrium_scan(c: &mut Criterion) {
    let model = PlayerModel::new(Attitude::WeaklyPessimistic, CostKind::Max, 3);
    let mut group = c.benchmark_group("poa_scan/n8_exhaustive");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                poa_scan(
                    black_box(8),
                    black_box(&model),
                    ScanMode::Exhaustive,
                    &ScanOptions { exec },
                )
                .expect("n within cap")
            })
        });
    }
    group.finish();
}

fn bench_oracle_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_validate/60_cases");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| oracle_validate(black_box(60), black_box(7), &ScanOptions { exec }))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_unhappy_scan,
    bench_equilibrium_scan,
    bench_oracle_batch
);
criterion_main!(benches);
