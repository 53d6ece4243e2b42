use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use iccr_core::gaussian_schemes::{strategy_sweep, CoeffGrid, Strategy};
use iccr_core::lda_bounds::{rat, SymLdaConfig};
use iccr_core::lda_schemes::{build_plan, verify_plan_with, Corner, VerifyMode};
use iccr_core::par::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn exhaustive_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_exhaustive");
    group.sample_size(10);
    // Regime VI_1 at nS = 10: 16 information bits.
    let cfg = SymLdaConfig::new(10, rat(2, 5), rat(1, 5)).unwrap();
    let plan = build_plan(&cfg, Corner::R1Dominant).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| verify_plan_with(&plan, VerifyMode::Exhaustive, exec).unwrap())
        });
    }
    group.finish();
}

fn strategy_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("strategy_sweep");
    group.sample_size(10);
    let grid = CoeffGrid::default();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| strategy_sweep(&[40.0, 60.0], 0.3, 0.6, &Strategy::ALL, &grid, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive_verification, strategy_grid);
criterion_main!(benches);
