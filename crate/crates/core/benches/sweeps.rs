use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use robin_dce::rates::{frequency_table, ratio_curve};
use robin_dce::spectrum::RobinCondition;
use robin_dce::{Execution, QuadratureConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn frequency_grid(c: &mut Criterion) {
    let grid: Vec<f64> = (1..200).map(|i| i as f64 / 200.0).collect();
    let bc = RobinCondition::finite(2.0).unwrap();
    let cfg = QuadratureConfig::default();
    let mut group = c.benchmark_group("frequency_table_199");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| frequency_table(black_box(&grid), 1.0, &bc, &cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn ratio_sweep(c: &mut Criterion) {
    let grid: Vec<f64> = (0..12).map(|i| 10f64.powf(-1.0 + 3.0 * i as f64 / 11.0)).collect();
    let cfg = QuadratureConfig::default();
    let mut group = c.benchmark_group("ratio_curve_12");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| ratio_curve(black_box(&grid), &cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn midpoint(c: &mut Criterion) {
    let mut group = c.benchmark_group("midpoint_sum_1e6");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.midpoint_sum(|x| (x * x).sin().sqrt(), 0.0, black_box(1.0), 1_000_000))
        });
    }
    group.finish();
}

criterion_group!(benches, frequency_grid, ratio_sweep, midpoint);
criterion_main!(benches);
