//! Sequential against parallel execution of the data-parallel kernels.
//! Without the `parallel` feature both variants run sequentially.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use stiefel_bp::arith::vp_binom;
use stiefel_bp::obstruction::{scan, ScanRanges};
use stiefel_bp::ss::{cross_check, run_pages, SsConfig};
use stiefel_bp::{Exec, Prime};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn pages(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_pages");
    group.sample_size(10);
    for (n, k) in [(8, 4), (10, 6)] {
        let cfg = SsConfig::covering(n, k, Prime::TWO).unwrap();
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, format!("W({n},{k})")), &cfg, |b, cfg| {
                b.iter(|| run_pages(black_box(cfg), exec))
            });
        }
    }
    group.finish();
}

fn cross_check_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("cross_check");
    group.sample_size(10);
    let cfg = SsConfig::covering(9, 5, Prime::THREE).unwrap();
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| cross_check(black_box(&cfg), exec)));
    }
    group.finish();
}

fn obstruction_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("obstruction_scan");
    group.sample_size(10);
    let ranges = ScanRanges { n: 2..=24, k: 1..=12, m: 2..=24, l: 1..=12 };
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| scan(black_box(&ranges), exec)));
    }
    group.finish();
}

fn valuation_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("binomial_valuations");
    let rows: Vec<u64> = (0..=600).collect();
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| {
                exec.map(rows.clone(), |n| (0..=n).map(|k| vp_binom(n, k, Prime::TWO).finite().unwrap_or(0)).sum::<i64>())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, pages, cross_check_sweep, obstruction_scan, valuation_sweep);
criterion_main!(benches);
