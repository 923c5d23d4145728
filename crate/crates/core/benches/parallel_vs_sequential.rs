//
// cargo bench -p tpareto
// cargo bench -p tpareto --no-default-features   (parallel path falls back to sequential)
//

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tpareto::diagnostics::{select_kstar, KStarOptions};
use tpareto::montecarlo::{run_study_with, MCConfig};
use tpareto::{Execution, TailDistribution};

fn study(c: &mut Criterion) {
    let mut cfg = MCConfig::new(TailDistribution::truncated_pareto(2.0, 3.1623).unwrap());
    cfg.runs = 200;
    cfg.k_grid = vec![100, 250, 500, 750];

    let mut group = c.benchmark_group("monte_carlo_study");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_study_with(&cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn kstar(c: &mut Criterion) {
    let s = TailDistribution::truncated_pareto(2.0, 3.1623).unwrap().sample(2000, 9).unwrap();

    let mut group = c.benchmark_group("kstar_sweep");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let opts = KStarOptions { execution: exec, ..KStarOptions::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| select_kstar(&s, 1, opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, study, kstar);
criterion_main!(benches);
