use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lelong_core::harness::{exhaustive_sweep, run_suite, GenSpec, SweepGrid, WeightGrid, WeightScheme, DEFAULT_BIT_CAP};
use lelong_core::par::Execution;
use lelong_core::rational::{rat, RatStr};

fn suite_spec() -> GenSpec {
    GenSpec {
        min_lines: 4,
        max_lines: 7,
        n_conics: 0,
        coefficient_bound: 5,
        weight_scheme: WeightScheme::RandomRational { denominator_bound: 8 },
        alphas: vec![RatStr(rat(9, 20)), RatStr(rat(1, 2)), RatStr(rat(3, 5))],
        seed: 1,
        bit_cap: DEFAULT_BIT_CAP,
    }
}

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn random_suite(c: &mut Criterion) {
    let spec = suite_spec();
    let mut group = c.benchmark_group("random_suite_500");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| run_suite(&spec, 500, mode).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let grid = SweepGrid::new(1, 2, WeightGrid::Compositions { denominator: 7 }, vec![rat(9, 20), rat(1, 2)]);
    let mut group = c.benchmark_group("five_line_sweep");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| exhaustive_sweep(&grid, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, random_suite, sweep);
criterion_main!(benches);
