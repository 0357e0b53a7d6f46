use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zigzag_core::{
    closed_form::solve_exact, linear_oracle::solve_oracle, montecarlo::simulate, LatticeSpec,
    SourceSpec, WalkConfig,
};

fn geometries() -> Vec<(usize, usize, i64, i64)> {
    vec![(7, 7, 4, 4), (7, 7, 3, 5), (15, 15, 8, 8), (31, 31, 16, 16)]
}

fn bench_exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    for (m, n, a, b) in geometries() {
        let spec = LatticeSpec::new(m, n).unwrap();
        let src = SourceSpec::new(a, b);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{m}x{n}@{a},{b}")),
            &(),
            |bch, _| bch.iter(|| solve_exact(black_box(spec), black_box(src)).unwrap()),
        );
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    for (m, n, a, b) in geometries() {
        let spec = LatticeSpec::new(m, n).unwrap();
        let src = SourceSpec::new(a, b);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{m}x{n}@{a},{b}")),
            &(),
            |bch, _| bch.iter(|| solve_oracle(black_box(spec), black_box(src)).unwrap()),
        );
    }
    group.finish();
}

fn bench_mc(c: &mut Criterion) {
    let spec = LatticeSpec::new(7, 7).unwrap();
    let src = SourceSpec::new(4, 4);
    let mut group = c.benchmark_group("mc");
    group.sample_size(10);
    for walks in [10_000_u64, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(walks), &walks, |bch, &w| {
            bch.iter(|| simulate(spec, src, WalkConfig::new(w, 7)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_exact, bench_oracle, bench_mc);
criterion_main!(benches);
