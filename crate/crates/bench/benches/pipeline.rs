use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use ttp2::metric_graph::{christofides_cycle, min_perfect_matching, min_spanning_tree};
use ttp2::phase1::build_phase1;
use ttp2::phase2::build_t1;
use ttp2::{solve, SolveOptions};
use ttp2_bench::fixture;

fn matching(c: &mut Criterion) {
    let mut g = c.benchmark_group("matching");
    for n in [30, 42, 62] {
        let inst = fixture(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| min_perfect_matching(black_box(inst)))
        });
    }
    g.finish();
}

fn christofides(c: &mut Criterion) {
    let inst = fixture(42);
    c.bench_function("christofides/42", |b| {
        b.iter(|| {
            let t = min_spanning_tree(black_box(&inst));
            christofides_cycle(&inst, &t)
        })
    });
}

fn phases(c: &mut Criterion) {
    let mut g = c.benchmark_group("construction");
    for n in [30, 42] {
        g.bench_with_input(BenchmarkId::new("phase1", n), &n, |b, &n| {
            b.iter(|| build_phase1(black_box(n), 0).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("t1", n), &n, |b, &n| b.iter(|| build_t1(black_box(n)).unwrap()));
    }
    g.finish();
}

fn end_to_end(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(20);
    for n in [30, 42] {
        let inst = fixture(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| solve(black_box(inst), SolveOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, matching, christofides, phases, end_to_end);
criterion_main!(benches);
