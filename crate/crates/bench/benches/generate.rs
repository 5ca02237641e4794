use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use trihof::analysis::classify_bar;
use trihof::symbolic::{symbolic_expand, Variant};
use trihof::linear_run;

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate_b7");
    g.sample_size(10);
    for terms in [100_000usize, 1_000_000, 10_000_000] {
        g.throughput(Throughput::Elements(terms as u64));
        g.bench_with_input(BenchmarkId::from_parameter(terms), &terms, |b, &terms| {
            b.iter(|| linear_run(7, false, black_box(terms)).unwrap().len())
        });
    }
    g.finish();
}

fn bar_runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("bar");
    g.sample_size(10);
    g.bench_function("b193_1e6", |b| b.iter(|| linear_run(193, true, black_box(1_000_000)).unwrap().len()));
    g.bench_function("classify_20830", |b| b.iter(|| classify_bar(black_box(20830), 1_000_000).unwrap()));
    g.finish();
}

fn symbolic(c: &mut Criterion) {
    c.bench_function("symbolic_bar_69", |b| b.iter(|| symbolic_expand(Variant::Bar, black_box(69))));
}

criterion_group!(benches, generation, bar_runs, symbolic);
criterion_main!(benches);
