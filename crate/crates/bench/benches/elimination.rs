use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use toepnull::{Eliminator, PrimeField};
use toepnull_bench::fixture_spec;

fn rank_paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("gf2_rank");
    for n in [15, 31, 63] {
        let spec = fixture_spec(n, PrimeField::gf2(), 7);
        let bits = spec.materialize_bits().unwrap();
        let dense = spec.materialize();
        group.bench_with_input(BenchmarkId::new("bit_packed", n), &bits, |b, m| {
            b.iter(|| black_box(m).rank())
        });
        group.bench_with_input(BenchmarkId::new("generic", n), &dense, |b, m| {
            b.iter(|| black_box(m).rank())
        });
    }
    group.finish();
}

fn nullity_strings(c: &mut Criterion) {
    let mut group = c.benchmark_group("nullity_string");
    for q in [2, 3, 7] {
        let spec = fixture_spec(24, PrimeField::new(q).unwrap(), 11);
        group.bench_with_input(BenchmarkId::from_parameter(q), &spec, |b, s| {
            b.iter(|| black_box(s).nullity_string())
        });
    }
    group.finish();

    let spec = fixture_spec(10, PrimeField::new(5).unwrap(), 3);
    let mut elim = Eliminator::new(spec.field());
    c.bench_function("eliminator_gf5_order10", |b| {
        b.iter(|| elim.spec_nullity(black_box(&spec)))
    });
}

criterion_group!(benches, rank_paths, nullity_strings);
criterion_main!(benches);
