use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tuplesim::{build_f, Field};
use tuplesim_bench::{f1009, random_tuple};

fn minor_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_f");
    group.sample_size(10);
    let a = random_tuple(Field::Rationals, 2, 3);
    for r in 1..=4 {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter(|| build_f(r, &a).unwrap())
        });
    }
    group.finish();
}

fn rref(c: &mut Criterion) {
    let mut group = c.benchmark_group("rref");
    group.sample_size(10);
    for (name, field) in [("q", Field::Rationals), ("fp1009", f1009())] {
        let f = build_f(4, &random_tuple(field, 2, 3)).unwrap();
        group.bench_function(name, |b| b.iter(|| f.matrix.rref()));
    }
    group.finish();
}

criterion_group!(benches, minor_tables, rref);
criterion_main!(benches);
