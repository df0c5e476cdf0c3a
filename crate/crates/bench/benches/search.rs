use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nosol_bench::sym;
use nosol_core::constructions::{lift, two_var_digits};
use nosol_core::search::{max_digit_set, SearchConfig};

fn digit_search(c: &mut Criterion) {
    let eq = sym(&[43, 69, 70]);
    let cfg = SearchConfig::default();
    let mut g = c.benchmark_group("max_digit_set");
    g.sample_size(10);
    for l in [1457u64, 5825, 11649] {
        g.bench_with_input(BenchmarkId::from_parameter(l), &l, |b, &l| {
            b.iter(|| max_digit_set(&eq, black_box(l), &cfg, None).unwrap())
        });
    }
    g.finish();
}

fn lifting(c: &mut Criterion) {
    let cert = two_var_digits(3, 10).unwrap();
    c.bench_function("lift_count_1e12", |b| {
        b.iter(|| lift(&cert, black_box(1_000_000_000_000)).unwrap().count())
    });
    c.bench_function("lift_iter_1e6", |b| {
        b.iter(|| lift(&cert, black_box(1_000_000)).unwrap().iter().count())
    });
}

criterion_group!(benches, digit_search, lifting);
criterion_main!(benches);
