use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nosol_bench::{random_set, sym};
use nosol_core::oracle::find_with_stats;
use nosol_core::{count_nontrivial_solutions, SolutionQuery, Strategy};

fn strategies(c: &mut Criterion) {
    // Sidon-like sets are solution-free for small generators, so every
    // strategy walks its whole space.
    let eq = sym(&[1, 3, 7]);
    let set = random_set(14, 4000, 7);
    let mut g = c.benchmark_group("find_first");
    for (name, s) in [("dfs", Strategy::Dfs), ("mitm", Strategy::MeetInMiddle)] {
        let q = SolutionQuery::new(eq.clone(), set.clone()).unwrap().with_strategy(s);
        g.bench_with_input(BenchmarkId::new(name, set.len()), &q, |b, q| {
            b.iter(|| find_with_stats(black_box(q)).unwrap())
        });
    }
    g.finish();
}

fn counting(c: &mut Criterion) {
    let eq = sym(&[1, 1]);
    let mut g = c.benchmark_group("count");
    for n in [8usize, 16, 24] {
        let q = SolutionQuery::new(eq.clone(), (1..=n as i64).collect::<Vec<_>>()).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &q, |b, q| {
            b.iter(|| count_nontrivial_solutions(black_box(q)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, strategies, counting);
criterion_main!(benches);
