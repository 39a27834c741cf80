use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qcrit::digits::{
    admissible_enumerate, critical_base_set, is_critical, mu_q, mu_q_bruteforce, PrimePower,
};

fn mu(c: &mut Criterion) {
    let pq = PrimePower::new(2, 4).unwrap();
    let bound = pq.q() * 2u64.pow(8);
    c.bench_function("mu_q fast 1..1000", |b| {
        b.iter(|| (1..=1000u64).map(|c| mu_q(black_box(c), pq)).sum::<u64>())
    });
    c.bench_function("mu_q bruteforce 1..100", |b| {
        b.iter(|| {
            (1..=100u64)
                .filter_map(|c| mu_q_bruteforce(black_box(c), pq, bound))
                .sum::<u64>()
        })
    });
}

fn critical(c: &mut Criterion) {
    let pq = PrimePower::new(2, 10).unwrap();
    c.bench_function("is_critical 1..10000 q=1024", |b| {
        b.iter(|| {
            (1..10_000u64)
                .filter(|&k| is_critical(black_box(k), pq))
                .count()
        })
    });
    c.bench_function("critical_base_set q=1024", |b| {
        b.iter(|| critical_base_set(black_box(pq)))
    });
}

fn admissible(c: &mut Criterion) {
    let mut g = c.benchmark_group("admissible_enumerate");
    g.sample_size(10);
    g.bench_function("p=2 m<=1024", |b| {
        b.iter(|| admissible_enumerate(2, black_box(1024), 10))
    });
    g.bench_function("p=3 m<=729", |b| {
        b.iter(|| admissible_enumerate(3, black_box(729), 6))
    });
    g.finish();
}

criterion_group!(benches, mu, critical, admissible);
criterion_main!(benches);
