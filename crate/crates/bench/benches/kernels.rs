use std::hint::black_box;

use bgcd_bench::{limit_tail, odd_pairs, smooth_density};
use bgcd_core::gcdsim::{simulate_integers, simulate_model_samples};
use bgcd_core::spectral::discretize_b2;
use bgcd_core::{apply_b2, apply_f, binary_gcd, TruncationPolicy, B_REFERENCE};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn operators(c: &mut Criterion) {
    let policy = TruncationPolicy::default();
    let mut group = c.benchmark_group("operators");
    for n in [1025, 4097] {
        let g = limit_tail(n);
        group.bench_with_input(BenchmarkId::new("apply_f", n), &g, |b, g| {
            b.iter(|| apply_f(black_box(g), policy).unwrap())
        });
        let h = smooth_density(n);
        group.bench_with_input(BenchmarkId::new("apply_b2", n), &h, |b, h| {
            b.iter(|| apply_b2(black_box(h), policy).unwrap())
        });
    }
    group.sample_size(10);
    group.bench_function("discretize_b2/1024", |b| b.iter(|| discretize_b2(1024, policy).unwrap()));
    group.finish();
}

fn gcd(c: &mut Criterion) {
    let pairs = odd_pairs(1024, 64, 7);
    c.bench_function("binary_gcd/1024 pairs", |b| {
        b.iter(|| pairs.iter().map(|&(u, v)| binary_gcd(u, v).unwrap().cycles).sum::<u64>())
    });
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    group.bench_function("model chain 1e5 x 8", |b| {
        b.iter(|| simulate_model_samples(100_000, 8, black_box(42)).unwrap())
    });
    group.bench_function("integers 1e5", |b| {
        b.iter(|| simulate_integers(100_000, 64, black_box(42), B_REFERENCE).unwrap())
    });
    group.finish();
}

criterion_group!(benches, operators, gcd, monte_carlo);
criterion_main!(benches);
