use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nonfrac_bench::{reference_csa, LENGTHS};
use nonfrac_core::simulate::{default_burn_in, generate_csa_fast, generate_csa_naive};

fn fast_vs_naive(c: &mut Criterion) {
    let p = reference_csa();
    let mut group = c.benchmark_group("csa_generation");
    group.sample_size(10);
    for t in LENGTHS {
        group.bench_with_input(BenchmarkId::new("fast", t), &t, |b, &t| {
            b.iter(|| generate_csa_fast(p, t, 1).unwrap())
        });
        // N = T units, each run through the default burn-in
        group.bench_with_input(BenchmarkId::new("naive", t), &t, |b, &t| {
            b.iter(|| generate_csa_naive(p, t, t, default_burn_in(t), 1).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fast_vs_naive);
criterion_main!(benches);
