use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rgg_bench::fixture_graph;
use rgg_core::{
    phi, sample_er, sample_rgg, signed_4cycle_count, signed_triangle_count, signed_weight,
    EdgePattern, ModelParams, RngSpec, SumPowerCdf,
};
use std::hint::black_box;

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    for d in [8, 64, 256] {
        let m = ModelParams::linfty(512, d, 0.5).unwrap();
        group.bench_with_input(BenchmarkId::new("rgg_n512", d), &m, |b, m| {
            let mut rng = RngSpec::new(1).rng();
            b.iter(|| sample_rgg(m, &mut rng).unwrap())
        });
    }
    group.bench_function("er_n512", |b| {
        let mut rng = RngSpec::new(1).rng();
        b.iter(|| sample_er(512, 0.5, &mut rng).unwrap())
    });
    group.finish();
}

fn signed_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("signed_count");
    for n in [128, 512, 1024] {
        let g = fixture_graph(n, 16, 0.5);
        group.bench_with_input(BenchmarkId::new("triangles", n), &g, |b, g| {
            b.iter(|| signed_triangle_count(black_box(g), 0.5))
        });
        group.bench_with_input(BenchmarkId::new("four_cycles", n), &g, |b, g| {
            b.iter(|| signed_4cycle_count(black_box(g), 0.5))
        });
    }
    group.finish();
}

fn weights(c: &mut Criterion) {
    let m = ModelParams::linfty(100, 60, 0.5).unwrap();
    let mut group = c.benchmark_group("signed_weight");
    for name in ["C4", "K4", "K23", "theta"] {
        let h: EdgePattern = name.parse().unwrap();
        group.bench_function(name, |b| b.iter(|| signed_weight(black_box(&h), &m).unwrap()));
    }
    group.finish();
}

fn one_dim(c: &mut Criterion) {
    c.bench_function("phi_1000", |b| b.iter(|| phi(black_box(1000))));
    c.bench_function("sum_power_cdf_d50_q2", |b| {
        b.iter(|| SumPowerCdf::new(black_box(50), 2.0, 1 << 16).unwrap())
    });
}

criterion_group!(benches, sampling, signed_counts, weights, one_dim);
criterion_main!(benches);
