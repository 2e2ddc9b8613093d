use std::hint::black_box;

use baudscope::spline::NotAKnotSpline;
use baudscope::synth::synth_baseband;
use baudscope::{estimate_acf, estimate_symbol_rate, EstimatorConfig};
use baudscope_bench::{received, spec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn acf(c: &mut Criterion) {
    let mut group = c.benchmark_group("acf");
    for n in [100_000usize, 1_000_000] {
        let buf = received(n, 7e6);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &buf, |b, buf| {
            b.iter(|| estimate_acf(black_box(buf), 60).unwrap())
        });
    }
    group.finish();
}

fn synthesis(c: &mut Criterion) {
    let mut group = c.benchmark_group("synth");
    group.sample_size(10);
    for rate in [7e6, 6.5882e6] {
        let s = spec(20_000, rate);
        group.bench_with_input(BenchmarkId::from_parameter(rate), &s, |b, s| {
            b.iter(|| synth_baseband(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn spline(c: &mut Criterion) {
    let xs = [4.0, 5.0, 6.0, 7.0, 8.0];
    let ys = [0.62, 0.41, 0.22, 0.07, -0.04];
    c.bench_function("spline_root", |b| {
        b.iter(|| {
            NotAKnotSpline::new(black_box(&xs), black_box(&ys))
                .unwrap()
                .segment_root(3, 1e-12)
                .unwrap()
        })
    });
}

fn full_estimate(c: &mut Criterion) {
    let buf = received(500_000, 7e6);
    let cfg = EstimatorConfig::default();
    c.bench_function("estimate_500k", |b| {
        b.iter(|| estimate_symbol_rate(black_box(&buf), &cfg, 1e6).unwrap())
    });
}

criterion_group!(benches, acf, synthesis, spline, full_estimate);
criterion_main!(benches);
