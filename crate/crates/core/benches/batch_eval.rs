//! Parallel against sequential batch evaluation. Build with
//! `--no-default-features` to time the sequential fallback everywhere
//! (including sweeps).

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use scurve::data::{gen_erf_target, linspace, Strategy};
use scurve::{sweep_n, Component, FitConfig, Superposition};

fn superposition(n: usize) -> Superposition {
    let components = (0..n)
        .map(|i| {
            let t = i as f64 / n.max(2) as f64;
            Component::new(1.0 / n as f64, 0.5 + t, -2.0 + 4.0 * t, t)
        })
        .collect();
    Superposition::new(0.3, components).unwrap()
}

fn eval(c: &mut Criterion) {
    let sup = superposition(8);
    let mut g = c.benchmark_group("eval");
    for len in [1_000usize, 100_000] {
        let xs = linspace(-5.0, 5.0, len);
        g.throughput(Throughput::Elements(len as u64));
        g.bench_with_input(BenchmarkId::new("parallel", len), &xs, |b, xs| {
            b.iter(|| sup.eval_many(black_box(xs)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sequential", len), &xs, |b, xs| {
            b.iter(|| sup.eval_many_seq(black_box(xs)).unwrap())
        });
    }
    g.finish();
}

fn derivative(c: &mut Criterion) {
    let sup = superposition(8);
    let xs = linspace(-5.0, 5.0, 100_000);
    let mut g = c.benchmark_group("derivative");
    g.throughput(Throughput::Elements(xs.len() as u64));
    g.bench_function("parallel", |b| {
        b.iter(|| sup.derivative_many(black_box(&xs)).unwrap())
    });
    g.bench_function("sequential", |b| {
        b.iter(|| sup.derivative_many_seq(black_box(&xs)).unwrap())
    });
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let target = gen_erf_target((-3.0, 3.0), 101).unwrap();
    let cfg = FitConfig {
        max_iterations: 200,
        ..FitConfig::default()
    };
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function(
        if scurve::par::is_parallel() {
            "parallel"
        } else {
            "sequential"
        },
        |b| {
            b.iter(|| {
                sweep_n(
                    &target,
                    Strategy::SlopeMidpoint,
                    black_box(&[1, 2, 3, 4]),
                    &cfg,
                )
            })
        },
    );
    g.finish();
}

criterion_group!(benches, eval, derivative, sweep);
criterion_main!(benches);
