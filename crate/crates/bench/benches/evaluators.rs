use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kbessel::airy::airy;
use kbessel::asymptotics::evaluate;
use kbessel::eisenstein::{direct_coset_sum, EisensteinOptions, FourierData, KernelSource};
use kbessel::oracle::{k_contour, k_series};
use kbessel::ComplexValue;
use kbessel_bench::REGIME_POINTS;

fn dispatcher(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate");
    for (name, r, t, y) in REGIME_POINTS {
        g.bench_function(name, |b| b.iter(|| evaluate(black_box(r), black_box(t), black_box(y)).unwrap()));
    }
    g.finish();
}

fn airy_fn(c: &mut Criterion) {
    let mut g = c.benchmark_group("airy");
    for x in [-30.0, -5.0, 0.5, 5.0, 30.0] {
        g.bench_function(format!("x={x}"), |b| b.iter(|| airy(black_box(x)).unwrap()));
    }
    g.finish();
}

fn oracles(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    let nu = ComplexValue::new(0.3, 40.0);
    g.bench_function("series y=1.5", |b| b.iter(|| k_series(black_box(nu), 1.5).unwrap()));
    g.bench_function("contour y=1.5", |b| b.iter(|| k_contour(black_box(nu), 1.5).unwrap()));
    g.bench_function("contour y=100", |b| b.iter(|| k_contour(ComplexValue::new(1.0, 100.0), 100.0).unwrap()));
    g.finish();
}

fn eisenstein(c: &mut Criterion) {
    let mut g = c.benchmark_group("eisenstein");
    g.sample_size(10);
    let s = ComplexValue::new(1.3, 40.0);
    for kernel in [KernelSource::Asymptotic, KernelSource::Oracle] {
        let opts = EisensteinOptions { kernel, ..EisensteinOptions::default() };
        g.bench_function(format!("fourier {}", kernel.tag()), |b| {
            b.iter(|| FourierData::new(black_box(2.0), s, &opts).unwrap().point(0.3))
        });
    }
    g.bench_function("coset bound=200", |b| b.iter(|| direct_coset_sum(0.3, 2.0, s, 200).unwrap()));
    g.finish();
}

criterion_group!(benches, dispatcher, airy_fn, oracles, eisenstein);
criterion_main!(benches);
