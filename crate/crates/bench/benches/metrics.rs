use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use swfeval_bench::ear_pair;
use swfeval_core::harness::{bootstrap_median_ci, BOOTSTRAP_RESAMPLES};
use swfeval_core::metrics::{compute_iacc_itd, compute_ild, compute_psd};

fn binaural(c: &mut Criterion) {
    let p = ear_pair();
    let reference = p.swapped();
    c.bench_function("iacc/itd", |b| b.iter(|| compute_iacc_itd(black_box(&p)).unwrap()));
    c.bench_function("ild 42 bands", |b| b.iter(|| compute_ild(black_box(&p)).unwrap()));
    c.bench_function("psd", |b| b.iter(|| compute_psd(black_box(&p), &reference).unwrap()));
}

fn bootstrap(c: &mut Criterion) {
    let values: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).sin()).collect();
    c.bench_function("bootstrap median 20 values", |b| {
        b.iter(|| bootstrap_median_ci(black_box(&values), 0.95, BOOTSTRAP_RESAMPLES, 1))
    });
}

criterion_group!(benches, binaural, bootstrap);
criterion_main!(benches);
