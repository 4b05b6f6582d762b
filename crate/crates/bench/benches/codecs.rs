use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use swfeval_bench::{programme, SAMPLE_RATE};
use swfeval_core::ambisonics::{encode_plane_wave, sh_eval, AmbisonicDecoder, DEFAULT_CROSSOVER_HZ};
use swfeval_core::binaural::{render_virtual_loudspeakers, spherical_head_set};
use swfeval_core::geometry::{build_octahedron_hierarchy, fibonacci_grid, load_layout};
use swfeval_core::swf::{swf_analysis, swf_encode, LiftingKind, SwfOptions, SwfRenderer};
use swfeval_core::{Direction, LayoutName};

fn sh(c: &mut Criterion) {
    let grid = fibonacci_grid(1000);
    c.bench_function("sh_eval order 5 x1000", |b| {
        b.iter(|| grid.iter().map(|d| sh_eval(5, black_box(d))[35]).sum::<f64>())
    });
}

fn ambisonics(c: &mut Criterion) {
    let s = programme();
    let d = Direction::new(30.0, 10.0);
    let x = encode_plane_wave(5, &d, &s, SAMPLE_RATE).unwrap();
    let dec = AmbisonicDecoder::for_layout(LayoutName::Lebedev50, DEFAULT_CROSSOVER_HZ).unwrap();
    c.bench_function("decode 5OA to lebedev50, 100 ms", |b| b.iter(|| dec.decode(black_box(&x)).unwrap()));
}

fn swf(c: &mut Criterion) {
    let s = programme();
    let d = Direction::new(30.0, 10.0);
    let h = build_octahedron_hierarchy(2).unwrap();
    let filter = LiftingKind::default().filter();
    let x = swf_encode(&h, &d, &s, SAMPLE_RATE);
    c.bench_function("swf analysis level 2, 100 ms", |b| {
        b.iter(|| swf_analysis(&h, filter.as_ref(), black_box(&x)).unwrap())
    });
    let r = SwfRenderer::for_layout(LayoutName::Tdesign24, SwfOptions::default()).unwrap();
    c.bench_function("swf gains tdesign24", |b| b.iter(|| r.gains(black_box(&d))));
}

fn convolution(c: &mut Criterion) {
    let hrirs = spherical_head_set(SAMPLE_RATE).unwrap();
    let layout = load_layout(LayoutName::Lebedev50).unwrap();
    let r = SwfRenderer::for_layout(LayoutName::Lebedev50, SwfOptions::default()).unwrap();
    let feeds = r.render(&Direction::new(30.0, 10.0), &programme(), SAMPLE_RATE);
    c.bench_function("virtual loudspeakers lebedev50, 100 ms", |b| {
        b.iter(|| render_virtual_loudspeakers(black_box(&feeds), &layout, &hrirs).unwrap())
    });
}

criterion_group!(benches, sh, ambisonics, swf, convolution);
criterion_main!(benches);
