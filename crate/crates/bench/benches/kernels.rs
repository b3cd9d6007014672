use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use heilbronn_bench::{random_config, random_lines, random_points, random_tubes_2d};
use heilbronn_core::conc::m_config;
use heilbronn_core::config::min_config_distance;
use heilbronn_core::highlow::normalized_b;
use heilbronn_core::triangles::{min_triangle_brute, min_triangle_fast};
use heilbronn_core::tubes::{two_ends_decompose, TwoEndsParams};
use heilbronn_core::Dim;

fn triangles(c: &mut Criterion) {
    let mut g = c.benchmark_group("min_triangle");
    for n in [100, 400] {
        let pts = random_points(n, Dim::Two, 1);
        g.bench_with_input(BenchmarkId::new("fast", n), &pts, |b, p| b.iter(|| min_triangle_fast(black_box(p))));
        g.bench_with_input(BenchmarkId::new("brute", n), &pts, |b, p| b.iter(|| min_triangle_brute(black_box(p))));
    }
    g.finish();
}

fn config_distance(c: &mut Criterion) {
    let mut g = c.benchmark_group("min_config_distance");
    for n in [200, 1000] {
        let x = random_config(n, Dim::Three, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| b.iter(|| min_config_distance(black_box(x))));
    }
    g.finish();
}

fn incidences(c: &mut Criterion) {
    let pts = random_points(2000, Dim::Three, 3);
    let lines = random_lines(2000, Dim::Three, 4);
    let mut g = c.benchmark_group("normalized_b");
    g.sample_size(10);
    for w in [0.1, 0.05] {
        g.bench_with_input(BenchmarkId::from_parameter(w), &w, |b, &w| b.iter(|| normalized_b(w, &pts, &lines)));
    }
    g.finish();
}

fn concentration(c: &mut Criterion) {
    let x = random_config(300, Dim::Three, 5);
    c.bench_function("m_config 300", |b| b.iter(|| m_config(black_box(&x), 0.125, 0.125, 0.25)));
}

fn two_ends(c: &mut Criterion) {
    let tubes = random_tubes_2d(300, 1.0 / 256.0, 6);
    let mut g = c.benchmark_group("two_ends");
    g.sample_size(10);
    g.bench_function("300 tubes", |b| {
        b.iter(|| two_ends_decompose(black_box(&tubes), 1.0 / 256.0, 0.125, &TwoEndsParams::default()))
    });
    g.finish();
}

criterion_group!(benches, triangles, config_distance, incidences, concentration, two_ends);
criterion_main!(benches);
