use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use logjet_bench::{cusp, cusp_jets, line, square_cone};
use logjet_core::analyzer::{verdict, AnalysisConfig};
use logjet_core::dimension::{count_points, groebner_dimension, FpConfig};
use logjet_core::jets::jet_ideal;
use logjet_core::{Budget, JetMode};

fn jets(c: &mut Criterion) {
    let chart = cusp();
    c.bench_function("jet_ideal cusp m=5", |b| b.iter(|| jet_ideal(black_box(&chart), 5, JetMode::Ordinary).unwrap()));
    let chart = line();
    c.bench_function("jet_ideal line log m=5", |b| b.iter(|| jet_ideal(black_box(&chart), 5, JetMode::Log).unwrap()));
}

fn groebner(c: &mut Criterion) {
    let mut group = c.benchmark_group("groebner");
    group.sample_size(10);
    for m in [3, 4] {
        let ideal = cusp_jets(m).unwrap();
        group.bench_function(format!("cusp J_{m}"), |b| {
            b.iter(|| groebner_dimension(black_box(&ideal), &Budget::default()).unwrap())
        });
    }
    group.finish();
}

fn points(c: &mut Criterion) {
    let ideal = cusp_jets(3).unwrap();
    let mut group = c.benchmark_group("fp");
    group.sample_size(10);
    group.bench_function("count cusp J_3 over F_101", |b| {
        b.iter(|| count_points(black_box(&ideal), 101, &FpConfig::default()).unwrap())
    });
    group.finish();
}

fn faces(c: &mut Criterion) {
    let monoid = square_cone();
    c.bench_function("faces of the square cone", |b| b.iter(|| black_box(&monoid).faces().unwrap()));
}

fn analyzer(c: &mut Criterion) {
    let chart = line();
    let cfg = AnalysisConfig::with_max_order(3);
    let mut group = c.benchmark_group("analyzer");
    group.sample_size(10);
    group.bench_function("verdict line M=3", |b| b.iter(|| verdict(black_box(&chart), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, jets, groebner, points, faces, analyzer);
criterion_main!(benches);
