use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mkdv_bench::{sech_on_line, sech_periodic};
use mkdv_core::scattering::jost_solve;
use mkdv_core::{evolve, reflection_coefficient, EvolutionConfig, PainleveWindow};

fn scattering(c: &mut Criterion) {
    let u0 = sech_on_line(0.3, 8001);
    c.bench_function("jost_solve z=0.5", |b| {
        b.iter(|| jost_solve(black_box(&u0), 0.5).unwrap())
    });
    let mut group = c.benchmark_group("reflection sweep");
    group.sample_size(10);
    group.bench_function("z in [-2, 2], dz = 0.05", |b| {
        b.iter(|| reflection_coefficient(black_box(&u0), 2.0, 0.05).unwrap())
    });
    group.finish();
}

fn painleve(c: &mut Criterion) {
    let window = PainleveWindow::default();
    let mut group = c.benchmark_group("painleve");
    group.sample_size(20);
    group.bench_function("rho = 0.7 on [-12, 8]", |b| {
        b.iter(|| window.solve(black_box(0.7)).unwrap())
    });
    group.finish();
}

fn solver(c: &mut Criterion) {
    let u0 = sech_periodic(0.3, 400.0, 1 << 12);
    let cfg = EvolutionConfig::new(0.05, 1.0, vec![1.0]);
    let mut group = c.benchmark_group("etdrk4");
    group.sample_size(10);
    group.bench_function("20 steps, n = 4096", |b| {
        b.iter(|| evolve(black_box(&u0), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, scattering, painleve, solver);
criterion_main!(benches);
