use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use surface_modes_bench::sample_pair;
use surface_modes_core::eigensolver::find_eigenvalue;
use surface_modes_core::localization::localization_report;
use surface_modes_core::specfun::{besselj, besselj_log};
use surface_modes_core::zeros::bessel_zero;
use surface_modes_core::{Dimension, Medium, ModeIndex, Order, QuadOptions, SolverOptions};

fn bessel(c: &mut Criterion) {
    let mut group = c.benchmark_group("besselj");
    for m in [5u32, 40, 80] {
        let order = Order::integer(m);
        group.bench_with_input(BenchmarkId::new("plain", m), &m, |b, &m| {
            b.iter(|| besselj(order, black_box(0.6 * f64::from(m))))
        });
        group.bench_with_input(BenchmarkId::new("log", m), &m, |b, &m| {
            b.iter(|| besselj_log(order, black_box(0.3 * f64::from(m))))
        });
    }
    group.finish();
}

fn zeros(c: &mut Criterion) {
    c.bench_function("bessel_zero m=60 s=2", |b| b.iter(|| bessel_zero(black_box(Order::integer(60)), 2)));
}

fn eigenvalues(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_eigenvalue");
    for dim in [Dimension::Two, Dimension::Three] {
        let medium = Medium::new(2.0, dim).unwrap();
        group.bench_function(format!("{dim:?} m=60"), |b| {
            b.iter(|| find_eigenvalue(&medium, ModeIndex { m: black_box(60), s0: 1 }, &SolverOptions::default()))
        });
    }
    group.finish();
}

fn localization(c: &mut Criterion) {
    let pair = sample_pair(2.0, Dimension::Two, 60);
    let quad = QuadOptions::default();
    c.bench_function("localization_report m=60 tau=0.5", |b| {
        b.iter(|| localization_report(black_box(&pair), 0.5, &quad))
    });
}

criterion_group!(benches, bessel, zeros, eigenvalues, localization);
criterion_main!(benches);
