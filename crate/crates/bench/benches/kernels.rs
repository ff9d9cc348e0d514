use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use subflow_bench::ek_params;
use subflow_core::ek_operator::{ek_apply_direct, lambda_coeff, lambda_coeff_integral, ExpDecay};
use subflow_core::numerics::{gamma_fn, hyp2f1, integrate_jacobi, GaussRule};
use subflow_core::{BoundaryCondition, QuadratureSpec, SeriesSolution, SimilarityProblem};

fn gamma(c: &mut Criterion) {
    c.bench_function("gamma_fn", |b| b.iter(|| gamma_fn(black_box(7.3))));
    c.bench_function("hyp2f1", |b| {
        b.iter(|| hyp2f1(black_box(1.5), -0.5, 2.5, black_box(-0.4)))
    });
}

fn lambda(c: &mut Criterion) {
    let p = ek_params();
    let mut group = c.benchmark_group("lambda");
    for k in [1usize, 10, 200] {
        group.bench_with_input(BenchmarkId::new("series", k), &k, |b, &k| {
            b.iter(|| lambda_coeff(black_box(k), &p))
        });
    }
    let spec = QuadratureSpec::adaptive(1e-12);
    group.bench_function("integral/10", |b| {
        b.iter(|| lambda_coeff_integral(black_box(10), &p, &spec))
    });
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadrature");
    for n in [16usize, 64] {
        group.bench_with_input(BenchmarkId::new("jacobi_rule", n), &n, |b, &n| {
            b.iter(|| GaussRule::jacobi(black_box(n), 0.5, 0.1))
        });
    }
    let spec = QuadratureSpec::default();
    group.bench_function("integrate_jacobi/64", |b| {
        b.iter(|| integrate_jacobi(|z| (-z).exp(), black_box(0.5), 0.1, &spec))
    });
    let p = ek_params();
    group.bench_function("ek_apply_direct", |b| {
        b.iter(|| ek_apply_direct(&ExpDecay, black_box(1.3), &p, &spec))
    });
    group.finish();
}

fn series(c: &mut Criterion) {
    let problem =
        SimilarityProblem::new(0.95, 2.0, BoundaryCondition::Flux).expect("valid problem");
    c.bench_function("series_solution/12", |b| {
        b.iter(|| SeriesSolution::new(black_box(problem), 12))
    });
}

criterion_group!(benches, gamma, lambda, quadrature, series);
criterion_main!(benches);
