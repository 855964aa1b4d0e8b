//! Criterion benchmarks for the solver hot paths: exact simplex,
//! image-vertex enumeration, the exact maximizer, determinant
//! interpolation, and the randomized common-base search.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fiberopt_bench::{explicit_fixture, lp_fixture, matroid_fixture, matroid_substitution};

use fiberopt::fibers::image_vertices;
use fiberopt::lp::{lp_solve, LpSense};
use fiberopt::matroid::{interpolate_support, optimal_common_base, MatroidConfig};
use fiberopt::optimize::quasiconvex_max;
use fiberopt::weights::DEFAULT_GRID_CAP;

fn bench_lp(c: &mut Criterion) {
    let (p, objective) = lp_fixture();
    c.bench_function("lp_solve/6d_36rows", |b| {
        b.iter(|| lp_solve(black_box(&p), black_box(&objective), LpSense::Max).unwrap())
    });
}

fn bench_image_vertices(c: &mut Criterion) {
    let instance = explicit_fixture();
    let region = instance.explicit().unwrap().to_vrep().unwrap();
    c.bench_function("image_vertices/d2", |b| {
        b.iter(|| {
            image_vertices(
                black_box(&region),
                &instance.weights,
                instance.beta(),
                DEFAULT_GRID_CAP,
            )
            .unwrap()
        })
    });
}

fn bench_quasiconvex_max(c: &mut Criterion) {
    let instance = explicit_fixture();
    let region = instance.explicit().unwrap().to_vrep().unwrap();
    let f = instance.oracle().unwrap();
    c.bench_function("quasiconvex_max/d2", |b| {
        b.iter(|| {
            quasiconvex_max(
                black_box(&region),
                &instance.weights,
                instance.beta(),
                &f,
                DEFAULT_GRID_CAP,
            )
            .unwrap()
        })
    });
}

fn bench_interpolation(c: &mut Criterion) {
    let (pair, w) = matroid_fixture();
    let a = matroid_substitution();
    let config = MatroidConfig::default();
    c.bench_function("interpolate_support/r2_n5", |b| {
        b.iter(|| interpolate_support(black_box(&pair), &w, &a, &config).unwrap())
    });
}

fn bench_common_base(c: &mut Criterion) {
    let (pair, w) = matroid_fixture();
    let f = fiberopt::objective::ObjectiveOracle::linear(vec![fiberopt::rational::rat(1)]);
    let config = MatroidConfig::default();
    let mut group = c.benchmark_group("optimal_common_base");
    group.sample_size(20);
    group.bench_function("r2_n5_single_run", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed = seed.wrapping_add(1);
            optimal_common_base(black_box(&pair), &w, &f, seed, 1, &config)
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_lp,
    bench_image_vertices,
    bench_quasiconvex_max,
    bench_interpolation,
    bench_common_base
);
criterion_main!(benches);
