use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nepritz::experiments::{run_instance, PipelineOptions};
use nepritz::linalg::{eigenvalues, svd};
use nepritz::projection::project;
use nepritz::solver::solve_projected;
use nepritz_bench::{instance, square};

fn dense(c: &mut Criterion) {
    let mut g = c.benchmark_group("dense");
    for n in [8, 16, 32] {
        let a = square(n, 1);
        g.bench_with_input(BenchmarkId::new("svd", n), &a, |b, a| b.iter(|| svd(black_box(a)).unwrap()));
        g.bench_with_input(BenchmarkId::new("eig", n), &a, |b, a| b.iter(|| eigenvalues(black_box(a)).unwrap()));
    }
    g.finish();
}

fn projected(c: &mut Criterion) {
    let mut g = c.benchmark_group("projected_solve");
    for m in [2, 4, 6] {
        let (t, r, s) = instance(12, m, 1e-4, 7);
        let b = project(&t, &s).unwrap();
        let center = r.lambda_star;
        g.bench_with_input(BenchmarkId::from_parameter(m), &b, |bench, b| {
            bench.iter(|| solve_projected(black_box(b), center, 0.5).unwrap())
        });
    }
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let (t, r, s) = instance(10, 3, 1e-4, 3);
    let options = PipelineOptions::default();
    c.bench_function("pipeline_all_bounds", |b| {
        b.iter(|| run_instance("bench", &t, &s, &r, black_box(&options)).unwrap())
    });
}

criterion_group!(benches, dense, projected, pipeline);
criterion_main!(benches);
