use std::hint::black_box;

use betamat::charpoly::charpoly_exact;
use betamat::limitcase::lambda_max_beta1;
use betamat::rootfind::solve_all;
use betamat::spectra::{singular_values, spectrum};
use betamat::{BetaParam, ClosedForm};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn beta(s: &str) -> BetaParam {
    BetaParam::parse(s).unwrap()
}

fn bench_charpoly(c: &mut Criterion) {
    let b = beta("4/3");
    let mut group = c.benchmark_group("charpoly_exact");
    for n in [50, 200, 400] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, &n| {
            bench.iter(|| charpoly_exact(black_box(&b), n).unwrap())
        });
    }
    group.finish();
}

fn bench_roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_all");
    group.sample_size(10);
    for n in [50, 100, 200] {
        let form = ClosedForm::new(&beta("4/3"), n).unwrap();
        group.bench_with_input(BenchmarkId::new("digits50", n), &n, |bench, _| {
            bench.iter(|| solve_all(black_box(&form), 50).unwrap())
        });
    }
    let b = beta("3/2+1/2i");
    group.bench_function("complex_beta_n100", |bench| bench.iter(|| spectrum(&b, 100, 20).unwrap()));
    group.finish();
}

fn bench_singular(c: &mut Criterion) {
    let mut group = c.benchmark_group("singular_values");
    group.sample_size(10);
    for n in [50, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, &n| {
            bench.iter(|| singular_values(&beta("3"), n, 256).unwrap())
        });
    }
    group.finish();
}

fn bench_power(c: &mut Criterion) {
    let mut group = c.benchmark_group("lambda_max_beta1");
    group.sample_size(10);
    for n in [50, 400] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, &n| {
            bench.iter(|| lambda_max_beta1(n, 30).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_charpoly, bench_roots, bench_singular, bench_power);
criterion_main!(benches);
