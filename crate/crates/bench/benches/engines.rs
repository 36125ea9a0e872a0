use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use subnormal_cli::scan::run_scan;
use subnormal_cli::{Grid, RunConfig};
use subnormal_core::cm::{finite_difference, DiffTable};
use subnormal_core::{
    classify_corollary, is_completely_monotone_upto, tensor_moment_bruteforce, tensor_moment_closed, ModuleParams,
    NumericMode, WeightSpec,
};

fn difference_scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("differences");
    for (name, params) in [("15,10", ModuleParams::ints(15, 10).unwrap()), ("1,1", ModuleParams::ints(1, 1).unwrap())] {
        group.bench_with_input(BenchmarkId::new("scan_120x120", name), &params, |b, p| {
            b.iter(|| is_completely_monotone_upto(black_box(p), 120, 120).unwrap())
        });
    }
    let p = ModuleParams::ratios(3, 2, 25, 1).unwrap();
    group.bench_function("table_80x20", |b| b.iter(|| DiffTable::build(black_box(&p), 80, 20).unwrap()));
    group.bench_function("direct_sum_m80", |b| b.iter(|| finite_difference(black_box(&p), 80, 0).unwrap()));
    group.finish();
}

fn moments(c: &mut Criterion) {
    let p = ModuleParams::ratios(7, 4, 33, 4).unwrap();
    c.bench_function("moments/closed_n100", |b| b.iter(|| tensor_moment_closed(black_box(&p), 100).unwrap()));
    c.bench_function("moments/bruteforce_n100", |b| b.iter(|| tensor_moment_bruteforce(black_box(&p), 100).unwrap()));
}

fn classification(c: &mut Criterion) {
    let points: Vec<ModuleParams> =
        (1..=50).flat_map(|a| (1..=50).map(move |b| ModuleParams::ratios(a, 2, b, 3).unwrap())).collect();
    c.bench_function("classify/2500_points", |b| {
        b.iter(|| points.iter().filter(|p| classify_corollary(black_box(p)).subnormal).count())
    });
    let mut config = RunConfig::new(NumericMode::Rational);
    config.grid = Grid::parse("0.1:10:0.1", NumericMode::Rational).unwrap();
    c.bench_function("scan/100x100_grid", |b| b.iter(|| run_scan(black_box(&config)).unwrap()));
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("density");
    for (name, params) in [("1,1", ModuleParams::ints(1, 1).unwrap()), ("2,2", ModuleParams::ints(2, 2).unwrap())] {
        let spec = WeightSpec::for_tensor(&params).unwrap();
        group.bench_with_input(BenchmarkId::new("moment_n20", name), &spec, |b, s| {
            b.iter(|| s.moment_quadrature(black_box(20), 1e-12).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("positivity", name), &spec, |b, s| {
            b.iter(|| s.positivity_certificate(100).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, difference_scans, moments, classification, quadrature);
criterion_main!(benches);
