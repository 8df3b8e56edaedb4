use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use normfam_bench::{perturbed_exp, spread_poly, wave};
use normfam_core::constants::{hempel_lai_a, theorem4_feasible};
use normfam_core::roots::{count_a_points, locate_a_points};
use normfam_core::scenario::{find_scenario, run_scenario};
use normfam_core::zalcman::{find_rescaling, WeightFn};
use normfam_core::zerofree::{extract_form, verify_form_bounds, FormOptions};
use normfam_core::{Complex64, Disk, GridSpec, LabConfig};

fn constants(c: &mut Criterion) {
    let mut g = c.benchmark_group("constants");
    for digits in [50u32, 200, 1000] {
        g.bench_with_input(BenchmarkId::new("hempel_lai_a", digits), &digits, |b, &d| {
            b.iter(|| hempel_lai_a(black_box(d)))
        });
    }
    g.bench_function("theorem4_feasible", |b| b.iter(|| theorem4_feasible(black_box(2.4e-5)).unwrap()));
    g.finish();
}

fn count(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_a_points");
    let zero = Complex64::new(0.0, 0.0);
    for k in [10.0, 40.0, 160.0] {
        let f = wave(k, 1.0);
        let disk = Disk::centered(1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("wave_a2", k), &f, |b, f| {
            b.iter(|| count_a_points(f, Complex64::new(2.0, 0.0), disk, &GridSpec::circle_default(1.0, 1.0)).unwrap())
        });
    }
    for n in [4usize, 16] {
        let f = spread_poly(n);
        let disk = Disk::centered(1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("locate_poly", n), &f, |b, f| {
            b.iter(|| locate_a_points(f, zero, disk, 1e-10).unwrap())
        });
    }
    g.finish();
}

fn rescaling(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_rescaling");
    let w = WeightFn::log_squared(4.0);
    for k in [10.0, 40.0] {
        let f = wave(k, 100.0);
        g.bench_with_input(BenchmarkId::new("wave", k), &f, |b, f| {
            b.iter(|| find_rescaling(f, Complex64::new(0.0, 0.0), 0.95, &w, &GridSpec::polar(16, 32)).unwrap())
        });
    }
    g.finish();
}

fn form(c: &mut Criterion) {
    let mut g = c.benchmark_group("extract_form");
    g.sample_size(20);
    let f = perturbed_exp(1e-5);
    g.bench_function("extract", |b| b.iter(|| extract_form(&f, 2000.0, &FormOptions::default()).unwrap()));
    let shape = extract_form(&f, 2000.0, &FormOptions::default()).unwrap();
    g.bench_function("verify_bounds", |b| b.iter(|| verify_form_bounds(&shape, &GridSpec::polar(16, 32)).unwrap()));
    g.finish();
}

fn scenario(c: &mut Criterion) {
    let mut g = c.benchmark_group("scenario");
    g.sample_size(10);
    let cfg = LabConfig::default();
    for id in ["origin-blowup", "theorem2-form", "0a1-rescale"] {
        let s = find_scenario(id).unwrap();
        g.bench_function(id, |b| b.iter(|| run_scenario(&s, None, &cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, constants, count, rescaling, form, scenario);
criterion_main!(benches);
