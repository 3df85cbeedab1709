use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use impa_core::network::{default_band, input_reflection};
use impa_core::snail::taylor_coefficients;
use impa_core::sweep::{self, sequential};
use impa_core::{ArraySpec, DeviceDesign, FluxBias, SnailParams};

fn device() -> DeviceDesign {
    let cell = SnailParams::new(0.18, 3, 80e-12).unwrap();
    let array = ArraySpec::new(cell, 67, 30e-15).unwrap();
    DeviceDesign::tuned(array, 87.0, 59.0, 6.4e9, 50.0)
        .unwrap()
        .with_pump(110.0)
        .unwrap()
}

fn gain_sweep(c: &mut Criterion) {
    let design = device();
    let band = default_band(6.4e9);
    let mut group = c.benchmark_group("gain_sweep");
    for points in [201usize, 2001, 20001] {
        let grid = sweep::linspace(band.f_start, band.f_stop, points);
        group.bench_with_input(BenchmarkId::new("sequential", points), &grid, |b, grid| {
            b.iter(|| sequential::map(black_box(grid), |&f| input_reflection(&design, f)))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", points), &grid, |b, grid| {
            b.iter(|| sweep::parallel::map(black_box(grid), |&f| input_reflection(&design, f)))
        });
    }
    group.finish();
}

fn flux_sweep(c: &mut Criterion) {
    let cell = SnailParams::new(0.18, 3, 80e-12).unwrap();
    let mut group = c.benchmark_group("flux_sweep");
    for points in [101usize, 1001] {
        let grid = sweep::linspace(0.0, 0.5, points);
        group.bench_with_input(BenchmarkId::new("sequential", points), &grid, |b, grid| {
            b.iter(|| {
                sequential::map(black_box(grid), |&f| {
                    taylor_coefficients(FluxBias::from_fraction(f), &cell)
                })
            })
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", points), &grid, |b, grid| {
            b.iter(|| {
                sweep::parallel::map(black_box(grid), |&f| {
                    taylor_coefficients(FluxBias::from_fraction(f), &cell)
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, gain_sweep, flux_sweep);
criterion_main!(benches);
