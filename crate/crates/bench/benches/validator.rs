use std::hint::black_box;
use std::io::BufReader;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use gtoc12_bench::{catalog, mining_fleet, mixed_fleet};
use gtoc12_core::catalog::constants::{AU_KM, MU_SUN};
use gtoc12_core::catalog::write_asteroid_catalog;
use gtoc12_core::{
    coast_propagate, load_asteroid_catalog, parse_solution, serialize_solution, solve_kepler,
    thrust_propagate, validate_text, Epoch, IntegratorConfig, StateVector, ThrustProfile,
    ValidationConfig, Vector3,
};

fn start() -> StateVector {
    StateVector::new(
        Epoch::from_mjd(65000.0),
        Vector3::new(AU_KM, 0.0, 0.0),
        Vector3::new(0.0, (MU_SUN / AU_KM).sqrt() * 1.05, 0.3),
        2000.0,
    )
}

fn propagation(c: &mut Criterion) {
    c.bench_function("kepler_1000", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for k in 0..1000 {
                acc += solve_kepler(k as f64 * 0.0063, 0.7).unwrap();
            }
            black_box(acc)
        })
    });
    let s = start();
    c.bench_function("coast_one_year", |b| {
        b.iter(|| coast_propagate(black_box(&s), 365.25 * 86400.0).unwrap())
    });
    let samples: Vec<_> = (0..=100)
        .map(|d| {
            let a = d as f64 * 0.05;
            (
                s.epoch.add_days(d as f64),
                Vector3::new(0.4 * a.cos(), 0.4 * a.sin(), 0.1),
            )
        })
        .collect();
    let profile = ThrustProfile::new(samples).unwrap();
    let config = IntegratorConfig::default();
    c.bench_function("burn_100_days", |b| {
        b.iter(|| thrust_propagate(black_box(&s), &profile, &config).unwrap())
    });
}

fn files(c: &mut Criterion) {
    let catalog = catalog();
    let text = mining_fleet(&catalog);
    let doc = parse_solution(&text).unwrap();
    c.bench_function("parse_mining_fleet", |b| {
        b.iter(|| parse_solution(black_box(&text)).unwrap())
    });
    c.bench_function("serialize_mining_fleet", |b| {
        b.iter(|| serialize_solution(black_box(&doc)).unwrap())
    });
    let table = write_asteroid_catalog(&catalog);
    let mut group = c.benchmark_group("catalog");
    group.sample_size(10);
    group.bench_function("load_60000", |b| {
        b.iter(|| load_asteroid_catalog(BufReader::new(black_box(table.as_bytes()))).unwrap())
    });
    group.finish();
}

fn validation(c: &mut Criterion) {
    let catalog = catalog();
    let mining = mining_fleet(&catalog);
    let mixed = mixed_fleet(&catalog);
    let parallel = ValidationConfig::default();
    let serial = ValidationConfig {
        parallel: false,
        ..parallel
    };
    let mut group = c.benchmark_group("validate");
    group.sample_size(20);
    group.bench_function("mining_fleet", |b| {
        b.iter(|| validate_text(black_box(&mining), &catalog, &parallel))
    });
    group.bench_function("mining_fleet_serial", |b| {
        b.iter(|| validate_text(black_box(&mining), &catalog, &serial))
    });
    group.bench_function("mixed_fleet", |b| {
        b.iter_batched(
            || mixed.clone(),
            |text| validate_text(&text, &catalog, &parallel),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, propagation, files, validation);
criterion_main!(benches);
