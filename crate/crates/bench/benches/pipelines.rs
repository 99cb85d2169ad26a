//! Criterion benchmarks for the hot paths: θ construction, channel
//! application, closed-form concurrence, the roof oracle, and capacity
//! searches.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qroof::entanglement::{capacity_amplitude_damping, capacity_numeric, CapacityOptions};
use qroof::roof::{roof_min, RoofOptions, DEFAULT_BUDGET};
use qroof::sampling::Sampler;
use qroof::state::DensityOperator;
use qroof::{concurrence, theta_from_kraus, ChannelSpec};

fn bench_theta(c: &mut Criterion) {
    let mut sampler = Sampler::new(101);
    let pair = sampler.kraus_pair_tp();
    c.bench_function("theta_from_kraus", |b| {
        b.iter(|| theta_from_kraus(black_box(&pair.a()), black_box(&pair.b())))
    });
}

fn bench_apply(c: &mut Criterion) {
    let mut sampler = Sampler::new(102);
    let spec = sampler.channel_tp();
    let rho = sampler.mixed_state(0.9);
    c.bench_function("channel_apply", |b| {
        b.iter(|| spec.apply_matrix(black_box(&rho.matrix())))
    });
}

fn bench_concurrence(c: &mut Criterion) {
    let mut sampler = Sampler::new(103);
    let spec = sampler.channel_tp();
    let rho = sampler.mixed_state(0.9);
    c.bench_function("concurrence_closed_form", |b| {
        b.iter(|| concurrence(black_box(&spec), black_box(&rho)).0.value())
    });
}

fn bench_roof(c: &mut Criterion) {
    let mut sampler = Sampler::new(104);
    let spec = sampler.channel_tp();
    let rho = sampler.mixed_state(0.9);
    let opts = RoofOptions { budget: DEFAULT_BUDGET, seed: 1 };
    let g = move |pi: &DensityOperator| spec.output_entropy(&pi.matrix());
    c.bench_function("roof_min_entropy", |b| {
        b.iter(|| roof_min(&g, black_box(&rho), &opts).unwrap().value)
    });
}

fn bench_capacity(c: &mut Criterion) {
    c.bench_function("capacity_profile_search", |b| {
        b.iter(|| capacity_amplitude_damping(black_box(0.35), 1e-10).unwrap().capacity)
    });
    let spec = ChannelSpec::amplitude_damping(0.35).unwrap();
    let opts = CapacityOptions::default();
    c.bench_function("capacity_numeric_search", |b| {
        b.iter(|| capacity_numeric(black_box(&spec), &opts).unwrap().capacity)
    });
}

criterion_group! {
    name = pipelines;
    config = Criterion::default().sample_size(10);
    targets = bench_theta, bench_apply, bench_concurrence, bench_roof, bench_capacity
}
criterion_main!(pipelines);
