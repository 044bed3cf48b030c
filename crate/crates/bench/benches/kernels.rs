use std::f64::consts::FRAC_PI_4;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cutpaste_core::continuous::{eb_length, rotating_ad_liouvillian, switched_ad_line, Branch};
use cutpaste_core::optics::{sweep, OpticalSetup, SweepAngle};
use cutpaste_core::qmath::expm;
use cutpaste_core::{ad_channel, c64, choi_state, concurrence, ComplexMatrix};

fn dense(n: usize) -> ComplexMatrix {
    let entries: Vec<_> = (0..n * n).map(|k| c64((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos() * 0.5)).collect();
    ComplexMatrix::from_row_major(n, n, &entries).unwrap()
}

fn kernels(c: &mut Criterion) {
    let generic = dense(4);
    let hermitian = generic.hermitian_part();
    c.bench_function("expm/4x4 general", |b| b.iter(|| expm(black_box(&generic)).unwrap()));
    c.bench_function("expm/4x4 hermitian", |b| b.iter(|| expm(black_box(&hermitian)).unwrap()));

    let rho = choi_state(&ad_channel(0.4).unwrap()).unwrap();
    c.bench_function("concurrence/choi of AD", |b| b.iter(|| concurrence(black_box(&rho)).unwrap()));

    let single = rotating_ad_liouvillian(Branch::First, 1.5, 1.0).unwrap();
    c.bench_function("eb_length/AD single", |b| b.iter(|| eb_length(black_box(&single), 50.0).unwrap()));
    let line = switched_ad_line(1.5, 1.0, 1.75 / 8.0).unwrap();
    c.bench_function("eb_length/AD switched n=8", |b| b.iter(|| eb_length(black_box(&line), 50.0).unwrap()));
}

fn optics(c: &mut Criterion) {
    let setup = OpticalSetup::m_prime(0.3, 0.3, FRAC_PI_4, FRAC_PI_4).unwrap();
    let mut g = c.benchmark_group("optics");
    g.sample_size(10);
    g.bench_function("mprime sweep 181", |b| b.iter(|| sweep(black_box(&setup), SweepAngle::Theta, -1.5, 1.5, 181).unwrap()));
    g.finish();
}

criterion_group!(benches, kernels, optics);
criterion_main!(benches);
