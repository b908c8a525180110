use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use geofib::fibration::fiber_h3_z;
use geofib::verify::{check_partition, classify_group};
use geofib::{canonicalize_z, Complex64, Fibration, H3PointHalf, Space, SubgroupSpec};

fn solver(c: &mut Criterion) {
    let z = Complex64::new(0.7, 1.3);
    let p = H3PointHalf::new(Complex64::new(0.4, -1.1), 0.8).unwrap();
    c.bench_function("fiber_h3_z", |b| {
        b.iter(|| fiber_h3_z(black_box(z), black_box(&p)).unwrap())
    });
    c.bench_function("canonicalize_z", |b| {
        b.iter(|| canonicalize_z(black_box(Complex64::new(-0.3, 0.4))).unwrap())
    });
}

fn checks(c: &mut Criterion) {
    let fz = Fibration::hyperbolic(Complex64::new(1.0, 2.0)).unwrap();
    let ft = Fibration::euclidean(1.0).unwrap();
    c.bench_function("check_partition F_z 1000", |b| {
        b.iter(|| check_partition(&fz, 1000, 1e-8, 1).unwrap())
    });
    c.bench_function("check_partition F_t 1000", |b| {
        b.iter(|| check_partition(&ft, 1000, 1e-8, 1).unwrap())
    });
    let hyp_par = SubgroupSpec::lookup(Space::H3, "HypPar", None).unwrap();
    c.bench_function("classify <Hyp,Par>", |b| {
        b.iter(|| classify_group(&hyp_par, 1e-8, 1).unwrap())
    });
    let e3 = SubgroupSpec::lookup(Space::E3, "E3", None).unwrap();
    c.bench_function("classify E(3)", |b| b.iter(|| classify_group(&e3, 1e-8, 1).unwrap()));
}

criterion_group!(benches, solver, checks);
criterion_main!(benches);
