//! Criterion benchmarks for the enumeration and linear-algebra kernels.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cgk_core::groupscheme::{self, EnumOptions, GroupContext, GroupFamily};
use cgk_core::hypcount;
use cgk_core::liealg::{self, scan::ScanOptions, AlgebraBasis};
use cgk_core::repbound;
use cgk_core::ringalg::{Mat, Ring};
use cgk_core::spectral::{self, SParam};

fn bench_mat_mul(c: &mut Criterion) {
    let z9 = Ring::integers_mod(3, 2).unwrap();
    let a = Mat::from_rows(
        z9,
        &[
            vec![1, 2, 3, 4, 5],
            vec![6, 7, 8, 0, 1],
            vec![2, 3, 4, 5, 6],
            vec![7, 8, 0, 1, 2],
            vec![3, 4, 5, 6, 7],
        ],
    )
    .unwrap();
    c.bench_function("mat_mul_5x5_z9", |b| {
        b.iter(|| black_box(&a).mul(black_box(&a)).unwrap())
    });
}

fn bench_enumerate_sl2_z9(c: &mut Criterion) {
    let ring = Ring::integers_mod(3, 2).unwrap();
    let ctx = GroupContext::new(GroupFamily::sl(1).unwrap(), ring).unwrap();
    c.bench_function("enumerate_sl2_z9", |b| {
        b.iter(|| groupscheme::order_by_enumeration(black_box(&ctx), EnumOptions::default()).unwrap())
    });
}

fn bench_enumerate_so4_f3(c: &mut Criterion) {
    let ring = Ring::prime_field(3).unwrap();
    let ctx = GroupContext::new(GroupFamily::so(3, None).unwrap(), ring).unwrap();
    c.bench_function("enumerate_so4_f3", |b| {
        b.iter(|| groupscheme::order_by_enumeration(black_box(&ctx), EnumOptions::default()).unwrap())
    });
}

fn bench_scan_sl2_f5(c: &mut Criterion) {
    let ring = Ring::prime_field(5).unwrap();
    let ctx = GroupContext::new(GroupFamily::sl(1).unwrap(), ring).unwrap();
    let opts = ScanOptions {
        exhaustive_counts: true,
        ..ScanOptions::default()
    };
    c.bench_function("exhaustive_scan_sl2_f5", |b| {
        b.iter(|| liealg::exhaustive_centralizer_scan(black_box(&ctx), &opts).unwrap())
    });
}

fn bench_killing_gram_so5(c: &mut Criterion) {
    let ring = Ring::prime_field(7).unwrap();
    let ctx = GroupContext::new(GroupFamily::so(4, None).unwrap(), ring).unwrap();
    let basis = AlgebraBasis::new(&ctx).unwrap();
    c.bench_function("killing_gram_so5_f7", |b| {
        b.iter(|| black_box(&basis).killing_gram().unwrap())
    });
}

fn bench_min_orbit(c: &mut Criterion) {
    let fam = GroupFamily::sl(1).unwrap();
    c.bench_function("min_new_orbit_sl2_p3_r2", |b| {
        b.iter(|| repbound::min_new_orbit(black_box(&fam), 3, 2, 10_000_000).unwrap())
    });
}

fn bench_lattice_count(c: &mut Criterion) {
    let grid = hypcount::default_grid(1.0, 200.0, 12);
    c.bench_function("lattice_count_r200", |b| {
        b.iter(|| hypcount::count_grid(black_box(&[1, 2, 3, 5]), &grid, 1))
    });
}

fn bench_spherical_ode(c: &mut Criterion) {
    let ts: Vec<f64> = (0..=100).map(|i| 0.25 * i as f64).collect();
    c.bench_function("spherical_ode_n2_to_t25", |b| {
        b.iter(|| spectral::spherical_profile(2, SParam::Real(0.125), black_box(&ts), 1e-9).unwrap())
    });
}

criterion_group!(
    benches,
    bench_mat_mul,
    bench_enumerate_sl2_z9,
    bench_enumerate_so4_f3,
    bench_scan_sl2_f5,
    bench_killing_gram_so5,
    bench_min_orbit,
    bench_lattice_count,
    bench_spherical_ode
);
criterion_main!(benches);
