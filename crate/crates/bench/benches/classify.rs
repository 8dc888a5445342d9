use abnorm_bench::{quadrilateral, so3_plane};
use abnorm_core::{canonical_basis, classify_basis, generates, integrate, witness_search, Sign};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn core_paths(c: &mut Criterion) {
    let (alg, plane) = so3_plane();
    let basis = canonical_basis(&alg, &plane).unwrap();
    let body = quadrilateral();

    c.bench_function("generates", |b| b.iter(|| generates(black_box(&alg), black_box(&plane))));
    c.bench_function("canonical_basis", |b| {
        b.iter(|| canonical_basis(black_box(&alg), black_box(&plane)).unwrap())
    });
    c.bench_function("classify", |b| b.iter(|| classify_basis(black_box(&basis), black_box(&body))));
    c.bench_function("witness_search", |b| {
        b.iter(|| witness_search(black_box(&basis), black_box(&body), Sign::Plus, 5.0))
    });
    c.bench_function("integrate T=5 dt=1e-3", |b| {
        b.iter(|| integrate(black_box(&basis.c23), 1.0, &[0.2, 1.0, 0.0, 1.0], 5.0, 1e-3).unwrap())
    });
}

criterion_group!(benches, core_paths);
criterion_main!(benches);
