use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use morsenov_core::argmap::examples::{g_eps, p_n};
use morsenov_core::argmap::{crit_points_arg_rational, crit_points_milnor, SolverConfig};
use morsenov_core::{
    alexander_from_seifert, alexander_via_burau, minimize_inhomogeneity, seifert_matrix_from_braid,
    Braidword,
};

fn braids(c: &mut Criterion) {
    let long = Braidword::parse("s1 -s2 s3 s1 -s1 s2 s2 -s3 s1 s3 -s2 s1", 4).unwrap();
    c.bench_function("inhomogeneity/12 letters", |b| b.iter(|| black_box(&long).inhomogeneity()));
    let w = Braidword::parse("s1 s1 -s1 s2 -s2 s1", 3).unwrap();
    c.bench_function("minimize/budget 500", |b| b.iter(|| minimize_inhomogeneity(black_box(&w), 500)));
}

fn alexander(c: &mut Criterion) {
    let w = Braidword::parse("s1 -s2 s3 s1 -s2 s3 s1 -s2", 4).unwrap();
    c.bench_function("alexander/seifert", |b| {
        b.iter(|| alexander_from_seifert(&seifert_matrix_from_braid(black_box(&w)).unwrap()))
    });
    c.bench_function("alexander/burau", |b| b.iter(|| alexander_via_burau(black_box(&w))));
}

fn argmap(c: &mut Criterion) {
    let p8 = p_n(8);
    c.bench_function("rational/p_8", |b| b.iter(|| crit_points_arg_rational(black_box(&p8))));
    let cfg = SolverConfig { seed_count: 256, ..SolverConfig::default() };
    let g = g_eps(0.1);
    let mut group = c.benchmark_group("milnor");
    group.sample_size(10);
    group.bench_function("g_eps/256 seeds", |b| b.iter(|| crit_points_milnor(black_box(&g), 1.0, &cfg)));
    group.finish();
}

criterion_group!(benches, braids, alexander, argmap);
criterion_main!(benches);
