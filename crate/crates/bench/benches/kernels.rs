use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use hurwitz_toda::dispersionless::solve;
use hurwitz_toda::fock::check_intertwining;
use hurwitz_toda::free_energy::solve_tower;
use hurwitz_toda::hurwitz::{
    cut_and_join, hurwitz_bruteforce, hurwitz_burnside, z_double, BruteForceBounds,
};
use hurwitz_toda::schur::{schur, Times};
use hurwitz_toda::BetaMode;
use hurwitz_toda_bench::{profile_triples, staircase};

fn hurwitz_numbers(c: &mut Criterion) {
    let triples = profile_triples(4);
    c.bench_function("burnside d=4 all triples", |b| {
        b.iter(|| {
            for rp in &triples {
                black_box(hurwitz_burnside(rp).unwrap());
            }
        })
    });
    c.bench_function("bruteforce d=4 all triples", |b| {
        b.iter(|| {
            for rp in &triples {
                black_box(hurwitz_bruteforce(rp, BruteForceBounds::default()).unwrap());
            }
        })
    });
}

fn series(c: &mut Criterion) {
    let l = staircase(3);
    c.bench_function("schur (3,2,1) D=8", |b| {
        b.iter(|| black_box(schur(&l, Times::T, 8, BetaMode::Poly).unwrap()))
    });
    let s = schur(&l, Times::T, 8, BetaMode::Poly).unwrap();
    c.bench_function("cut-and-join on s_(3,2,1)", |b| {
        b.iter(|| black_box(cut_and_join(&s)))
    });
    c.bench_function("Z_double D=6 N_beta=6", |b| {
        b.iter(|| black_box(z_double(6, 6).unwrap()))
    });
}

fn heavy(c: &mut Criterion) {
    let mut g = c.benchmark_group("heavy");
    g.sample_size(10);
    g.bench_function("intertwining d_max=6 s=0", |b| {
        b.iter(|| black_box(check_intertwining(6, 0, 4, 2).unwrap()))
    });
    g.bench_function("string solve D=4", |b| {
        b.iter(|| black_box(solve(4).unwrap()))
    });
    g.bench_function("free energy n<=2 D=6 N_beta=5", |b| {
        b.iter(|| black_box(solve_tower(2, 6, 5).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, hurwitz_numbers, series, heavy);
criterion_main!(benches);
