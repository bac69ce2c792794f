use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use bclab_core::lp::{enumerate_vertices, solve_lp};
use bclab_core::proof::{build_theorem4_tree, run_branch_and_cut, verify_proof, Strategy};
use bclab_core::search::{min_bb_tree_size, SearchSpace};
use bclab_core::zoo::{cks_tetrahedron, jeroslow_inequality, random_bounded};

fn lp(c: &mut Criterion) {
    let inst = jeroslow_inequality(9).unwrap();
    c.bench_function("lp/jeroslow9", |b| {
        b.iter(|| solve_lp(black_box(&inst.polyhedron), &inst.objective).unwrap())
    });
    let rnd = random_bounded(7, 3, 1, 3, 3);
    c.bench_function("lp/random4", |b| {
        b.iter(|| solve_lp(black_box(&rnd.polyhedron), &rnd.objective).unwrap())
    });
    c.bench_function("vertices/random4", |b| {
        b.iter(|| enumerate_vertices(black_box(&rnd.polyhedron)).unwrap())
    });
}

fn verify(c: &mut Criterion) {
    let tree = build_theorem4_tree(9).unwrap();
    c.bench_function("verify/theorem4_n9", |b| b.iter(|| verify_proof(black_box(&tree))));
    let cks = cks_tetrahedron(100).unwrap();
    c.bench_function("driver/cks_h100", |b| {
        b.iter(|| run_branch_and_cut(black_box(&cks), &Strategy::variable_branching()).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let inst = jeroslow_inequality(3).unwrap();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("jeroslow3_s1", |b| {
        b.iter(|| min_bb_tree_size(black_box(&inst), &SearchSpace::new(1, 1)).unwrap())
    });
    let five = jeroslow_inequality(5).unwrap();
    group.bench_function("jeroslow5_s1", |b| {
        b.iter(|| min_bb_tree_size(black_box(&five), &SearchSpace::new(1, 1)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, lp, verify, search);
criterion_main!(benches);
