use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ppdiv_bench::{action_pair, ppdivisor};
use ppdiv_core::algebra::hilbert_table;
use ppdiv_core::convex::{polyhedron_from_support, Cone, TailedPolyhedron};
use ppdiv_core::exactnum::rat;
use ppdiv_core::galois::{descent_dimensions, is_galois_action};
use ppdiv_core::lattice::LatticeVector;

fn polyhedra(c: &mut Criterion) {
    let tail = Cone::new(2, &[LatticeVector(vec![1, 0]), LatticeVector(vec![1, 12])]).unwrap();
    let pts: Vec<Vec<_>> = [(0, 0), (1, 3), (2, -1), (-1, 2), (3, 5)]
        .iter()
        .map(|&(a, b)| vec![rat(a, 2), rat(b, 3)])
        .collect();
    let p = TailedPolyhedron::new(2, &pts, &tail).unwrap();
    let q = TailedPolyhedron::new(2, &pts[1..3], &tail).unwrap();
    c.bench_function("polyhedron/new", |b| {
        b.iter(|| TailedPolyhedron::new(2, black_box(&pts), &tail))
    });
    c.bench_function("polyhedron/minkowski_sum", |b| {
        b.iter(|| black_box(&p).minkowski_sum(&q))
    });
    c.bench_function("polyhedron/normal_quasifan", |b| {
        b.iter(|| black_box(&p).normal_quasifan())
    });
    let samples = p
        .normal_quasifan()
        .samples()
        .into_iter()
        .map(|m| {
            let h = p.support(&m).finite().unwrap().clone();
            (m, h)
        })
        .collect();
    c.bench_function("polyhedron/from_support", |b| {
        b.iter(|| polyhedron_from_support(&tail, black_box(&samples)))
    });
}

fn hilbert(c: &mut Criterion) {
    let a3 = ppdivisor("a3.ppdiv");
    let x = ppdivisor("x3y4zw.ppdiv");
    c.bench_function("hilbert/a3 0..10", |b| {
        b.iter(|| hilbert_table(black_box(&a3), &[(0, 10), (0, 10)]))
    });
    c.bench_function("hilbert/x3y4zw 0..24", |b| {
        b.iter(|| hilbert_table(black_box(&x), &[(0, 24), (-2, 2)]))
    });
}

fn actions(c: &mut Criterion) {
    let (a3, swap) = action_pair("a3.ppdiv", -1, "swap.action");
    c.bench_function("action/check swap", |b| {
        b.iter(|| is_galois_action(black_box(&swap), &a3))
    });
    c.bench_function("action/descend 0..6", |b| {
        b.iter(|| descent_dimensions(black_box(&swap), &a3, &[(0, 6), (0, 6)]))
    });
}

criterion_group!(kernels, polyhedra, hilbert, actions);
criterion_main!(kernels);
