//! Benchmark bodies, kept in a library so `cargo test` type-checks them.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};

use ringlab_core::dsl::parse_ring;
use ringlab_core::graph::isomorphic;
use ringlab_core::integral::monic_annihilator;
use ringlab_core::localized::lambda1_localized;
use ringlab_core::semidirect::{check_prop_iso, LocalizedSemidirect, WitnessBounds};
use ringlab_core::subring::{compressed_commuting_graph, unital_subring_lattice, Mode};
use ringlab_core::verify::{half_negation_data, upper_triangular_data};
use ringlab_core::{Budget, IntPolynomial, Ring};

pub fn ring(spec: &str) -> Ring {
    parse_ring(spec, &Budget::default()).expect("bench specs are valid")
}

pub fn benchmarks(c: &mut Criterion) {
    let mut g = c.benchmark_group("graph");
    for spec in ["gf:2:6", "gf:2:8", "gf:3:4", "mat:gf:2:1:2", "prod:z:4,tri:gf:2:1:2"] {
        let r = ring(spec);
        g.bench_with_input(BenchmarkId::new("unital", spec), &r, |b, r| {
            b.iter(|| compressed_commuting_graph(black_box(r), Mode::Unital).unwrap())
        });
    }
    g.finish();

    // Fresh rule-backed ring each time so nothing is cached.
    c.bench_function("construct/gf:2:8", |b| b.iter(|| ring(black_box("gf:2:8"))));

    let m2 = compressed_commuting_graph(&ring("mat:gf:2:1:2"), Mode::Nonunital).unwrap();
    let perm: Vec<usize> = (0..m2.vertex_count()).rev().collect();
    let shuffled = m2.relabel(&perm);
    c.bench_function("isomorphic/m2", |b| b.iter(|| isomorphic(black_box(&m2), black_box(&shuffled))));

    let m2r = ring("mat:gf:2:1:2");
    c.bench_function("prop_iso/m2", |b| b.iter(|| check_prop_iso(black_box(&m2r), &Budget::default()).unwrap()));
    let gf64 = ring("gf:2:6");
    c.bench_function("lattice/gf:2:6", |b| b.iter(|| unital_subring_lattice(black_box(&gf64)).unwrap()));
    c.bench_function("localized/210", |b| b.iter(|| lambda1_localized(black_box(210)).unwrap()));

    let mut g = c.benchmark_group("lambda1");
    for (name, data) in [("halfneg", half_negation_data(&Budget::default())), ("t2", upper_triangular_data(&Budget::default()))] {
        let h = LocalizedSemidirect::new(data).unwrap();
        g.bench_function(name, |b| b.iter(|| h.lambda1(WitnessBounds::default())));
    }
    g.finish();

    let z12 = ring("z:12");
    let q = IntPolynomial::from_i64(&[7, 3, 2]);
    c.bench_function("integral/z12", |b| b.iter(|| monic_annihilator(black_box(&z12), 5, &q).unwrap()));
}
