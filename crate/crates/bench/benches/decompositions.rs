use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kop_bench::{fixture, fixtures};
use kop_core::assemble::full_td;
use kop_core::msol::{evaluate, library_call, with_virtual_edges, Assignment, Value};
use kop_core::planarity::embed;
use kop_core::remember::{remember_report, synthesize_spanning_tree};
use kop_core::treedec::{td_3connected_kop, td_from_er_fr, td_from_vr_er};
use kop_core::{spanning_forest, stripping_layers, tutte_decomposition, validate};

fn planarity(c: &mut Criterion) {
    let mut group = c.benchmark_group("planarity");
    for f in fixtures() {
        let g = &f.instance.graph;
        group.bench_with_input(BenchmarkId::new("embed", &f.name), g, |b, g| {
            b.iter(|| embed(black_box(g)))
        });
        group.bench_with_input(BenchmarkId::new("stripping_layers", &f.name), g, |b, g| {
            b.iter(|| stripping_layers(black_box(g)))
        });
    }
    group.finish();
}

fn tree_decompositions(c: &mut Criterion) {
    let mut group = c.benchmark_group("treedec");
    for f in fixtures() {
        let g = &f.instance.graph;
        let t = spanning_forest(g, None);
        group.bench_function(BenchmarkId::new("vr_er", &f.name), |b| {
            b.iter(|| td_from_vr_er(black_box(g), &t))
        });
        group.bench_function(BenchmarkId::new("er_fr", &f.name), |b| {
            b.iter(|| td_from_er_fr(black_box(g), &t, &f.embedding))
        });
        group.bench_function(BenchmarkId::new("full", &f.name), |b| {
            b.iter(|| full_td(black_box(g), None))
        });
        let td = full_td(g, None).unwrap();
        group.bench_function(BenchmarkId::new("validate", &f.name), |b| {
            b.iter(|| validate(black_box(g), &td))
        });
        group.bench_function(BenchmarkId::new("remember_report", &f.name), |b| {
            b.iter(|| remember_report(black_box(g), &t, Some(&f.embedding)))
        });
    }
    group.finish();
}

fn three_connected(c: &mut Criterion) {
    let mut group = c.benchmark_group("three_connected");
    let g = kop_core::generate::cube_graph();
    let emb = embed(&g).unwrap();
    group.bench_function("synthesize_tree/cube", |b| {
        b.iter(|| synthesize_spanning_tree(black_box(&g), 2, &emb))
    });
    group.bench_function("td_3connected_kop/cube", |b| {
        b.iter(|| td_3connected_kop(black_box(&g), 2))
    });
    let f = fixture(20, 2, 3);
    group.bench_function("tutte/n20_k2", |b| {
        b.iter(|| tutte_decomposition(black_box(&f.instance.graph)))
    });
    group.finish();
}

fn msol(c: &mut Criterion) {
    let mut group = c.benchmark_group("msol");
    group.sample_size(10);
    for n in [6, 8, 10] {
        let f = fixture(n, 1, 5);
        let g = &f.instance.graph;
        let s = with_virtual_edges(g, &[]).unwrap();
        let formula = library_call("Conn").unwrap();
        let a = Assignment::new()
            .with("X", Value::vertex_set(g.vertices().iter().copied()))
            .with("EA", Value::edge_set(g.edges().iter().copied()));
        group.bench_function(BenchmarkId::new("conn", n), |b| {
            b.iter(|| evaluate(&s, &formula, black_box(&a)))
        });
    }
    group.finish();
}

criterion_group!(benches, planarity, tree_decompositions, three_connected, msol);
criterion_main!(benches);
