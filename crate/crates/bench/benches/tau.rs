use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mgt_bench::{corpus, necklaces, uncached};
use mgt_core::suite::{identity_catalog, GraphInstance};
use mgt_core::{apq_direct, tau, tau_via_integral, ResistanceMatrix};

fn tau_corpus(c: &mut Criterion) {
    let graphs = corpus(20);
    c.bench_function("tau_edge_sum/corpus20", |b| {
        b.iter(|| graphs.iter().map(|g| tau(&uncached(g))).count())
    });
    c.bench_function("tau_via_integral/corpus20", |b| {
        b.iter(|| graphs.iter().map(|g| tau_via_integral(&uncached(g), 0).unwrap()).count())
    });
    c.bench_function("resistance_matrix/corpus20", |b| {
        b.iter(|| graphs.iter().map(|g| ResistanceMatrix::compute(black_box(g)).size()).sum::<usize>())
    });
    c.bench_function("apq_direct/corpus20", |b| {
        b.iter(|| {
            graphs
                .iter()
                .map(|g| apq_direct(&uncached(g), 0, g.vertex_count() - 1).unwrap())
                .count()
        })
    });
}

fn tau_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("tau_necklace");
    group.sample_size(10);
    for (t, g) in necklaces(&[2, 8, 32]) {
        group.bench_with_input(BenchmarkId::from_parameter(t), &g, |b, g| b.iter(|| tau(&uncached(g))));
    }
    group.finish();
}

fn identity_suite(c: &mut Criterion) {
    let instances: Vec<GraphInstance> =
        corpus(5).into_iter().enumerate().map(|(i, g)| GraphInstance::standalone(g, format!("g{i}"))).collect();
    let mut group = c.benchmark_group("identity_suite");
    group.sample_size(10);
    group.bench_function("catalog/5graphs", |b| {
        b.iter(|| {
            instances
                .iter()
                .map(|inst| {
                    let fresh = GraphInstance::standalone(uncached(&inst.graph), inst.descriptor.clone());
                    identity_catalog().iter().map(|id| id.run(&fresh).len()).sum::<usize>()
                })
                .sum::<usize>()
        })
    });
    group.finish();
}

criterion_group!(benches, tau_corpus, tau_scaling, identity_suite);
criterion_main!(benches);
