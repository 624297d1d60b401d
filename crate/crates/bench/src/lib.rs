//! Fixed workloads shared by the benchmarks.

use mgt_core::families;
use mgt_core::suite::{Family, GraphGenerator};
use mgt_core::{ratio, MetrizedGraph};

/// Seeded random graphs of the size the identity suite uses.
pub fn corpus(count: usize) -> Vec<MetrizedGraph> {
    GraphGenerator::new(1, Family::RandomConnected).generate(count).into_iter().map(|i| i.graph).collect()
}

/// Necklaces with `t` diamonds, for scaling runs (`4t` vertices, `6t` edges).
pub fn necklaces(ts: &[usize]) -> Vec<(usize, MetrizedGraph)> {
    ts.iter().map(|&t| (t, families::necklace_normalized(&ratio(1, 101), t).1)).collect()
}

/// A graph with fresh caches, so every iteration pays the full cost.
pub fn uncached(g: &MetrizedGraph) -> MetrizedGraph {
    g.with_lengths(&g.lengths()).expect("same lengths are valid")
}
