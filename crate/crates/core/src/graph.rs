//! Metrized graphs: vertices `0..v`, an ordered edge list with exact lengths.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::circuit::ResistanceMatrix;
use crate::error::{Error, Result};
use crate::scalar::{format_scalar, is_positive, parse_scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: Scalar,
}

impl Edge {
    pub fn new(a: usize, b: usize, length: Scalar) -> Self {
        Edge { a, b, length }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// A connected metrized graph. Immutable once built; the resistance matrix
/// and tau are computed lazily and shared by clones.
#[derive(Clone)]
pub struct MetrizedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    pub(crate) resistance_cache: OnceLock<Arc<ResistanceMatrix>>,
    pub(crate) tau_cache: OnceLock<Scalar>,
}

impl PartialEq for MetrizedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for MetrizedGraph {}

impl fmt::Debug for MetrizedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetrizedGraph(v={}", self.vertex_count)?;
        for e in &self.edges {
            write!(f, ", {}-{}:{}", e.a, e.b, format_scalar(&e.length))?;
        }
        write!(f, ")")
    }
}

/// Validates and builds a connected graph. Edge order is preserved.
pub fn build_graph(vertex_count: usize, edge_list: Vec<(usize, usize, Scalar)>) -> Result<MetrizedGraph> {
    let edges = edge_list.into_iter().map(|(a, b, l)| Edge::new(a, b, l)).collect();
    MetrizedGraph::from_edges(vertex_count, edges)
}

impl MetrizedGraph {
    pub fn from_edges(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        for (i, e) in edges.iter().enumerate() {
            for v in [e.a, e.b] {
                if v >= vertex_count {
                    return Err(Error::BadVertexId { vertex: v, count: vertex_count });
                }
            }
            if !is_positive(&e.length) {
                return Err(Error::NonPositiveLength { edge: i });
            }
        }
        let g = MetrizedGraph { vertex_count, edges, resistance_cache: OnceLock::new(), tau_cache: OnceLock::new() };
        if !g.is_connected_without(None) {
            return Err(Error::DisconnectedGraph);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Result<&Edge> {
        self.edges.get(i).ok_or(Error::BadEdgeId(i))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::BadVertexId { vertex: v, count: self.vertex_count })
        }
    }

    pub fn total_length(&self) -> Scalar {
        self.edges.iter().fold(Scalar::zero(), |acc, e| acc + &e.length)
    }

    /// First Betti number `e - v + 1`.
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertex_count as i64 + 1
    }

    /// Number of edge ends at `v`; a self-loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.a == v) as usize + (e.b == v) as usize).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total_length().is_one()
    }

    pub fn has_equal_lengths(&self) -> bool {
        self.edges.windows(2).all(|w| w[0].length == w[1].length)
    }

    pub fn scale(&self, c: &Scalar) -> Result<MetrizedGraph> {
        if !is_positive(c) {
            return Err(Error::NonPositiveScale);
        }
        let edges = self.edges.iter().map(|e| Edge::new(e.a, e.b, &e.length * c)).collect();
        Ok(MetrizedGraph { vertex_count: self.vertex_count, edges, resistance_cache: OnceLock::new(), tau_cache: OnceLock::new() })
    }

    /// Rescales to total length 1.
    pub fn normalize(&self) -> MetrizedGraph {
        let c = self.total_length().recip();
        self.scale(&c).expect("total length is positive")
    }

    /// Inserts `x` as a vertex. Interior points split their edge: the first
    /// piece keeps the edge id, the second piece is appended at the end.
    pub fn insert_point(&self, x: &PointOnGraph) -> Result<(MetrizedGraph, usize)> {
        match x.canonical(self)? {
            PointOnGraph::Vertex(v) => Ok((self.clone(), v)),
            PointOnGraph::OnEdge { edge, offset } => {
                let e = &self.edges[edge];
                let w = self.vertex_count;
                let mut edges = self.edges.clone();
                let rest = &e.length - &offset;
                edges[edge] = Edge::new(e.a, w, offset);
                edges.push(Edge::new(w, e.b, rest));
                Ok((
                    MetrizedGraph { vertex_count: w + 1, edges, resistance_cache: OnceLock::new(), tau_cache: OnceLock::new() },
                    w,
                ))
            }
        }
    }

    /// Splits every edge into `m` equal pieces. Edge `i` becomes edges
    /// `i*m .. i*m+m` running from its endpoint A to endpoint B.
    pub fn subdivide_uniform(&self, m: usize) -> Result<MetrizedGraph> {
        if m < 1 {
            return Err(Error::BadM);
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let mut next = self.vertex_count;
        let mut edges = Vec::with_capacity(self.edges.len() * m);
        let piece_factor = Scalar::new(1.into(), (m as i64).into());
        for e in &self.edges {
            let piece = &e.length * &piece_factor;
            let mut prev = e.a;
            for k in 0..m {
                let to = if k + 1 == m {
                    e.b
                } else {
                    next += 1;
                    next - 1
                };
                edges.push(Edge::new(prev, to, piece.clone()));
                prev = to;
            }
        }
        Ok(MetrizedGraph { vertex_count: next, edges, resistance_cache: OnceLock::new(), tau_cache: OnceLock::new() })
    }

    /// Edges whose removal disconnects the graph. Self-loops are never bridges.
    pub fn bridges(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() && !self.is_connected_without(Some(i)) {
                out.push(i);
            }
        }
        out
    }

    pub fn is_bridgeless(&self) -> bool {
        self.bridges().is_empty()
    }

    pub fn is_tree(&self) -> bool {
        self.genus() == 0
    }

    /// Vertex set reachable from `start` when `skip` is removed.
    pub(crate) fn component_without(&self, start: usize, skip: Option<usize>) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    fn is_connected_without(&self, skip: Option<usize>) -> bool {
        self.component_without(0, skip).into_iter().all(|s| s)
    }

    /// Removes edge `i`. Fails when that disconnects the graph.
    pub fn without_edge(&self, i: usize) -> Result<MetrizedGraph> {
        self.edge(i)?;
        let mut edges = self.edges.clone();
        edges.remove(i);
        MetrizedGraph::from_edges(self.vertex_count, edges)
            .map_err(|e| if e == Error::DisconnectedGraph { Error::BridgeDeletion(i) } else { e })
    }

    /// Merges vertex `q` into `p` (the smaller id survives; ids above the
    /// removed one shift down). Returns the graph and the merged vertex id.
    pub fn identify_vertices(&self, p: usize, q: usize) -> Result<(MetrizedGraph, usize)> {
        self.check_vertex(p)?;
        self.check_vertex(q)?;
        if p == q {
            return Err(Error::SamePoint);
        }
        let (keep, gone) = (p.min(q), p.max(q));
        let relabel = |v: usize| match v.cmp(&gone) {
            std::cmp::Ordering::Less => v,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => v - 1,
        };
        let edges = self.edges.iter().map(|e| Edge::new(relabel(e.a), relabel(e.b), e.length.clone())).collect();
        Ok((MetrizedGraph::from_edges(self.vertex_count - 1, edges)?, keep))
    }

    /// Contracts edge `i` to a point (a self-loop is simply removed).
    pub fn contract_edge(&self, i: usize) -> Result<MetrizedGraph> {
        let e = self.edge(i)?.clone();
        let mut edges = self.edges.clone();
        edges.remove(i);
        let stripped = MetrizedGraph { vertex_count: self.vertex_count, edges, resistance_cache: OnceLock::new(), tau_cache: OnceLock::new() };
        if e.is_loop() {
            return Ok(MetrizedGraph::from_edges(stripped.vertex_count, stripped.edges)?);
        }
        // connectivity of `stripped` is irrelevant: merging the endpoints restores it
        let (keep, gone) = (e.a.min(e.b), e.a.max(e.b));
        let relabel = |v: usize| match v.cmp(&gone) {
            std::cmp::Ordering::Less => v,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => v - 1,
        };
        let edges = stripped
            .edges
            .iter()
            .map(|x| Edge::new(relabel(x.a), relabel(x.b), x.length.clone()))
            .collect();
        MetrizedGraph::from_edges(self.vertex_count - 1, edges)
    }

    pub fn with_edge(&self, p: usize, q: usize, length: Scalar) -> Result<MetrizedGraph> {
        let mut edges = self.edges.clone();
        edges.push(Edge::new(p, q, length));
        MetrizedGraph::from_edges(self.vertex_count, edges)
    }

    pub fn lengths(&self) -> Vec<Scalar> {
        self.edges.iter().map(|e| e.length.clone()).collect()
    }

    /// Same topology with new lengths (in edge order).
    pub fn with_lengths(&self, lengths: &[Scalar]) -> Result<MetrizedGraph> {
        if lengths.len() != self.edges.len() {
            return Err(Error::InvalidArgument("length vector size mismatch".into()));
        }
        let edges = self
            .edges
            .iter()
            .zip(lengths)
            .map(|(e, l)| Edge::new(e.a, e.b, l.clone()))
            .collect();
        MetrizedGraph::from_edges(self.vertex_count, edges)
    }

    /// Series-merges every valence-2 vertex not listed in `keep` whose two
    /// edge ends belong to distinct edges.
    pub fn simplify_valence2(&self, keep: &[usize]) -> MetrizedGraph {
        let mut n = self.vertex_count;
        let mut edges = self.edges.clone();
        loop {
            let mut target = None;
            for v in 0..n {
                if keep.contains(&v) {
                    continue;
                }
                let inc: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].a == v || edges[i].b == v).collect();
                if inc.len() == 2 && !edges[inc[0]].is_loop() && !edges[inc[1]].is_loop() {
                    target = Some((v, inc[0], inc[1]));
                    break;
                }
            }
            let Some((v, i, j)) = target else { break };
            let (ei, ej) = (edges[i].clone(), edges[j].clone());
            let merged = Edge::new(ei.other(v), ej.other(v), &ei.length + &ej.length);
            edges[i] = merged;
            edges.remove(j);
            for e in edges.iter_mut() {
                if e.a > v {
                    e.a -= 1;
                }
                if e.b > v {
                    e.b -= 1;
                }
            }
            n -= 1;
        }
        MetrizedGraph { vertex_count: n, edges, resistance_cache: OnceLock::new(), tau_cache: OnceLock::new() }
    }
}

/// A vertex, or a point on an edge at `offset` from its endpoint A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointOnGraph {
    Vertex(usize),
    OnEdge { edge: usize, offset: Scalar },
}

impl PointOnGraph {
    pub fn on_edge(edge: usize, offset: Scalar) -> Self {
        PointOnGraph::OnEdge { edge, offset }
    }

    /// Validates the point; offsets at an edge end become that vertex.
    pub fn canonical(&self, g: &MetrizedGraph) -> Result<PointOnGraph> {
        match self {
            PointOnGraph::Vertex(v) => {
                g.check_vertex(*v).map_err(|_| Error::BadPoint(format!("vertex {v} out of range")))?;
                Ok(self.clone())
            }
            PointOnGraph::OnEdge { edge, offset } => {
                let e = g.edges.get(*edge).ok_or_else(|| Error::BadPoint(format!("no edge {edge}")))?;
                if offset < &Scalar::zero() || offset > &e.length {
                    return Err(Error::BadPoint(format!("offset {} outside edge {edge}", format_scalar(offset))));
                }
                if offset.is_zero() {
                    Ok(PointOnGraph::Vertex(e.a))
                } else if offset == &e.length {
                    Ok(PointOnGraph::Vertex(e.b))
                } else {
                    Ok(self.clone())
                }
            }
        }
    }

    /// Parses `<vertex>` or `<edge>:<offset>`.
    pub fn parse(text: &str) -> std::result::Result<PointOnGraph, String> {
        match text.split_once(':') {
            Some((e, off)) => {
                let edge = e.trim().parse().map_err(|_| format!("bad edge id in `{text}`"))?;
                Ok(PointOnGraph::OnEdge { edge, offset: parse_scalar(off)? })
            }
            None => text.trim().parse().map(PointOnGraph::Vertex).map_err(|_| format!("bad vertex id `{text}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn segment() -> MetrizedGraph {
        build_graph(2, vec![(0, 1, int(1))]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(build_graph(3, vec![(0, 1, int(1)), (2, 2, int(1))]), Err(Error::DisconnectedGraph));
        assert_eq!(build_graph(2, vec![(0, 1, int(0))]), Err(Error::NonPositiveLength { edge: 0 }));
        assert_eq!(build_graph(2, vec![(0, 5, int(1))]), Err(Error::BadVertexId { vertex: 5, count: 2 }));
        let banana = build_graph(2, vec![(0, 1, ratio(1, 2)), (0, 1, ratio(1, 2))]).unwrap();
        assert_eq!(banana.total_length(), int(1));
    }

    #[test]
    fn genus_and_valence() {
        let circle = build_graph(1, vec![(0, 0, int(1))]).unwrap();
        assert_eq!(circle.genus(), 1);
        assert_eq!(circle.valence(0), 2);
        let tree = build_graph(5, vec![(0, 1, int(1)), (1, 2, int(1)), (1, 3, int(1)), (3, 4, int(1))]).unwrap();
        assert_eq!(tree.genus(), 0);
        assert_eq!(tree.bridges(), vec![0, 1, 2, 3]);
        assert!(circle.bridges().is_empty());
    }

    #[test]
    fn dumbbell_has_one_bridge() {
        let g = build_graph(
            6,
            vec![
                (0, 1, int(1)),
                (1, 2, int(1)),
                (2, 0, int(1)),
                (2, 3, int(1)),
                (3, 4, int(1)),
                (4, 5, int(1)),
                (5, 3, int(1)),
            ],
        )
        .unwrap();
        assert_eq!(g.bridges(), vec![3]);
    }

    #[test]
    fn insert_point_cases() {
        let (g, w) = segment().insert_point(&PointOnGraph::on_edge(0, ratio(1, 2))).unwrap();
        assert_eq!(w, 2);
        assert_eq!(g.lengths(), vec![ratio(1, 2), ratio(1, 2)]);
        let (g, w) = segment().insert_point(&PointOnGraph::on_edge(0, int(0))).unwrap();
        assert_eq!((g, w), (segment(), 0));
        let circle = build_graph(1, vec![(0, 0, int(1))]).unwrap();
        let (g, _) = circle.insert_point(&PointOnGraph::on_edge(0, ratio(1, 3))).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.lengths(), vec![ratio(1, 3), ratio(2, 3)]);
        assert!(segment().insert_point(&PointOnGraph::on_edge(0, int(2))).is_err());
    }

    #[test]
    fn subdivision_shapes() {
        let g = segment().subdivide_uniform(3).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.vertex_count(), 4);
        assert!(g.has_equal_lengths());
        assert_eq!(segment().subdivide_uniform(1).unwrap(), segment());
        assert_eq!(segment().subdivide_uniform(0), Err(Error::BadM));
        let circle = build_graph(1, vec![(0, 0, int(1))]).unwrap();
        assert_eq!(circle.subdivide_uniform(2).unwrap().lengths(), vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn structural_edits() {
        let tri = build_graph(3, vec![(0, 1, int(1)), (1, 2, int(2)), (2, 0, int(3))]).unwrap();
        let c = tri.contract_edge(0).unwrap();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_count(), 2);
        assert_eq!(tri.without_edge(0).unwrap().edge_count(), 2);
        let path = tri.without_edge(0).unwrap();
        assert_eq!(path.without_edge(0), Err(Error::BridgeDeletion(0)));
        let (id, v) = tri.identify_vertices(2, 1).unwrap();
        assert_eq!(v, 1);
        assert_eq!(id.genus(), 2);
        let s = path.simplify_valence2(&[]);
        assert_eq!(s.edge_count(), 1);
        assert_eq!(s.total_length(), int(5));
    }

    #[test]
    fn point_parsing() {
        assert_eq!(PointOnGraph::parse("3").unwrap(), PointOnGraph::Vertex(3));
        assert_eq!(PointOnGraph::parse("2:1/3").unwrap(), PointOnGraph::on_edge(2, ratio(1, 3)));
        assert!(PointOnGraph::parse("x").is_err());
    }

    fn arb_graph() -> impl Strategy<Value = MetrizedGraph> {
        (2usize..6, prop::collection::vec((0usize..6, 0usize..6, 1i64..9, 1i64..9), 0..6)).prop_map(|(n, extra)| {
            let mut edges: Vec<(usize, usize, Scalar)> = (1..n).map(|i| (i - 1, i, ratio(i as i64, 3))).collect();
            for (a, b, p, q) in extra {
                edges.push((a % n, b % n, ratio(p, q)));
            }
            build_graph(n, edges).unwrap()
        })
    }

    proptest! {
        #[test]
        fn scaling_multiplies_length(g in arb_graph(), p in 1i64..20, q in 1i64..20) {
            let c = ratio(p, q);
            prop_assert_eq!(g.scale(&c).unwrap().total_length(), c * g.total_length());
        }

        #[test]
        fn insertion_keeps_genus_and_length(g in arb_graph(), k in 1i64..7) {
            let (h, _) = g.insert_point(&PointOnGraph::on_edge(0, &g.edges()[0].length * ratio(k, 7))).unwrap();
            prop_assert_eq!(h.genus(), g.genus());
            prop_assert_eq!(h.total_length(), g.total_length());
        }

        #[test]
        fn subdivision_counts(g in arb_graph(), m in 1usize..5) {
            let h = g.subdivide_uniform(m).unwrap();
            prop_assert_eq!(h.edge_count(), m * g.edge_count());
            prop_assert_eq!(h.vertex_count(), g.vertex_count() + (m - 1) * g.edge_count());
            prop_assert_eq!(h.genus(), g.genus());
        }

        #[test]
        fn handshaking(g in arb_graph()) {
            let total: usize = (0..g.vertex_count()).map(|v| g.valence(v)).sum();
            prop_assert_eq!(total, 2 * g.edge_count());
        }
    }
}
