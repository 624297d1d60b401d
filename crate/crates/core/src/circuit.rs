//! Effective resistance and voltage functions.
//!
//! Two engines: an exact weighted-Laplacian solve (`ResistanceMatrix`,
//! `resistance`) and a rewrite-rule reduction (`ReductionNetwork`). Each is
//! the other's oracle in the tests.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{MetrizedGraph, PointOnGraph};
use crate::linalg::{self, PatternInverse};
use crate::scalar::{format_scalar, ExtScalar, Scalar};

/// All pairwise resistances between vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResistanceMatrix {
    r: Vec<Vec<Scalar>>,
}

impl ResistanceMatrix {
    /// Solves the grounded Laplacian (ground = vertex 0, conductance `1/L`,
    /// self-loops ignored) and reads `r(x,y) = G_xx + G_yy - 2 G_xy`.
    pub fn compute(g: &MetrizedGraph) -> ResistanceMatrix {
        let n = g.vertex_count();
        if n == 1 {
            return ResistanceMatrix { r: vec![vec![Scalar::zero()]] };
        }
        let m = n - 1;
        let mut lap = vec![vec![Scalar::zero(); m]; m];
        for e in g.edges() {
            if e.is_loop() {
                continue;
            }
            let c = e.length.recip();
            let (a, b) = (e.a, e.b);
            if a > 0 {
                lap[a - 1][a - 1] += &c;
            }
            if b > 0 {
                lap[b - 1][b - 1] += &c;
            }
            if a > 0 && b > 0 {
                lap[a - 1][b - 1] -= &c;
                lap[b - 1][a - 1] -= &c;
            }
        }
        let green = linalg::inverse(&lap).expect("connected graph has nonsingular grounded Laplacian");
        let gv = |x: usize, y: usize| -> Scalar {
            if x == 0 || y == 0 {
                Scalar::zero()
            } else {
                green[x - 1][y - 1].clone()
            }
        };
        let mut r = vec![vec![Scalar::zero(); n]; n];
        for x in 0..n {
            for y in x + 1..n {
                let v = gv(x, x) + gv(y, y) - gv(x, y) * Scalar::from_integer(2.into());
                r[x][y] = v.clone();
                r[y][x] = v;
            }
        }
        ResistanceMatrix { r }
    }

    pub fn size(&self) -> usize {
        self.r.len()
    }

    pub fn get(&self, x: usize, y: usize) -> &Scalar {
        &self.r[x][y]
    }

    /// `j_x(y,z)` for vertices.
    pub fn voltage(&self, x: usize, y: usize, z: usize) -> Scalar {
        (&self.r[x][y] + &self.r[x][z] - &self.r[y][z]) / Scalar::from_integer(2.into())
    }

    /// `r(x,y)` for a point `x` anywhere and a vertex `y`, from the
    /// endpoint resistances of the edge holding `x`:
    /// `r = (1-s) r(a,y) + s r(b,y) + s(1-s)(L - r(a,b))`, `s = t/L`.
    pub fn point_to_vertex(&self, g: &MetrizedGraph, x: &PointOnGraph, y: usize) -> Scalar {
        match x {
            PointOnGraph::Vertex(v) => self.r[*v][y].clone(),
            PointOnGraph::OnEdge { edge, offset } => {
                let e = &g.edges()[*edge];
                let s = offset / &e.length;
                let one_minus = Scalar::one() - &s;
                &one_minus * &self.r[e.a][y] + &s * &self.r[e.b][y] + &s * &one_minus * (&e.length - &self.r[e.a][e.b])
            }
        }
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.r
    }
}

impl MetrizedGraph {
    /// Cached resistance matrix; computed once, then shared.
    pub fn resistance_matrix(&self) -> Arc<ResistanceMatrix> {
        self.resistance_cache.get_or_init(|| Arc::new(ResistanceMatrix::compute(self))).clone()
    }
}

/// Inserts several points as vertices, tracking edge splits so later points
/// on an already split edge land on the right piece.
pub fn insert_points(g: &MetrizedGraph, points: &[PointOnGraph]) -> Result<(MetrizedGraph, Vec<usize>)> {
    let mut cur = g.clone();
    // (original edge) -> list of (piece edge id, start offset) in the current graph
    let mut pieces: Vec<Vec<(usize, Scalar)>> = (0..g.edge_count()).map(|i| vec![(i, Scalar::zero())]).collect();
    let mut ids = Vec::with_capacity(points.len());
    for p in points {
        let p = p.canonical(g)?;
        let local = match &p {
            PointOnGraph::Vertex(v) => PointOnGraph::Vertex(*v),
            PointOnGraph::OnEdge { edge, offset } => {
                let list = &pieces[*edge];
                let (piece, start) = list
                    .iter()
                    .filter(|(_, s)| s <= offset)
                    .max_by(|x, y| x.1.cmp(&y.1))
                    .cloned()
                    .expect("offset 0 piece always present");
                PointOnGraph::on_edge(piece, offset - &start)
            }
        };
        let before = cur.edge_count();
        let (next, id) = cur.insert_point(&local)?;
        if next.edge_count() > before {
            if let PointOnGraph::OnEdge { edge, offset } = &p {
                pieces[*edge].push((before, offset.clone()));
            }
        }
        cur = next;
        ids.push(id);
    }
    Ok((cur, ids))
}

/// `r(x,y)` by inserting the points and solving the Laplacian.
pub fn resistance(g: &MetrizedGraph, x: &PointOnGraph, y: &PointOnGraph) -> Result<Scalar> {
    let (h, ids) = insert_points(g, &[x.clone(), y.clone()])?;
    Ok(h.resistance_matrix().get(ids[0], ids[1]).clone())
}

/// `j_x(y,z) = (r(x,y) + r(x,z) - r(y,z)) / 2`.
pub fn voltage(g: &MetrizedGraph, x: &PointOnGraph, y: &PointOnGraph, z: &PointOnGraph) -> Result<Scalar> {
    let (h, ids) = insert_points(g, &[x.clone(), y.clone(), z.clone()])?;
    Ok(h.resistance_matrix().voltage(ids[0], ids[1], ids[2]))
}

/// Resistances of edge `e_i = (p_i, q_i)` relative to base vertex `p`,
/// all measured in `Γ - e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeProfile {
    pub edge: usize,
    pub length: Scalar,
    pub r_i: ExtScalar,
    pub r_a: ExtScalar,
    pub r_b: ExtScalar,
    pub r_c: Scalar,
}

impl EdgeProfile {
    pub fn is_bridge(&self) -> bool {
        self.r_i.is_inf()
    }
}

/// Profile by literally deleting the edge and solving again.
pub fn edge_profile(g: &MetrizedGraph, edge: usize, p: usize) -> Result<EdgeProfile> {
    let e = g.edge(edge)?.clone();
    g.check_vertex(p)?;
    if e.is_loop() {
        return Ok(EdgeProfile {
            edge,
            length: e.length,
            r_i: ExtScalar::zero(),
            r_a: ExtScalar::zero(),
            r_b: ExtScalar::zero(),
            r_c: Scalar::zero(),
        });
    }
    match g.without_edge(edge) {
        Ok(h) => {
            let m = h.resistance_matrix();
            Ok(EdgeProfile {
                edge,
                length: e.length,
                r_i: m.get(e.a, e.b).clone().into(),
                r_a: m.voltage(e.a, p, e.b).into(),
                r_b: m.voltage(e.b, e.a, p).into(),
                r_c: m.voltage(p, e.a, e.b),
            })
        }
        Err(Error::BridgeDeletion(_)) => {
            let side_a = g.component_without(e.a, Some(edge));
            // resistance inside p's component, which is unchanged by the deletion
            let m = g.resistance_matrix();
            let (r_a, r_b, r_c) = if side_a[p] {
                (ExtScalar::zero(), ExtScalar::Inf, m.get(p, e.a).clone())
            } else {
                (ExtScalar::Inf, ExtScalar::zero(), m.get(p, e.b).clone())
            };
            Ok(EdgeProfile { edge, length: e.length, r_i: ExtScalar::Inf, r_a, r_b, r_c })
        }
        Err(other) => Err(other),
    }
}

/// All edge profiles from the single resistance matrix of `Γ`, using the
/// rank-one update for removing conductance `c = 1/L` between `a` and `b`:
/// `r'(x,y) = r(x,y) + c w(x,y)^2 / (1 - c r(a,b))`.
pub fn edge_profiles(g: &MetrizedGraph, p: usize) -> Result<Vec<EdgeProfile>> {
    g.check_vertex(p)?;
    let m = EdgeResistances::new(g, p);
    let two = Scalar::from_integer(2.into());
    let mut out = Vec::with_capacity(g.edge_count());
    for (i, e) in g.edges().iter().enumerate() {
        let l = &e.length;
        if e.is_loop() {
            out.push(EdgeProfile {
                edge: i,
                length: l.clone(),
                r_i: ExtScalar::zero(),
                r_a: ExtScalar::zero(),
                r_b: ExtScalar::zero(),
                r_c: Scalar::zero(),
            });
            continue;
        }
        let (a, b) = (e.a, e.b);
        let rab = m.get(a, b);
        if &rab == l {
            let on_a_side = m.get(p, b) == m.get(p, a) + l;
            let (r_a, r_b, r_c) = if on_a_side {
                (ExtScalar::zero(), ExtScalar::Inf, m.get(p, a))
            } else {
                (ExtScalar::Inf, ExtScalar::zero(), m.get(p, b))
            };
            out.push(EdgeProfile { edge: i, length: l.clone(), r_i: ExtScalar::Inf, r_a, r_b, r_c });
            continue;
        }
        let c = l.recip();
        let denom = Scalar::one() - &c * &rab;
        let factor = &c / &denom;
        let w = |x: usize, y: usize| (m.get(x, b) + m.get(y, a) - m.get(x, a) - m.get(y, b)) / &two;
        let upd = |x: usize, y: usize| {
            let wx = w(x, y);
            m.get(x, y) + &factor * &wx * &wx
        };
        let r_ab = upd(a, b);
        let r_ap = upd(a, p);
        let r_bp = upd(b, p);
        let r_a = (&r_ap + &r_ab - &r_bp) / &two;
        let r_b = (&r_ab + &r_bp - &r_ap) / &two;
        let r_c = (&r_ap + &r_bp - &r_ab) / &two;
        out.push(EdgeProfile { edge: i, length: l.clone(), r_i: r_ab.into(), r_a: r_a.into(), r_b: r_b.into(), r_c });
    }
    Ok(out)
}

/// Below this many vertices the full resistance matrix is computed and cached.
const DENSE_VERTEX_LIMIT: usize = 16;

/// Resistances `r(x, y)` where `x = y`, one of them is the base vertex, or
/// they are joined by an edge. Large graphs use the sparse inverse grounded at
/// the base vertex instead of the full matrix.
enum EdgeResistances {
    Dense(Arc<ResistanceMatrix>),
    Pattern { inverse: PatternInverse, ground: usize },
}

impl EdgeResistances {
    fn new(g: &MetrizedGraph, base: usize) -> Self {
        if let Some(m) = g.resistance_cache.get() {
            return EdgeResistances::Dense(m.clone());
        }
        if g.vertex_count() <= DENSE_VERTEX_LIMIT {
            return EdgeResistances::Dense(g.resistance_matrix());
        }
        let index = |v: usize| if v < base { v } else { v - 1 };
        let mut rows: Vec<HashMap<usize, Scalar>> = vec![HashMap::new(); g.vertex_count() - 1];
        for e in g.edges().iter().filter(|e| !e.is_loop()) {
            let c = e.length.recip();
            for (x, y) in [(e.a, e.b), (e.b, e.a)] {
                if x == base {
                    continue;
                }
                *rows[index(x)].entry(index(x)).or_insert_with(Scalar::zero) += &c;
                if y != base {
                    *rows[index(x)].entry(index(y)).or_insert_with(Scalar::zero) -= &c;
                }
            }
        }
        let inverse = PatternInverse::compute(&rows).expect("connected graph has nonsingular grounded Laplacian");
        EdgeResistances::Pattern { inverse, ground: base }
    }

    fn get(&self, x: usize, y: usize) -> Scalar {
        match self {
            EdgeResistances::Dense(m) => m.get(x, y).clone(),
            EdgeResistances::Pattern { inverse, ground } => {
                if x == y {
                    return Scalar::zero();
                }
                let z = |u: usize, v: usize| -> Scalar {
                    if u == *ground || v == *ground {
                        return Scalar::zero();
                    }
                    let i = |w: usize| if w < *ground { w } else { w - 1 };
                    inverse.get(i(u), i(v)).cloned().expect("pair on the factor pattern")
                };
                z(x, x) + z(y, y) - z(x, y) * Scalar::from(2)
            }
        }
    }
}

/// A resistor network being rewritten toward its terminals.
#[derive(Clone, Debug)]
pub struct ReductionNetwork {
    alive: Vec<bool>,
    edges: Vec<(usize, usize, Scalar)>,
    terminals: Vec<usize>,
    trace: Vec<String>,
}

impl ReductionNetwork {
    pub fn from_graph(g: &MetrizedGraph, terminals: &[usize]) -> Result<ReductionNetwork> {
        if terminals.is_empty() || terminals.len() > 3 {
            return Err(Error::InvalidArgument("between 1 and 3 terminals required".into()));
        }
        for &t in terminals {
            g.check_vertex(t)?;
        }
        let distinct: BTreeSet<_> = terminals.iter().collect();
        if distinct.len() != terminals.len() {
            return Err(Error::SamePoint);
        }
        let edges = g.edges().iter().map(|e| (e.a, e.b, e.length.clone())).collect();
        Ok(ReductionNetwork {
            alive: vec![true; g.vertex_count()],
            edges,
            terminals: terminals.to_vec(),
            trace: Vec::new(),
        })
    }

    pub fn edges(&self) -> &[(usize, usize, Scalar)] {
        &self.edges
    }

    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn live_nodes(&self) -> Vec<usize> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }

    fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].0 == v || self.edges[i].1 == v)
            .collect()
    }

    fn between(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| {
                let (a, b, _) = &self.edges[i];
                (*a == u && *b == v) || (*a == v && *b == u)
            })
            .collect()
    }

    fn check_eliminable(&self, v: usize) -> Result<()> {
        if v >= self.alive.len() || !self.alive[v] {
            return Err(Error::PatternMismatch(format!("node {v} not in network")));
        }
        if self.terminals.contains(&v) {
            return Err(Error::TerminalElimination(v));
        }
        Ok(())
    }

    fn remove_edges(&mut self, mut ids: Vec<usize>) {
        ids.sort_unstable();
        for i in ids.into_iter().rev() {
            self.edges.remove(i);
        }
    }

    /// Replaces the two edges at a degree-2 node by one edge `A + B`.
    pub fn reduce_series(mut self, middle: usize) -> Result<Self> {
        self.check_eliminable(middle)?;
        let inc = self.incident(middle);
        if inc.len() != 2 || inc.iter().any(|&i| self.edges[i].0 == self.edges[i].1) {
            return Err(Error::PatternMismatch(format!("node {middle} is not a series node")));
        }
        let (x, y) = (self.edges[inc[0]].clone(), self.edges[inc[1]].clone());
        let u = if x.0 == middle { x.1 } else { x.0 };
        let w = if y.0 == middle { y.1 } else { y.0 };
        let len = &x.2 + &y.2;
        self.trace.push(format!("series at {middle}: {} + {} = {}", format_scalar(&x.2), format_scalar(&y.2), format_scalar(&len)));
        self.remove_edges(inc);
        self.edges.push((u, w, len));
        self.alive[middle] = false;
        Ok(self)
    }

    /// Merges all edges between `u` and `v` into one of length `AB/(A+B)`.
    pub fn reduce_parallel(mut self, u: usize, v: usize) -> Result<Self> {
        let ids = self.between(u, v);
        if ids.len() < 2 || u == v {
            return Err(Error::PatternMismatch(format!("no parallel edges between {u} and {v}")));
        }
        let conductance: Scalar = ids.iter().map(|&i| self.edges[i].2.recip()).sum();
        let len = conductance.recip();
        self.trace.push(format!("parallel {u}-{v}: {} edges -> {}", ids.len(), format_scalar(&len)));
        self.remove_edges(ids);
        self.edges.push((u, v, len));
        Ok(self)
    }

    /// Replaces triangle `(x,y,z)` by a star with a new center node; the leg
    /// at a corner is the product of its two delta edges over their sum.
    pub fn delta_wye(mut self, tri: (usize, usize, usize)) -> Result<Self> {
        let (x, y, z) = tri;
        let xy = self.between(x, y);
        let yz = self.between(y, z);
        let zx = self.between(z, x);
        if xy.len() != 1 || yz.len() != 1 || zx.len() != 1 || x == y || y == z || x == z {
            return Err(Error::PatternMismatch(format!("no simple triangle on {x},{y},{z}")));
        }
        let (a, b, c) = (self.edges[xy[0]].2.clone(), self.edges[yz[0]].2.clone(), self.edges[zx[0]].2.clone());
        let sum = &a + &b + &c;
        let center = self.alive.len();
        self.alive.push(true);
        let legs = [(x, &a * &c / &sum), (y, &a * &b / &sum), (z, &b * &c / &sum)];
        self.trace.push(format!(
            "delta-wye on {x},{y},{z}: legs {}, {}, {}",
            format_scalar(&legs[0].1),
            format_scalar(&legs[1].1),
            format_scalar(&legs[2].1)
        ));
        self.remove_edges(vec![xy[0], yz[0], zx[0]]);
        for (v, l) in legs {
            self.edges.push((center, v, l));
        }
        Ok(self)
    }

    /// Replaces a degree-3 star center by the triangle on its neighbors.
    pub fn wye_delta(mut self, center: usize) -> Result<Self> {
        self.check_eliminable(center)?;
        let inc = self.incident(center);
        let nbrs: Vec<(usize, Scalar)> = inc
            .iter()
            .map(|&i| {
                let (a, b, l) = &self.edges[i];
                (if *a == center { *b } else { *a }, l.clone())
            })
            .collect();
        let distinct: BTreeSet<_> = nbrs.iter().map(|n| n.0).collect();
        if inc.len() != 3 || distinct.len() != 3 || distinct.contains(&center) {
            return Err(Error::PatternMismatch(format!("node {center} is not a wye center")));
        }
        let p = &nbrs[0].1 * &nbrs[1].1 + &nbrs[1].1 * &nbrs[2].1 + &nbrs[2].1 * &nbrs[0].1;
        self.trace.push(format!("wye-delta at {center}"));
        self.remove_edges(inc);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            self.edges.push((nbrs[i].0, nbrs[j].0, &p / &nbrs[k].1));
        }
        self.alive[center] = false;
        Ok(self)
    }

    /// Eliminates `center`: loops at it are dropped, parallel edges to it
    /// merged, then every neighbor pair gets `L_i L_j Σ 1/L_k`.
    pub fn star_mesh(mut self, center: usize) -> Result<Self> {
        self.check_eliminable(center)?;
        let loops: Vec<usize> = self.between(center, center);
        if !loops.is_empty() {
            self.remove_edges(loops);
        }
        let mut nbrs: Vec<usize> = self.incident(center).iter().map(|&i| {
            let (a, b, _) = &self.edges[i];
            if *a == center { *b } else { *a }
        }).collect();
        nbrs.sort_unstable();
        nbrs.dedup();
        for &n in &nbrs {
            if self.between(center, n).len() > 1 {
                self = self.reduce_parallel(center, n)?;
            }
        }
        let legs: Vec<(usize, Scalar)> = nbrs
            .iter()
            .map(|&n| (n, self.edges[self.between(center, n)[0]].2.clone()))
            .collect();
        let inv_sum: Scalar = legs.iter().map(|(_, l)| l.recip()).sum();
        self.trace.push(format!("star-mesh at {center}: degree {}", legs.len()));
        self.remove_edges(self.incident(center));
        for i in 0..legs.len() {
            for j in i + 1..legs.len() {
                self.edges.push((legs[i].0, legs[j].0, &legs[i].1 * &legs[j].1 * &inv_sum));
            }
        }
        self.alive[center] = false;
        Ok(self)
    }

    /// Drops self-loops and merges parallel edges.
    pub fn cleanup(mut self) -> Result<Self> {
        let loops: Vec<usize> = (0..self.edges.len()).filter(|&i| self.edges[i].0 == self.edges[i].1).collect();
        if !loops.is_empty() {
            self.trace.push(format!("discard {} self-loop(s)", loops.len()));
            self.remove_edges(loops);
        }
        loop {
            let mut pair = None;
            'outer: for i in 0..self.edges.len() {
                for j in i + 1..self.edges.len() {
                    let (a, b, _) = &self.edges[i];
                    let (c, d, _) = &self.edges[j];
                    if (a == c && b == d) || (a == d && b == c) {
                        pair = Some((*a, *b));
                        break 'outer;
                    }
                }
            }
            match pair {
                Some((u, v)) => self = self.reduce_parallel(u, v)?,
                None => break,
            }
        }
        Ok(self)
    }

    /// Resistance between two terminals of a fully reduced network.
    pub fn terminal_resistance(&self, x: usize, y: usize) -> Result<Scalar> {
        if x == y {
            return Ok(Scalar::zero());
        }
        let direct = self.between(x, y);
        if self.terminals.len() == 2 && direct.len() == 1 {
            return Ok(self.edges[direct[0]].2.clone());
        }
        if let Some(center) = self.center() {
            let leg = |v: usize| self.between(center, v).first().map(|&i| self.edges[i].2.clone());
            if let (Some(a), Some(b)) = (leg(x), leg(y)) {
                return Ok(a + b);
            }
        }
        Err(Error::ReductionStuck("network is not in canonical form".into()))
    }

    /// Center node of a reduced 3-terminal star, if present.
    pub fn center(&self) -> Option<usize> {
        self.live_nodes().into_iter().find(|v| !self.terminals.contains(v))
    }

    /// Legs `(terminal, length)` of the canonical 3-terminal star.
    pub fn legs(&self) -> Option<Vec<(usize, Scalar)>> {
        let c = self.center()?;
        self.terminals
            .iter()
            .map(|&t| self.between(c, t).first().map(|&i| (t, self.edges[i].2.clone())))
            .collect()
    }
}

/// Eliminates every non-terminal by star-mesh (lowest degree first, ties by
/// smallest id). Two terminals end as one edge; three end as a star.
pub fn reduce_to_terminals(g: &MetrizedGraph, terminals: &[usize]) -> Result<ReductionNetwork> {
    let mut net = ReductionNetwork::from_graph(g, terminals)?.cleanup()?;
    loop {
        let candidates: Vec<usize> = net
            .live_nodes()
            .into_iter()
            .filter(|v| !net.terminals.contains(v))
            .collect();
        let Some(&next) = candidates.iter().min_by_key(|&&v| (net.incident(v).len(), v)) else {
            break;
        };
        net = net.star_mesh(next)?.cleanup()?;
    }
    if net.terminals.len() == 3 {
        let (x, y, z) = (net.terminals[0], net.terminals[1], net.terminals[2]);
        let present = [net.between(x, y).len(), net.between(y, z).len(), net.between(z, x).len()];
        match present {
            [1, 1, 1] => net = net.delta_wye((x, y, z))?,
            _ => {
                // a missing side means the third terminal hangs off the corner joining the other two
                let corner = match present {
                    [1, 0, 1] => x,
                    [1, 1, 0] => y,
                    [0, 1, 1] => z,
                    _ => return Err(Error::ReductionStuck("terminals not connected".into())),
                };
                let center = net.alive.len();
                net.alive.push(true);
                let mut moved = Vec::new();
                for i in net.incident(corner) {
                    let (a, b, l) = net.edges[i].clone();
                    moved.push((if a == corner { b } else { a }, l));
                }
                net.remove_edges(net.incident(corner));
                for (v, l) in moved {
                    net.edges.push((center, v, l));
                }
                net.edges.push((center, corner, Scalar::zero()));
                net.trace.push(format!("open delta: star centered at terminal {corner}"));
            }
        }
    }
    let stuck = net.terminals.len() == 2 && net.edges.len() != 1;
    if stuck {
        return Err(Error::ReductionStuck("two terminals did not reduce to one edge".into()));
    }
    Ok(net)
}

/// `r(p,q)` for vertices via the reduction engine.
pub fn resistance_by_reduction(g: &MetrizedGraph, p: usize, q: usize) -> Result<Scalar> {
    if p == q {
        g.check_vertex(p)?;
        return Ok(Scalar::zero());
    }
    reduce_to_terminals(g, &[p, q])?.terminal_resistance(p, q)
}
