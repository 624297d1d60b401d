//! Named graph families and random generators.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{build_graph, MetrizedGraph};
use crate::scalar::{int, ratio, Scalar};

/// Circle of length `l` as one vertex with a self-loop.
pub fn circle(l: &Scalar) -> MetrizedGraph {
    build_graph(1, vec![(0, 0, l.clone())]).unwrap()
}

/// Circle with two marked points `0`, `1` splitting it into arcs `a`, `b`.
pub fn circle_arcs(a: &Scalar, b: &Scalar) -> MetrizedGraph {
    build_graph(2, vec![(0, 1, a.clone()), (1, 0, b.clone())]).unwrap()
}

pub fn segment(l: &Scalar) -> MetrizedGraph {
    build_graph(2, vec![(0, 1, l.clone())]).unwrap()
}

/// Path `0 - 1 - ... - k` with the given lengths.
pub fn path(lengths: &[Scalar]) -> MetrizedGraph {
    build_graph(lengths.len() + 1, lengths.iter().enumerate().map(|(i, l)| (i, i + 1, l.clone())).collect()).unwrap()
}

/// `m` parallel edges of length `l` between vertices `0` and `1`.
pub fn banana(m: usize, l: &Scalar) -> MetrizedGraph {
    banana_lengths(&vec![l.clone(); m])
}

pub fn banana_lengths(lengths: &[Scalar]) -> MetrizedGraph {
    build_graph(2, lengths.iter().map(|l| (0, 1, l.clone())).collect()).unwrap()
}

/// Complete graph on `v` vertices, every edge of length `l`.
pub fn complete(v: usize, l: &Scalar) -> MetrizedGraph {
    let mut edges = Vec::new();
    for i in 0..v {
        for j in i + 1..v {
            edges.push((i, j, l.clone()));
        }
    }
    build_graph(v, edges).unwrap()
}

/// Diamond: poles `0` and `3`, side vertices `1`, `2`; edge 4 is the middle edge `1-2`.
pub fn diamond(l: &Scalar) -> MetrizedGraph {
    build_graph(
        4,
        vec![(0, 1, l.clone()), (0, 2, l.clone()), (1, 3, l.clone()), (2, 3, l.clone()), (1, 2, l.clone())],
    )
    .unwrap()
}

pub fn diamond_poles() -> (usize, usize) {
    (0, 3)
}

/// `t` diamonds with edge length `b`, joined in a ring by `t` edges of length `a`.
/// Diamond `k` uses vertices `4k..4k+4`; the `a`-edge leaving it is edge `6k+5`.
pub fn necklace(a: &Scalar, b: &Scalar, t: usize) -> MetrizedGraph {
    assert!(t >= 1);
    let mut edges = Vec::with_capacity(6 * t);
    for k in 0..t {
        let o = 4 * k;
        for (x, y) in [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)] {
            edges.push((o + x, o + y, b.clone()));
        }
        edges.push((o + 3, 4 * ((k + 1) % t), a.clone()));
    }
    build_graph(4 * t, edges).unwrap()
}

/// Normalized necklace: `b = (1 - a t) / (5 t)`.
pub fn necklace_normalized(a: &Scalar, t: usize) -> (Scalar, MetrizedGraph) {
    let t_s = int(t as i64);
    let b = (int(1) - a * &t_s) / (int(5) * &t_s);
    let g = necklace(a, &b, t);
    (b, g)
}

/// Two unit-style triangles joined by a bridge (edge 3).
pub fn dumbbell(l: &Scalar) -> MetrizedGraph {
    build_graph(
        6,
        vec![
            (0, 1, l.clone()),
            (1, 2, l.clone()),
            (2, 0, l.clone()),
            (2, 3, l.clone()),
            (3, 4, l.clone()),
            (4, 5, l.clone()),
            (5, 3, l.clone()),
        ],
    )
    .unwrap()
}

/// Theta graph: three parallel edges of the given lengths.
pub fn theta(a: &Scalar, b: &Scalar, c: &Scalar) -> MetrizedGraph {
    banana_lengths(&[a.clone(), b.clone(), c.clone()])
}

/// 3-cube skeleton (8 vertices, 12 edges) with the given lengths.
pub fn cube(lengths: &[Scalar]) -> MetrizedGraph {
    assert_eq!(lengths.len(), 12);
    let mut edges = Vec::new();
    for v in 0..8usize {
        for bit in [1, 2, 4] {
            if v & bit == 0 {
                edges.push((v, v | bit, lengths[edges.len()].clone()));
            }
        }
    }
    build_graph(8, edges).unwrap()
}

/// Random length `n/d` with `n, d` in `1..=16`.
pub fn random_length<R: Rng>(rng: &mut R) -> Scalar {
    LengthRange::default().draw(rng)
}

/// Lengths `n/d` with `1 <= n <= max_numerator`, `1 <= d <= max_denominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthRange {
    pub max_numerator: i64,
    pub max_denominator: i64,
}

impl Default for LengthRange {
    fn default() -> Self {
        LengthRange { max_numerator: 16, max_denominator: 16 }
    }
}

impl LengthRange {
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Scalar {
        ratio(rng.gen_range(1..=self.max_numerator.max(1)), rng.gen_range(1..=self.max_denominator.max(1)))
    }
}

/// Random connected multigraph: a random spanning tree plus extra edges
/// (parallel edges and self-loops allowed).
pub fn random_connected<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> MetrizedGraph {
    random_connected_in(rng, max_v, max_e, &LengthRange::default())
}

pub fn random_connected_in<R: Rng>(rng: &mut R, max_v: usize, max_e: usize, lengths: &LengthRange) -> MetrizedGraph {
    let v = rng.gen_range(2..=max_v.max(2));
    let mut edges = Vec::new();
    for i in 1..v {
        let parent = rng.gen_range(0..i);
        edges.push((parent, i, lengths.draw(rng)));
    }
    let room = max_e.saturating_sub(v - 1);
    let extra = rng.gen_range(0..=room);
    for _ in 0..extra {
        let a = rng.gen_range(0..v);
        let b = if rng.gen_bool(0.08) { a } else { rng.gen_range(0..v) };
        edges.push((a, b, lengths.draw(rng)));
    }
    build_graph(v, edges).unwrap()
}

pub fn random_connected_seeded(seed: u64, max_v: usize, max_e: usize) -> MetrizedGraph {
    random_connected(&mut ChaCha8Rng::seed_from_u64(seed), max_v, max_e)
}

/// Random tree on `v` vertices.
pub fn random_tree<R: Rng>(rng: &mut R, v: usize) -> MetrizedGraph {
    random_tree_in(rng, v, &LengthRange::default())
}

pub fn random_tree_in<R: Rng>(rng: &mut R, v: usize, lengths: &LengthRange) -> MetrizedGraph {
    let edges = (1..v).map(|i| (rng.gen_range(0..i), i, lengths.draw(rng))).collect();
    build_graph(v, edges).unwrap()
}

/// Closed-form tau of the complete graph with equal lengths and total length 1.
pub fn complete_tau_formula(v: usize) -> Scalar {
    let v = int(v as i64);
    let x = int(1) - int(2) / &v;
    &x * &x / int(12) + int(2) / (&v * &v * &v)
}

/// Closed-form tau of the equal-length `m`-banana of total length `l`.
pub fn banana_tau_formula(m: usize, l: &Scalar) -> Scalar {
    let m = int(m as i64);
    l * (&m * &m - int(2) * &m + int(4)) / (int(12) * &m * &m)
}

/// Closed-form tau of the necklace `Γ(a,b,t)`.
pub fn necklace_tau_formula(a: &Scalar, b: &Scalar, t: usize) -> Scalar {
    let t = int(t as i64);
    &t * (a + int(2) * b) / int(12) + b * b / (int(8) * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_shapes() {
        assert_eq!(complete(5, &int(1)).edge_count(), 10);
        assert_eq!(complete(5, &int(1)).genus(), 6);
        assert_eq!(diamond(&int(1)).total_length(), int(5));
        let n = necklace(&int(1), &int(1), 4);
        assert_eq!((n.vertex_count(), n.edge_count()), (16, 24));
        assert!((0..16).all(|v| n.valence(v) == 3));
        assert_eq!(cube(&vec![int(1); 12]).genus(), 5);
        let (b, g) = necklace_normalized(&ratio(1, 101), 100);
        assert_eq!(b, ratio(1, 50500));
        assert!(g.is_normalized());
        assert_eq!(necklace(&int(1), &int(2), 1).edge_count(), 6);
    }

    #[test]
    fn generator_is_deterministic() {
        let a = random_connected_seeded(9, 8, 16);
        let b = random_connected_seeded(9, 8, 16);
        assert_eq!(a, b);
        assert!(a.vertex_count() <= 8 && a.edge_count() <= 16);
    }

    #[test]
    fn closed_forms_at_known_points() {
        assert_eq!(complete_tau_formula(5), ratio(23, 500));
        assert_eq!(banana_tau_formula(4, &int(1)), ratio(1, 16));
    }
}
