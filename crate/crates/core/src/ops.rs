//! Graph operations that transform tau, each with its predicted tau.

use num_traits::{One, Zero};

use crate::circuit::edge_profiles;
use crate::error::{Error, Result};
use crate::graph::{Edge, MetrizedGraph};
use crate::integration::apq_direct;
use crate::scalar::{int, ratio, Scalar};
use crate::tau::{length_share, tau};

#[derive(Clone, Debug)]
pub struct OpResult {
    /// The constructed graph (normalized for `immerse` and `c_tower`).
    pub graph: MetrizedGraph,
    pub predicted_tau: Option<Scalar>,
    pub formula_id: &'static str,
    /// The graph before normalization, when the operation normalizes.
    pub unnormalized: Option<MetrizedGraph>,
    /// Side quantities the formula also predicts (e.g. `A` of a union).
    pub extras: Vec<(String, Scalar)>,
}

impl OpResult {
    fn new(graph: MetrizedGraph, formula_id: &'static str, predicted: Result<Scalar>) -> Self {
        OpResult { graph, predicted_tau: predicted.ok(), formula_id, unnormalized: None, extras: Vec::new() }
    }

    pub fn extra(&self, name: &str) -> Option<&Scalar> {
        self.extras.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// `Some(true)` when the prediction equals the direct tau.
    pub fn prediction_holds(&self) -> Option<bool> {
        self.predicted_tau.as_ref().map(|p| *p == tau(&self.graph))
    }
}

/// Incrementally glues graphs onto a growing vertex set.
pub(crate) struct Assembler {
    n: usize,
    edges: Vec<Edge>,
}

impl Assembler {
    pub(crate) fn from_graph(g: &MetrizedGraph) -> Self {
        Assembler { n: g.vertex_count(), edges: g.edges().to_vec() }
    }

    pub(crate) fn vertices(n: usize) -> Self {
        Assembler { n, edges: Vec::new() }
    }

    /// Adds a copy of `h` scaled by `c`, with `fixed` pairs `(h vertex,
    /// existing vertex)` glued; other vertices of `h` get new ids in order.
    pub(crate) fn attach(&mut self, h: &MetrizedGraph, c: &Scalar, fixed: &[(usize, usize)]) -> Vec<usize> {
        let mut map = vec![usize::MAX; h.vertex_count()];
        for &(x, y) in fixed {
            map[x] = y;
        }
        for slot in map.iter_mut() {
            if *slot == usize::MAX {
                *slot = self.n;
                self.n += 1;
            }
        }
        for e in h.edges() {
            self.edges.push(Edge::new(map[e.a], map[e.b], &e.length * c));
        }
        map
    }

    pub(crate) fn finish(self) -> Result<MetrizedGraph> {
        MetrizedGraph::from_edges(self.n, self.edges)
    }
}

/// `Σ L_i^2/(L_i + R_i)` with bridges contributing 0.
pub fn sum_l2_over_lr(g: &MetrizedGraph) -> Scalar {
    edge_profiles(g, 0)
        .expect("vertex 0 exists")
        .iter()
        .map(|pr| &pr.length * length_share(pr))
        .sum()
}

/// `Γ - e_i`, predicted `τ(Γ) - L/12 + R/6 - A_{Γ-e}/(L+R)`.
pub fn delete_edge(g: &MetrizedGraph, edge: usize) -> Result<OpResult> {
    let e = g.edge(edge)?.clone();
    let h = g.without_edge(edge)?;
    let predicted = (|| {
        let l = &e.length;
        if e.is_loop() {
            return Ok(tau(g) - l / int(12));
        }
        let r = h.resistance_matrix().get(e.a, e.b).clone();
        let a = apq_direct(&h, e.a, e.b)?;
        Ok(tau(g) - l / int(12) + &r / int(6) - a / (l + &r))
    })();
    Ok(OpResult::new(h, "cor2twopunion", predicted))
}

/// Contracts edge `i`. Bridges drop `L/4`, loops `L/12`, other edges follow
/// `τ(Γ) - L/12 + L A/(R(L+R))` with `R`, `A` taken in `Γ - e_i`.
pub fn contract_edge(g: &MetrizedGraph, edge: usize) -> Result<OpResult> {
    let e = g.edge(edge)?.clone();
    let out = g.contract_edge(edge)?;
    let l = e.length.clone();
    if e.is_loop() {
        return Ok(OpResult::new(out, "lemcontract2", Ok(tau(g) - &l / int(12))));
    }
    match g.without_edge(edge) {
        Err(Error::BridgeDeletion(_)) => Ok(OpResult::new(out, "coradd", Ok(tau(g) - &l / int(4)))),
        Err(other) => Err(other),
        Ok(h) => {
            let predicted = (|| {
                let r = h.resistance_matrix().get(e.a, e.b).clone();
                let a = apq_direct(&h, e.a, e.b)?;
                Ok(tau(g) - &l / int(12) + &l * a / (&r * (&l + &r)))
            })();
            Ok(OpResult::new(out, "lemcontract2", predicted))
        }
    }
}

/// `Γ_pq`, predicted `τ - r/6 + A/r`. The merged vertex keeps the smaller id.
pub fn identify_points(g: &MetrizedGraph, p: usize, q: usize) -> Result<OpResult> {
    let (out, _) = g.identify_vertices(p, q)?;
    let predicted = (|| {
        let r = g.resistance_matrix().get(p, q).clone();
        Ok(tau(g) - &r / int(6) + apq_direct(g, p, q)? / &r)
    })();
    Ok(OpResult::new(out, "coradding2", predicted))
}

/// `Γ_(p,q)`, predicted `τ + L/12 - r/6 + A/(L + r)`.
pub fn add_edge(g: &MetrizedGraph, p: usize, q: usize, length: &Scalar) -> Result<OpResult> {
    if length <= &Scalar::zero() {
        return Err(Error::NonPositiveLength { edge: g.edge_count() });
    }
    let out = g.with_edge(p, q, length.clone())?;
    let predicted = (|| {
        let r = g.resistance_matrix().get(p, q).clone();
        let a = apq_direct(g, p, q)?;
        Ok(tau(g) + length / int(12) - &r / int(6) + a / (length + &r))
    })();
    Ok(OpResult::new(out, "coradding1", predicted))
}

/// Wedge of `g1` and `g2` with `p2` glued to `p1`; predicted `τ1 + τ2`.
pub fn union_one_point(g1: &MetrizedGraph, p1: usize, g2: &MetrizedGraph, p2: usize) -> Result<OpResult> {
    g1.check_vertex(p1)?;
    g2.check_vertex(p2)?;
    let mut asm = Assembler::from_graph(g1);
    asm.attach(g2, &Scalar::one(), &[(p2, p1)]);
    let out = asm.finish()?;
    Ok(OpResult::new(out, "additive", Ok(tau(g1) + tau(g2))))
}

/// Vertex of the wedge that `v` of `g2` became.
pub fn wedge_vertex(g1: &MetrizedGraph, p2: usize, v: usize) -> Option<usize> {
    match v.cmp(&p2) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some(g1.vertex_count() + v),
        std::cmp::Ordering::Greater => Some(g1.vertex_count() + v - 1),
    }
}

/// Union along two points, `p2 ~ p1` and `q2 ~ q1`. Predicts
/// `τ1 + τ2 - (r1+r2)/6 + (A1+A2)/(r1+r2)` and, as extra `A_pq`,
/// `(r2^2 A1 + r1^2 A2)/(r1+r2)^2 + (r1 r2/(r1+r2))^2/6`.
pub fn union_two_points(
    g1: &MetrizedGraph,
    g2: &MetrizedGraph,
    (p1, p2): (usize, usize),
    (q1, q2): (usize, usize),
) -> Result<OpResult> {
    g1.check_vertex(p1)?;
    g1.check_vertex(q1)?;
    g2.check_vertex(p2)?;
    g2.check_vertex(q2)?;
    if p1 == q1 || p2 == q2 {
        return Err(Error::SamePoint);
    }
    let mut asm = Assembler::from_graph(g1);
    asm.attach(g2, &Scalar::one(), &[(p2, p1), (q2, q1)]);
    let out = asm.finish()?;
    let r1 = g1.resistance_matrix().get(p1, q1).clone();
    let r2 = g2.resistance_matrix().get(p2, q2).clone();
    let a = (|| Ok((apq_direct(g1, p1, q1)?, apq_direct(g2, p2, q2)?)))();
    let mut res = OpResult::new(
        out,
        "thmtwopunion",
        a.clone().map(|(a1, a2)| tau(g1) + tau(g2) - (&r1 + &r2) / int(6) + (a1 + a2) / (&r1 + &r2)),
    );
    if let Ok((a1, a2)) = a {
        let s = &r1 + &r2;
        let h = &r1 * &r2 / &s;
        res.extras.push(("A_pq".into(), (&r2 * &r2 * a1 + &r1 * &r1 * a2) / (&s * &s) + &h * &h / int(6)));
    }
    Ok(res)
}

/// `Γ^{DA,n}`: each edge becomes `n` parallel edges of length `L/n`
/// (edge `i` becomes edges `i*n .. i*n+n`). Predicted
/// `τ/n^2 + (ℓ/12)((n-1)/n)^2 + ((n-1)/(6n^2)) Σ L^2/(L+R)`.
pub fn da_n(g: &MetrizedGraph, n: usize) -> Result<OpResult> {
    if n < 1 {
        return Err(Error::BadN);
    }
    let nn = int(n as i64);
    let mut edges = Vec::with_capacity(g.edge_count() * n);
    for e in g.edges() {
        for _ in 0..n {
            edges.push(Edge::new(e.a, e.b, &e.length / &nn));
        }
    }
    let out = MetrizedGraph::from_edges(g.vertex_count(), edges)?;
    let k = (&nn - int(1)) / &nn;
    let predicted = tau(g) / (&nn * &nn) + g.total_length() / int(12) * &k * &k
        + (&nn - int(1)) / (int(6) * &nn * &nn) * sum_l2_over_lr(g);
    Ok(OpResult::new(out, "thmdouble", Ok(predicted)))
}

/// `Γ^m`, tau unchanged.
pub fn subdivide(g: &MetrizedGraph, m: usize) -> Result<OpResult> {
    Ok(OpResult::new(g.subdivide_uniform(m)?, "valence", Ok(tau(g))))
}

/// Series-merges valence-2 vertices, tau unchanged.
pub fn simplify_valence2(g: &MetrizedGraph, keep: &[usize]) -> OpResult {
    OpResult::new(g.simplify_valence2(keep), "valence", Ok(tau(g)))
}

/// A marked graph `(β, p, q)` to immerse along one edge.
#[derive(Clone, Debug)]
pub struct Factor {
    pub graph: MetrizedGraph,
    pub p: usize,
    pub q: usize,
}

impl Factor {
    pub fn new(graph: MetrizedGraph, p: usize, q: usize) -> Self {
        Factor { graph, p, q }
    }
}

/// Full immersion: edge `i = (a, b)` of normalized `g` is replaced by
/// `β^i` scaled by `L_i / r_{β^i}(p_i, q_i)` with `p_i ~ a`, `q_i ~ b`.
/// Returns the normalized result; predicted by the general immersion formula.
pub fn immerse(g: &MetrizedGraph, betas: &[Factor]) -> Result<OpResult> {
    if !g.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if betas.len() != g.edge_count() {
        return Err(Error::ArityMismatch { expected: g.edge_count(), got: betas.len() });
    }
    for f in betas {
        f.graph.check_vertex(f.p)?;
        f.graph.check_vertex(f.q)?;
        if f.p == f.q {
            return Err(Error::SamePoint);
        }
        if !f.graph.is_normalized() {
            return Err(Error::NotNormalized);
        }
    }
    let mut asm = Assembler::vertices(g.vertex_count());
    let mut weight = Scalar::zero();
    for (e, f) in g.edges().iter().zip(betas) {
        let r = f.graph.resistance_matrix().get(f.p, f.q).clone();
        let c = &e.length / &r;
        weight += &c;
        asm.attach(&f.graph, &c, &[(f.p, e.a), (f.q, e.b)]);
    }
    let raw = asm.finish()?;
    let normalized = raw.scale(&weight.recip())?;
    let predicted = (|| {
        let profiles = edge_profiles(g, 0)?;
        let mut rhs = tau(g) - ratio(1, 4);
        for (pr, f) in profiles.iter().zip(betas) {
            let r = f.graph.resistance_matrix().get(f.p, f.q).clone();
            let a = apq_direct(&f.graph, f.p, f.q)?;
            let l = &pr.length;
            rhs += l * tau(&f.graph) / &r;
            rhs += l * length_share(pr) * a / (&r * &r);
        }
        Ok(rhs / &weight)
    })();
    let mut res = OpResult::new(normalized, "thmmaggen", predicted);
    res.unnormalized = Some(raw);
    res.extras.push(("weight".into(), weight));
    Ok(res)
}

/// `immerse` after normalizing every input; the scale factors used are
/// recorded as extras `scale_base` and `scale_<i>`.
pub fn immerse_normalizing(g: &MetrizedGraph, betas: &[Factor]) -> Result<OpResult> {
    let gn = g.normalize();
    let bn: Vec<Factor> = betas.iter().map(|f| Factor::new(f.graph.normalize(), f.p, f.q)).collect();
    let mut res = immerse(&gn, &bn)?;
    res.extras.push(("scale_base".into(), g.total_length().recip()));
    for (i, f) in betas.iter().enumerate() {
        res.extras.push((format!("scale_{i}"), f.graph.total_length().recip()));
    }
    Ok(res)
}

/// Normalized union of `2^n` copies of normalized `g` along `p`, `q`.
/// Predicted `τ + (1 - 2^-n) A/r + (-1/6 - 1/(6·2^n) + 1/(3·4^n)) r`.
pub fn c_tower(g: &MetrizedGraph, p: usize, q: usize, n: u32) -> Result<OpResult> {
    if !g.is_normalized() {
        return Err(Error::NotNormalized);
    }
    g.check_vertex(p)?;
    g.check_vertex(q)?;
    if p == q {
        return Err(Error::SamePoint);
    }
    let copies = 1usize << n;
    let mut asm = Assembler::from_graph(g);
    for _ in 1..copies {
        asm.attach(g, &Scalar::one(), &[(p, p), (q, q)]);
    }
    let raw = asm.finish()?;
    let normalized = raw.normalize();
    let predicted = (|| {
        let r = g.resistance_matrix().get(p, q).clone();
        let a = apq_direct(g, p, q)?;
        let two_n = int(copies as i64);
        let four_n = &two_n * &two_n;
        let coeff_r = ratio(-1, 6) - (int(6) * &two_n).recip() + (int(3) * four_n).recip();
        Ok(tau(g) + (int(1) - two_n.recip()) * a / &r + coeff_r * r)
    })();
    let mut res = OpResult::new(normalized, "thm-twopunion2-tower", predicted);
    res.unnormalized = Some(raw);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use proptest::prelude::*;

    fn holds(r: &OpResult) {
        assert_eq!(r.prediction_holds(), Some(true), "{} on {:?}", r.formula_id, r.graph);
    }

    #[test]
    fn delete_examples() {
        let (a, b) = (ratio(1, 3), ratio(1, 2));
        let r = delete_edge(&families::circle_arcs(&a, &b), 0).unwrap();
        holds(&r);
        assert_eq!(tau(&r.graph), &b / int(4));
        holds(&delete_edge(&families::diamond(&int(1)), 4).unwrap());
        holds(&delete_edge(&families::complete(4, &int(1)), 2).unwrap());
        assert_eq!(delete_edge(&families::segment(&int(1)), 0).unwrap_err(), Error::BridgeDeletion(0));
    }

    #[test]
    fn contract_examples() {
        let r = contract_edge(&families::circle_arcs(&int(1), &int(2)), 0).unwrap();
        holds(&r);
        assert_eq!(tau(&r.graph), ratio(2, 12));
        let t = families::path(&[int(1), int(3)]);
        let r = contract_edge(&t, 1).unwrap();
        assert_eq!(r.formula_id, "coradd");
        holds(&r);
        holds(&contract_edge(&families::complete(4, &int(1)), 0).unwrap());
        holds(&contract_edge(&families::circle(&int(1)), 0).unwrap());
    }

    #[test]
    fn identify_and_add_examples() {
        let r = identify_points(&families::banana(3, &int(1)), 0, 1).unwrap();
        holds(&r);
        assert_eq!(tau(&r.graph), ratio(3, 12));
        let r = identify_points(&families::segment(&int(1)), 0, 1).unwrap();
        assert_eq!(r.predicted_tau, Some(ratio(1, 12)));
        let r = add_edge(&families::segment(&int(1)), 0, 1, &int(2)).unwrap();
        assert_eq!(r.predicted_tau, Some(ratio(3, 12)));
        holds(&add_edge(&families::circle_arcs(&int(1), &int(2)), 0, 1, &int(1)).unwrap());
        let r = add_edge(&families::banana(3, &int(1)), 0, 1, &int(1)).unwrap();
        holds(&r);
        assert_eq!(tau(&r.graph), families::banana_tau_formula(4, &int(4)));
        assert!(add_edge(&families::segment(&int(1)), 0, 1, &int(0)).is_err());
    }

    #[test]
    fn union_examples() {
        let c = families::circle(&int(1));
        let r = union_one_point(&c, 0, &c, 0).unwrap();
        assert_eq!(tau(&r.graph), ratio(1, 6));
        holds(&union_one_point(&c, 0, &families::segment(&int(2)), 1).unwrap());
        let (a, b) = (families::segment(&int(1)), families::segment(&int(2)));
        let r = union_two_points(&a, &b, (0, 0), (1, 1)).unwrap();
        assert_eq!(r.predicted_tau, Some(ratio(3, 12)));
        holds(&r);
        let k4 = families::complete(4, &ratio(1, 6));
        let r = union_two_points(&k4, &k4, (0, 0), (1, 1)).unwrap();
        holds(&r);
        assert_eq!(r.extra("A_pq").unwrap(), &apq_direct(&r.graph, 0, 1).unwrap());
        assert_eq!(union_two_points(&k4, &k4, (0, 0), (0, 0)).unwrap_err(), Error::SamePoint);
    }

    #[test]
    fn da_n_examples() {
        for n in 1..=5 {
            let r = da_n(&families::segment(&int(1)), n).unwrap();
            holds(&r);
            assert_eq!(tau(&r.graph), families::banana_tau_formula(n, &int(1)));
        }
        let c = families::circle_arcs(&ratio(1, 4), &ratio(3, 4));
        assert_eq!(da_n(&c, 1).unwrap().graph, c);
        holds(&da_n(&c, 2).unwrap());
        assert_eq!(da_n(&c, 0).unwrap_err(), Error::BadN);
    }

    #[test]
    fn immersion_with_bananas_is_da_n() {
        let g = families::complete(4, &ratio(1, 6));
        for n in 2..=3 {
            let beta = Factor::new(families::banana(n, &ratio(1, n as i64)), 0, 1);
            let r = immerse(&g, &vec![beta; 6]).unwrap();
            holds(&r);
            assert_eq!(tau(&r.graph), tau(&da_n(&g, n).unwrap().graph));
        }
    }

    #[test]
    fn immersion_of_segments_rescales() {
        let g = families::circle_arcs(&ratio(1, 3), &ratio(2, 3));
        let seg = Factor::new(families::segment(&int(1)), 0, 1);
        let r = immerse(&g, &[seg.clone(), seg]).unwrap();
        holds(&r);
        assert_eq!(tau(&r.graph), tau(&g));
        assert_eq!(immerse(&families::circle(&int(2)), &[]).unwrap_err(), Error::NotNormalized);
    }

    #[test]
    fn tower_examples() {
        let g = families::circle_arcs(&ratio(1, 3), &ratio(2, 3));
        let one = c_tower(&g, 0, 1, 1).unwrap();
        holds(&one);
        let two = c_tower(&g, 0, 1, 2).unwrap();
        holds(&two);
        let r = g.resistance_matrix().get(0, 1).clone();
        let a = apq_direct(&g, 0, 1).unwrap();
        assert_eq!(two.predicted_tau.unwrap(), tau(&g) + ratio(3, 4) * a / &r - ratio(3, 16) * r);
        let u = union_two_points(&g, &g, (0, 0), (1, 1)).unwrap();
        assert_eq!(tau(&one.graph), tau(&u.graph) / int(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn predictions_close(seed in any::<u64>(), pick in 0usize..1000) {
            let g = families::random_connected_seeded(seed, 5, 8);
            let i = pick % g.edge_count();
            let (p, q) = (pick % g.vertex_count(), (pick / 7) % g.vertex_count());
            if !g.bridges().contains(&i) {
                prop_assert_eq!(delete_edge(&g, i).unwrap().prediction_holds(), Some(true));
            }
            prop_assert_eq!(contract_edge(&g, i).unwrap().prediction_holds(), Some(true));
            prop_assert_eq!(add_edge(&g, p, q, &ratio(3, 7)).unwrap().prediction_holds(), Some(true));
            if p != q {
                prop_assert_eq!(identify_points(&g, p, q).unwrap().prediction_holds(), Some(true));
                let gn = g.normalize();
                prop_assert_eq!(c_tower(&gn, p, q, 1).unwrap().prediction_holds(), Some(true));
            }
            prop_assert_eq!(da_n(&g, 2).unwrap().prediction_holds(), Some(true));
        }

        #[test]
        fn immersion_ignores_endpoint_labels(seed in any::<u64>(), flip in 0usize..64) {
            let g = families::random_connected_seeded(seed, 4, 5).normalize();
            let beta = families::circle_arcs(&ratio(1, 3), &ratio(2, 3));
            let straight: Vec<Factor> = (0..g.edge_count()).map(|_| Factor::new(beta.clone(), 0, 1)).collect();
            let flipped: Vec<Factor> = (0..g.edge_count())
                .map(|i| if flip >> i & 1 == 1 { Factor::new(beta.clone(), 1, 0) } else { Factor::new(beta.clone(), 0, 1) })
                .collect();
            let a = immerse(&g, &straight).unwrap();
            prop_assert_eq!(a.prediction_holds(), Some(true));
            prop_assert_eq!(tau(&a.graph), tau(&immerse(&g, &flipped).unwrap().graph));
        }
    }
}
