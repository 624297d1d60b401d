//! Exact verification harness: a catalog of identities and bounds, each
//! evaluated on generated graph instances.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::check::{CheckResult, Relation};
use crate::circuit::{edge_profile, edge_profiles, resistance, voltage};
use crate::error::{Error, Result};
use crate::families::{self, LengthRange};
use crate::graph::{MetrizedGraph, PointOnGraph};
use crate::integration::{apq_direct, integrate_product, tau_via_integral, FnTag, Term};
use crate::ops::{self, Factor, OpResult};
use crate::optimizer;
use crate::scalar::{int, ratio, Scalar};
use crate::tau::{
    apq_identity, canonical_measure, deleted_edge_data, genus_identity_check, lem2term_sides, length_share,
    lower_bound_suite, resistance_share, tau, tau_bridgeless_identity, tau_edge_sum, tau_gradient, two_term,
};

/// Largest graph (in edges) the suite will build for a derived construction.
pub const CONSTRUCTION_EDGE_CAP: usize = 160;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    RandomConnected,
    Complete,
    Banana,
    CircleSubdivided,
    DiamondNecklace,
    Tree,
    Theta,
    CubeLike,
    /// Cycles through all the others by instance index.
    Mixed,
}

impl Family {
    pub const STRUCTURED: [Family; 8] = [
        Family::RandomConnected,
        Family::Complete,
        Family::Banana,
        Family::CircleSubdivided,
        Family::DiamondNecklace,
        Family::Tree,
        Family::Theta,
        Family::CubeLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomConnected => "random_connected",
            Family::Complete => "complete",
            Family::Banana => "banana",
            Family::CircleSubdivided => "circle_subdivided",
            Family::DiamondNecklace => "diamond_necklace",
            Family::Tree => "tree",
            Family::Theta => "theta",
            Family::CubeLike => "cube_like",
            Family::Mixed => "mixed",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::STRUCTURED
            .iter()
            .chain([Family::Mixed].iter())
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family `{s}`")))
    }
}

/// A generated graph with a label and, when its family has one, a closed-form tau.
#[derive(Clone, Debug)]
pub struct GraphInstance {
    pub index: usize,
    pub graph: MetrizedGraph,
    pub descriptor: String,
    pub closed_form: Option<Scalar>,
    memo: EdgeMemo,
}

/// Per-edge data several checks need: `Γ-e`, `R` and `A` across it, and the
/// taus of the contracted and identified graphs.
#[derive(Debug)]
struct EdgeData {
    without: MetrizedGraph,
    r: Scalar,
    apq: Scalar,
    contracted: Option<(Scalar, Scalar)>,
}

#[derive(Clone, Debug, Default)]
struct EdgeMemo(Arc<Mutex<HashMap<usize, Arc<EdgeData>>>>);

impl GraphInstance {
    /// Data for non-bridge edge `i`; with `contract` the contracted and
    /// identified taus are filled in too.
    fn edge_data(&self, i: usize, contract: bool) -> Result<Arc<EdgeData>> {
        if let Some(d) = self.memo.0.lock().unwrap().get(&i) {
            if !contract || d.contracted.is_some() {
                return Ok(d.clone());
            }
        }
        let g = &self.graph;
        let e = g.edge(i)?;
        let without = g.without_edge(i)?;
        let r = without.resistance_matrix().get(e.a, e.b).clone();
        let apq = apq_direct(&without, e.a, e.b)?;
        let contracted = if contract {
            let bar = tau(&g.contract_edge(i)?);
            let tilde = tau(&g.identify_vertices(e.a, e.b)?.0);
            Some((bar, tilde))
        } else {
            None
        };
        let d = Arc::new(EdgeData { without, r, apq, contracted });
        self.memo.0.lock().unwrap().insert(i, d.clone());
        Ok(d)
    }

    pub fn standalone(graph: MetrizedGraph, descriptor: impl Into<String>) -> Self {
        GraphInstance { index: 0, graph, descriptor: descriptor.into(), closed_form: None, memo: EdgeMemo::default() }
    }
}

/// Deterministic source of graph instances. Instance `i` depends only on
/// `(seed, i)`, so instances can be generated in any order.
#[derive(Clone, Debug)]
pub struct GraphGenerator {
    pub seed: u64,
    pub family: Family,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub lengths: LengthRange,
}

impl GraphGenerator {
    pub fn new(seed: u64, family: Family) -> Self {
        GraphGenerator { seed, family, max_vertices: 8, max_edges: 16, lengths: LengthRange::default() }
    }

    pub fn instance(&self, index: usize) -> GraphInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let family = match self.family {
            Family::Mixed => Family::STRUCTURED[index % Family::STRUCTURED.len()],
            f => f,
        };
        let (graph, params, closed_form) = self.build(family, &mut rng);
        let descriptor = format!(
            "{}#{} {} v={} e={}",
            family.name(),
            index,
            params,
            graph.vertex_count(),
            graph.edge_count()
        );
        GraphInstance { index, graph, descriptor, closed_form, memo: EdgeMemo::default() }
    }

    pub fn generate(&self, count: usize) -> Vec<GraphInstance> {
        (0..count).into_par_iter().map(|i| self.instance(i)).collect()
    }

    fn build(&self, family: Family, rng: &mut ChaCha8Rng) -> (MetrizedGraph, String, Option<Scalar>) {
        let lr = &self.lengths;
        let max_v = self.max_vertices.max(2);
        let max_e = self.max_edges.max(1);
        // structured families use equal lengths about half the time
        let equal = rng.gen_bool(0.5);
        let lengths = |rng: &mut ChaCha8Rng, n: usize| -> Vec<Scalar> {
            let first = lr.draw(rng);
            (0..n).map(|_| if equal { first.clone() } else { lr.draw(rng) }).collect()
        };
        match family {
            Family::RandomConnected | Family::Mixed => {
                (families::random_connected_in(rng, max_v, max_e, lr), String::new(), None)
            }
            Family::Complete => {
                let mut v = rng.gen_range(2..=max_v);
                while v * (v - 1) / 2 > max_e && v > 2 {
                    v -= 1;
                }
                let ls = lengths(rng, v * (v - 1) / 2);
                let mut edges = Vec::new();
                for i in 0..v {
                    for j in i + 1..v {
                        edges.push((i, j, ls[edges.len()].clone()));
                    }
                }
                let g = crate::graph::build_graph(v, edges).expect("complete graph");
                let cf = equal.then(|| families::complete_tau_formula(v) * g.total_length());
                (g, format!("K{v}"), cf)
            }
            Family::Banana => {
                let m = rng.gen_range(1..=max_e.min(10));
                let g = families::banana_lengths(&lengths(rng, m));
                let cf = equal.then(|| families::banana_tau_formula(m, &g.total_length()));
                (g, format!("m={m}"), cf)
            }
            Family::CircleSubdivided => {
                let k = rng.gen_range(1..=max_v.min(max_e));
                let ls = lengths(rng, k);
                let g = if k == 1 {
                    families::circle(&ls[0])
                } else {
                    families::path(&ls[..k - 1]).with_edge(k - 1, 0, ls[k - 1].clone()).expect("path endpoints")
                };
                let cf = Some(g.total_length() / int(12));
                (g, format!("k={k}"), cf)
            }
            Family::DiamondNecklace => {
                let mut t = rng.gen_range(1..=3);
                while t > 1 && (4 * t > max_v || 6 * t > max_e) {
                    t -= 1;
                }
                let (a, b) = (lr.draw(rng), lr.draw(rng));
                let cf = Some(families::necklace_tau_formula(&a, &b, t));
                let desc = format!("t={t} a={} b={}", crate::scalar::format_scalar(&a), crate::scalar::format_scalar(&b));
                (families::necklace(&a, &b, t), desc, cf)
            }
            Family::Tree => {
                let v = rng.gen_range(2..=max_v.min(max_e + 1));
                let g = families::random_tree_in(rng, v, lr);
                let cf = Some(g.total_length() / int(4));
                (g, String::new(), cf)
            }
            Family::Theta => {
                let ls = lengths(rng, 3);
                (families::theta(&ls[0], &ls[1], &ls[2]), String::new(), None)
            }
            Family::CubeLike => {
                let ls = lengths(rng, 12);
                (families::cube(&ls), String::new(), None)
            }
        }
    }
}

/// A cataloged identity or bound with its executable check.
pub struct Identity {
    pub id: &'static str,
    pub description: &'static str,
    /// The relation being checked, written out.
    pub statement: &'static str,
    check: fn(&GraphInstance, &mut Out) -> Result<()>,
}

impl Identity {
    pub fn run(&self, inst: &GraphInstance) -> Vec<CheckResult> {
        let mut out = Out { id: self.id, graph: &inst.descriptor, results: Vec::new() };
        if let Err(e) = (self.check)(inst, &mut out) {
            out.results.push(CheckResult::errored(self.id, &inst.descriptor, e.to_string()));
        }
        if out.results.is_empty() {
            out.results.push(CheckResult::skipped(self.id, &inst.descriptor, "no applicable configuration"));
        }
        out.results
    }
}

impl std::fmt::Debug for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Identity").field("id", &self.id).finish()
    }
}

struct Out<'a> {
    id: &'static str,
    graph: &'a str,
    results: Vec<CheckResult>,
}

impl Out<'_> {
    fn name(&self, part: &str) -> String {
        if part.is_empty() {
            self.id.to_string()
        } else {
            format!("{}:{}", self.id, part)
        }
    }

    fn cmp(&mut self, part: &str, lhs: Scalar, rel: Relation, rhs: Scalar) {
        let name = self.name(part);
        self.results.push(CheckResult::compare(&name, self.graph, lhs, rel, rhs));
    }

    fn eq(&mut self, part: &str, lhs: Scalar, rhs: Scalar) {
        self.cmp(part, lhs, Relation::Eq, rhs);
    }

    fn skip(&mut self, part: &str, reason: impl Into<String>) {
        let name = self.name(part);
        self.results.push(CheckResult::skipped(&name, self.graph, reason));
    }

    fn prediction(&mut self, part: &str, r: &OpResult) {
        match &r.predicted_tau {
            Some(p) => self.eq(part, tau(&r.graph), p.clone()),
            None => {
                let name = self.name(part);
                self.results.push(CheckResult::errored(&name, self.graph, "prediction could not be computed"));
            }
        }
    }
}

/// The marked pair used by point-pair identities: first and last vertex.
fn marked_pair(g: &MetrizedGraph) -> (usize, usize) {
    (0, g.vertex_count() - 1)
}

fn non_bridge_edges(g: &MetrizedGraph) -> Vec<usize> {
    let bridges = g.bridges();
    (0..g.edge_count()).filter(|i| !bridges.contains(i)).collect()
}

/// Non-bridge edges with distinct endpoints.
fn cycle_edges(g: &MetrizedGraph) -> Vec<usize> {
    non_bridge_edges(g).into_iter().filter(|&i| !g.edges()[i].is_loop()).collect()
}

/// `(Σ L^2/(L+R), Σ L^3/(L+R)^2, Σ L R/(L+R))` with bridge limits.
pub fn edge_sums(g: &MetrizedGraph) -> (Scalar, Scalar, Scalar) {
    let mut s = (Scalar::zero(), Scalar::zero(), Scalar::zero());
    for pr in edge_profiles(g, 0).expect("vertex 0 exists") {
        let ls = length_share(&pr);
        s.0 += &pr.length * &ls;
        s.1 += &pr.length * &ls * &ls;
        s.2 += &pr.length * resistance_share(&pr);
    }
    s
}

fn require_pair(g: &MetrizedGraph, out: &mut Out) -> Option<(usize, usize)> {
    if g.vertex_count() < 2 {
        out.skip("", "needs two distinct vertices");
        None
    } else {
        Some(marked_pair(g))
    }
}

fn tag(p: usize) -> PointOnGraph {
    PointOnGraph::Vertex(p)
}

fn check_voltage_relations(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (p, q) = marked_pair(g);
    let x = PointOnGraph::on_edge(0, &g.edges()[0].length / int(3));
    let (pp, qq) = (tag(p), tag(q));
    let jx = voltage(g, &x, &pp, &qq)?;
    let jp = voltage(g, &pp, &x, &qq)?;
    let jq = voltage(g, &qq, &x, &pp)?;
    out.eq("rpx", resistance(g, &pp, &x)?, &jp + &jx);
    out.eq("rqx", resistance(g, &qq, &x)?, &jq + &jx);
    out.eq("rpq", resistance(g, &pp, &qq)?, jq + jp);
    Ok(())
}

fn check_genus(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (l, r) = genus_identity_check(g);
    out.eq("g", l, int(g.genus()));
    out.eq("v-1", r, int(g.vertex_count() as i64 - 1));
    Ok(())
}

fn check_mass(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    out.eq("", canonical_measure(g).total_mass(g), Scalar::one());
    Ok(())
}

fn check_base_independence(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let t = tau(g);
    for p in 0..g.vertex_count() {
        out.eq(&format!("p{p}"), tau_edge_sum(g, p)?.tau, t.clone());
    }
    out.eq("integral", tau_via_integral(g, 0)?, t);
    Ok(())
}

fn check_lem2term(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let (l, r) = lem2term_sides(&inst.graph);
    out.eq("", l, r);
    Ok(())
}

fn check_rem2term(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let at = |p| -> Scalar { edge_profiles(g, p).expect("vertex exists").iter().map(two_term).sum() };
    let base = at(0);
    for p in 1..g.vertex_count() {
        out.eq(&format!("p{p}"), at(p), base.clone());
    }
    Ok(())
}

fn check_valence(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let t = tau(g);
    let (h, _) = g.insert_point(&PointOnGraph::on_edge(0, &g.edges()[0].length * ratio(2, 5)))?;
    out.eq("insert", tau(&h), t.clone());
    out.eq("subdivide3", tau(&g.subdivide_uniform(3)?), t.clone());
    out.eq("simplify", tau(&h.simplify_valence2(&[])), t);
    Ok(())
}

fn check_scale(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let c = ratio(7, 3);
    let h = g.scale(&c)?;
    out.eq("tau", tau(&h), &c * tau(g));
    let (p, q) = marked_pair(g);
    out.eq("r", h.resistance_matrix().get(p, q).clone(), &c * g.resistance_matrix().get(p, q));
    out.eq("A", apq_direct(&h, p, q)?, &c * &c * apq_direct(g, p, q)?);
    Ok(())
}

fn jpq_power(n: u32, inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (p, q) = marked_pair(g);
    let terms = [Term::d(FnTag::JpXq, 2), Term::f(FnTag::JpXq, n)];
    let r = g.resistance_matrix().get(p, q).clone();
    let rhs = num_traits::pow(r, n as usize + 1) / int(n as i64 + 1);
    out.eq("", integrate_product(g, p, q, &terms)?, rhs);
    Ok(())
}

fn check_jpq0(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    jpq_power(0, inst, out)
}
fn check_jpq1(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    jpq_power(1, inst, out)
}
fn check_jpq2(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    jpq_power(2, inst, out)
}
fn check_jpq3(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    jpq_power(3, inst, out)
}

fn check_orthogonality(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (p, q) = marked_pair(g);
    let v = integrate_product(g, p, q, &[Term::d(FnTag::JxPq, 1), Term::d(FnTag::JpXq, 1)])?;
    out.eq("", v, Scalar::zero());
    Ok(())
}

fn check_thmbasic(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (p, q) = marked_pair(g);
    let i = integrate_product(g, p, q, &[Term::d(FnTag::JxPq, 2)])?;
    out.eq("", tau(g), (i + g.resistance_matrix().get(p, q)) / int(4));
    Ok(())
}

fn check_thmremain(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (p, q) = marked_pair(g);
    let a = apq_direct(g, p, q)?;
    let slopes = [Term::d(FnTag::JpXq, 1), Term::d(FnTag::JxPq, 1)];
    let iv = -integrate_product(g, p, q, &[Term::f(FnTag::JpXq, 1), slopes[0], slopes[1]])?;
    let v = integrate_product(g, p, q, &[Term::f(FnTag::JqXp, 1), slopes[0], slopes[1]])?;
    let r = g.resistance_matrix().get(p, q).clone();
    let vi = -&r * &r / int(2) + integrate_product(g, p, q, &[Term::f(FnTag::Rpx, 1), Term::d(FnTag::JpXq, 2)])?;
    out.eq("iv", iv, a.clone());
    out.eq("v", v, a.clone());
    out.eq("vi", vi, a);
    Ok(())
}

fn check_apq_routes(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    for (p, q) in spread_pairs(g.vertex_count()) {
        let a = apq_direct(g, p, q)?;
        out.cmp(&format!("{p},{q}:nonneg"), a.clone(), Relation::Ge, Scalar::zero());
        out.eq(&format!("{p},{q}"), a, apq_identity(g, p, q)?);
    }
    Ok(())
}

fn bounds_with_prefix(inst: &GraphInstance, out: &mut Out, ids: &[&str]) -> Result<()> {
    for c in lower_bound_suite(&inst.graph).checks {
        if ids.contains(&c.id.as_str()) {
            out.results.push(CheckResult { graph: inst.descriptor.clone(), ..c });
        }
    }
    Ok(())
}

fn check_fmm1(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    bounds_with_prefix(inst, out, &["FMM1-lower", "FMM1-upper", "FMM1-tree-equality"])
}
fn check_eqlength(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    bounds_with_prefix(inst, out, &["thmeqlength"])
}
fn check_eqlength2(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    bounds_with_prefix(inst, out, &["thmeqlength2"])
}
fn check_sum_r4(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    bounds_with_prefix(inst, out, &["thmcorineqsumR4", "thmcorineqsumR4-doubled"])
}
fn check_2term(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    bounds_with_prefix(inst, out, &["thm2term"])
}
fn check_corbasic2(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    bounds_with_prefix(inst, out, &["corbasic2"])
}

fn check_double(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    for n in 2..=3 {
        out.prediction(&format!("n{n}"), &ops::da_n(&inst.graph, n)?);
    }
    Ok(())
}

fn check_double_division(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (m, n) = (2usize, 2usize);
    let built = ops::da_n(&g.subdivide_uniform(m)?, n)?.graph;
    let (mm, nn) = (int(m as i64), int(n as i64));
    let k = (&nn - int(1)) / &nn;
    let rhs = tau(g) / (&nn * &nn)
        + g.total_length() / int(12) * &k * &k
        + (&nn - int(1)) / (int(6) * &mm * &nn * &nn) * edge_sums(g).0;
    out.eq("m2n2", tau(&built), rhs);
    Ok(())
}

fn check_division1(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (s1, s2, s3) = edge_sums(g);
    for m in 2..=3 {
        let mm = int(m as i64);
        let (t1, t2, t3) = edge_sums(&g.subdivide_uniform(m)?);
        out.eq(&format!("i:m{m}"), t1, &s1 / &mm);
        out.eq(&format!("ii:m{m}"), t2, &s2 / (&mm * &mm));
        out.eq(&format!("iii:m{m}"), t3, (&mm - int(1)) / &mm * g.total_length() + &s3 / &mm);
    }
    Ok(())
}

fn check_divisione(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    for n in 2..=3usize {
        let nn = int(n as i64);
        let h = ops::da_n(g, n)?.graph;
        let base = edge_profiles(g, 0)?;
        let built = edge_profiles(&h, 0)?;
        for pr in &base {
            let l = &pr.length;
            let expected = match pr.r_i.finite() {
                Some(r) => l * r / (&nn * (&nn * l + (&nn - int(1)) * r)),
                None => l / (&nn * (&nn - int(1))),
            };
            let got = built[pr.edge * n].r_i.expect_finite("parallel copies").clone();
            out.eq(&format!("i:n{n}:e{}", pr.edge), got, expected);
        }
        let (s, _, _) = edge_sums(g);
        out.eq(&format!("ii:n{n}"), edge_sums(&h).0, (&nn - int(1)) / &nn * g.total_length() + s / &nn);
    }
    Ok(())
}

fn check_doubleimp(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = inst.graph.normalize();
    let t = tau(&g);
    let x = edge_sums(&g).0;
    out.cmp("parabola", t.clone(), Relation::Ge, &x * &x / int(12));
    for n in 2..=3i64 {
        let k = ratio(3 * n - 2, n);
        let bound = &k * &k / int(108);
        let td = tau(&ops::da_n(&g, n as usize)?.graph);
        if td >= bound {
            out.cmp(&format!("n{n}"), t.clone(), Relation::Ge, ratio(1, 108));
        } else {
            // premise fails, so the implication holds vacuously
            out.cmp(&format!("n{n}:premise"), td, Relation::Lt, bound);
        }
    }
    out.eq("cordoubleimp1:n2", ratio(4, 108), ratio(1, 27));
    out.eq("cordoubleimp1:n3", ratio(49, 9 * 108), ratio(49, 972));
    Ok(())
}

fn fits(g: &MetrizedGraph, factor_edges: usize, out: &mut Out, part: &str) -> bool {
    if g.edge_count() * factor_edges > CONSTRUCTION_EDGE_CAP {
        out.skip(part, format!("construction exceeds {CONSTRUCTION_EDGE_CAP} edges"));
        false
    } else {
        true
    }
}

/// Triangle with arcs 1/6, 1/3, 1/2 on vertices 0, 1, 2.
fn triangle() -> MetrizedGraph {
    crate::graph::build_graph(3, vec![(0, 1, ratio(1, 6)), (1, 2, ratio(1, 3)), (2, 0, ratio(1, 2))]).expect("triangle")
}

fn check_magnificent(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = inst.graph.normalize();
    let beta = triangle();
    let (p, q) = (0, 2);
    if !fits(&g, beta.edge_count(), out, "") {
        return Ok(());
    }
    let r = beta.resistance_matrix().get(p, q).clone();
    let a = apq_direct(&beta, p, q)?;
    let built = ops::immerse(&g, &vec![Factor::new(beta.clone(), p, q); g.edge_count()])?;
    let rhs = tau(&beta) - &r / int(4) + &r * tau(&g) + a / &r * edge_sums(&g).0;
    out.eq("", tau(&built.graph), rhs);
    Ok(())
}

fn maggen_factors(e: usize) -> Vec<Factor> {
    let pool = [
        Factor::new(triangle(), 0, 1),
        Factor::new(families::banana(3, &ratio(1, 3)), 0, 1),
        Factor::new(families::segment(&int(1)), 0, 1),
        Factor::new(families::circle_arcs(&ratio(1, 3), &ratio(2, 3)), 1, 0),
        Factor::new(families::diamond(&ratio(1, 5)), 0, 3),
    ];
    (0..e).map(|i| pool[i % pool.len()].clone()).collect()
}

fn check_maggen(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = inst.graph.normalize();
    if !fits(&g, 5, out, "") {
        return Ok(());
    }
    let betas = maggen_factors(g.edge_count());
    let built = ops::immerse(&g, &betas)?;
    out.prediction("", &built);
    let weight = built.extra("weight").cloned().unwrap_or_default();
    out.eq("length", built.unnormalized.as_ref().map(|u| u.total_length()).unwrap_or_default(), weight);
    Ok(())
}

fn check_cormaggen1(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = inst.graph.normalize();
    // both factors have r(p, q) = 1/4
    let lollipop = crate::graph::build_graph(2, vec![(0, 1, ratio(1, 4)), (1, 1, ratio(3, 4))])?;
    let pool = [Factor::new(families::circle_arcs(&ratio(1, 2), &ratio(1, 2)), 0, 1), Factor::new(lollipop, 0, 1)];
    let betas: Vec<Factor> = (0..g.edge_count()).map(|i| pool[i % 2].clone()).collect();
    let r = ratio(1, 4);
    let built = ops::immerse(&g, &betas)?;
    let mut rhs = &r * tau(&g) - &r / int(4);
    for (pr, f) in edge_profiles(&g, 0)?.iter().zip(&betas) {
        let l = &pr.length;
        rhs += l * tau(&f.graph);
        rhs += l * length_share(pr) * apq_direct(&f.graph, f.p, f.q)? / &r;
    }
    out.eq("", tau(&built.graph), rhs);
    Ok(())
}

fn check_cormaggen2(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = inst.graph.normalize();
    let beta = triangle();
    if !fits(&g, beta.edge_count(), out, "") {
        return Ok(());
    }
    let pairs = [(0, 1), (1, 2), (2, 0), (0, 2)];
    let betas: Vec<Factor> = (0..g.edge_count()).map(|i| Factor::new(beta.clone(), pairs[i % 4].0, pairs[i % 4].1)).collect();
    let built = ops::immerse(&g, &betas)?;
    let mut weight = Scalar::zero();
    let mut bracket = tau(&g) - ratio(1, 4);
    for (pr, f) in edge_profiles(&g, 0)?.iter().zip(&betas) {
        let r = beta.resistance_matrix().get(f.p, f.q).clone();
        weight += &pr.length / &r;
        bracket += &pr.length * length_share(pr) * apq_direct(&beta, f.p, f.q)? / (&r * &r);
    }
    out.eq("", tau(&built.graph), tau(&beta) + bracket / weight);
    Ok(())
}

fn check_smaller_tau(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = inst.graph.normalize();
    let Some((p, q)) = require_pair(&g, out) else { return Ok(()) };
    let m = 1;
    if !fits(&g, g.edge_count() * m, out, "m1") {
        return Ok(());
    }
    let built = optimizer::tau_reducing_construction(&g, p, q, m)?;
    out.prediction("m1", &built);
    Ok(())
}

fn theta_companion() -> MetrizedGraph {
    families::theta(&ratio(1, 2), &ratio(1, 3), &ratio(1, 5))
}

fn check_twopunion(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let Some((p, q)) = require_pair(g, out) else { return Ok(()) };
    out.prediction("theta", &ops::union_two_points(g, &theta_companion(), (p, 0), (q, 1))?);
    out.prediction("self", &ops::union_two_points(g, g, (p, p), (q, q))?);
    Ok(())
}

fn check_cor1twopunion(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let Some((p, q)) = require_pair(g, out) else { return Ok(()) };
    let u = ops::union_two_points(g, g, (p, p), (q, q))?;
    let r = g.resistance_matrix().get(p, q).clone();
    let rhs = int(2) * tau(g) - &r / int(3) + apq_direct(g, p, q)? / &r;
    out.eq("", tau(&u.graph), rhs);
    Ok(())
}

fn check_cor2twopunion(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    for i in non_bridge_edges(g) {
        out.prediction(&format!("e{i}"), &ops::delete_edge(g, i)?);
    }
    Ok(())
}

fn check_cor2twopunion2(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    for i in non_bridge_edges(g) {
        let e = &g.edges()[i];
        let d = inst.edge_data(i, false)?;
        let s = &e.length + &d.r;
        let integral = integrate_product(&d.without, e.a, e.b, &[Term::d(FnTag::JxPq, 2)])?;
        let rhs = integral / int(4) + &s / int(12) + &d.apq / &s;
        out.eq(&format!("e{i}"), tau(g), rhs);
    }
    Ok(())
}

fn edge_ext_rhs(g: &MetrizedGraph, i: usize, x: &Scalar) -> Result<Scalar> {
    let (a, r) = deleted_edge_data(g, i)?;
    let s = &g.edges()[i].length + &r;
    Ok(tau(g) + x / int(12) - x * a / (&s * (&s + x)))
}

fn check_edgeext(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    for i in non_bridge_edges(g) {
        let l = g.edges()[i].length.clone();
        for (tagname, x) in [("grow", &l / int(2)), ("shrink", -&l / int(3))] {
            let mut ls = g.lengths();
            ls[i] = &l + &x;
            let h = g.with_lengths(&ls)?;
            out.eq(&format!("e{i}:{tagname}"), tau(&h), edge_ext_rhs(g, i, &x)?);
        }
    }
    Ok(())
}

fn check_successedgeext(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let edges = non_bridge_edges(g);
    if edges.is_empty() {
        out.skip("", "every edge is a bridge");
        return Ok(());
    }
    let mut cur = g.clone();
    let mut rhs = tau(g);
    for (k, &i) in edges.iter().enumerate() {
        let l = g.edges()[i].length.clone();
        let x = if k % 2 == 0 { &l / int(2) } else { -&l / int(4) };
        let mut ls = cur.lengths();
        ls[i] = &l + &x;
        let next = cur.with_lengths(&ls)?;
        // A and R' are taken in the graph after the change minus the edge
        let (a, r) = deleted_edge_data(&next, i)?;
        let s = &l + &r;
        rhs += &x / int(12) - &x * a / (&s * (&s + &x));
        cur = next;
    }
    out.eq("", tau(&cur), rhs);
    Ok(())
}

fn check_thmbasic2(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    match tau_bridgeless_identity(&inst.graph) {
        Ok((l, r)) => out.eq("", l, r),
        Err(Error::HasBridge) => out.skip("", "graph has a bridge"),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn check_gradient_euler(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    out.eq("", tau_gradient(g).euler_sum(g), tau(g));
    Ok(())
}

/// `(τ(Γ-e), R, A_{Γ-e}, τ(Γ̄), τ(Γ̃))` for a cycle edge.
fn contraction_data(inst: &GraphInstance, i: usize) -> Result<(Scalar, Scalar, Scalar, Scalar, Scalar)> {
    let d = inst.edge_data(i, true)?;
    let (bar, tilde) = d.contracted.clone().expect("filled on request");
    Ok((tau(&d.without), d.r.clone(), d.apq.clone(), bar, tilde))
}

fn check_lemcontract1(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    for i in cycle_edges(g) {
        let (th, r, a, bar, tilde) = contraction_data(inst, i)?;
        let base = &th - &r / int(6) + &a / &r;
        out.eq(&format!("e{i}:bar"), bar, base.clone());
        out.eq(&format!("e{i}:tilde"), tilde, base + &g.edges()[i].length / int(12));
    }
    Ok(())
}

fn check_lemcontract2(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let t = tau(g);
    for i in cycle_edges(g) {
        let (_, r, a, bar, tilde) = contraction_data(inst, i)?;
        let l = &g.edges()[i].length;
        let corr = l * a / (&r * (l + &r));
        out.eq(&format!("e{i}:bar"), t.clone(), bar + l / int(12) - &corr);
        out.eq(&format!("e{i}:tilde"), t.clone(), tilde - &corr);
        out.prediction(&format!("e{i}:op"), &ops::contract_edge(g, i)?);
    }
    Ok(())
}

fn check_coradding1(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (p, q) = marked_pair(g);
    let mid = g.vertex_count() / 2;
    for (u, v, l) in [(p, q, ratio(1, 2)), (mid, q, ratio(5, 3)), (p, p, ratio(1, 7))] {
        out.prediction(&format!("{u},{v}"), &ops::add_edge(g, u, v, &l)?);
    }
    Ok(())
}

fn check_coradding2(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let Some((p, q)) = require_pair(g, out) else { return Ok(()) };
    out.prediction(&format!("{p},{q}"), &ops::identify_points(g, p, q)?);
    let mid = g.vertex_count() / 2;
    if mid != q {
        out.prediction(&format!("{mid},{q}"), &ops::identify_points(g, mid, q)?);
    }
    Ok(())
}

fn check_twopunion_apq(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let Some((p, q)) = require_pair(g, out) else { return Ok(()) };
    for (name, h) in [("theta", theta_companion()), ("self", g.clone())] {
        let (p2, q2) = if name == "self" { (p, q) } else { (0, 1) };
        let u = ops::union_two_points(g, &h, (p, p2), (q, q2))?;
        match u.extra("A_pq") {
            Some(pred) => out.eq(name, apq_direct(&u.graph, p, q)?, pred.clone()),
            None => out.skip(name, "prediction unavailable"),
        }
    }
    Ok(())
}

fn check_corlem_twopunion_apq(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let Some((p, q)) = require_pair(g, out) else { return Ok(()) };
    let u = ops::union_two_points(g, g, (p, p), (q, q))?;
    let r = g.resistance_matrix().get(p, q).clone();
    out.eq("", int(2) * apq_direct(&u.graph, p, q)?, &r * &r / int(12) + apq_direct(g, p, q)?);
    Ok(())
}

fn check_tower(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = inst.graph.normalize();
    let Some((p, q)) = require_pair(&g, out) else { return Ok(()) };
    let mut two = None;
    for n in 1..=2u32 {
        if fits(&g, 1 << n, out, &format!("n{n}")) {
            let built = ops::c_tower(&g, p, q, n)?;
            out.prediction(&format!("n{n}"), &built);
            two = Some(built);
        }
    }
    let Some(two) = two.filter(|t| t.graph.edge_count() == 4 * g.edge_count()) else {
        out.skip("cor-n2", format!("construction exceeds {CONSTRUCTION_EDGE_CAP} edges"));
        return Ok(());
    };
    let r = g.resistance_matrix().get(p, q).clone();
    let a = apq_direct(&g, p, q)?;
    out.eq("cor-n2", tau(&two.graph), tau(&g) + ratio(3, 4) * a / &r - ratio(3, 16) * r);
    Ok(())
}

fn check_apq_circle(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let (a, b) = (g.edges()[0].length.clone(), g.total_length());
    let c = families::circle_arcs(&a, &b);
    let s = &a + &b;
    out.eq("", apq_direct(&c, 0, 1)?, &a * &a * &b * &b / (int(6) * &s * &s));
    Ok(())
}

fn check_lemapq(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    for i in cycle_edges(g) {
        let e = &g.edges()[i];
        let d = inst.edge_data(i, false)?;
        let s = &e.length + &d.r;
        let r = g.resistance_matrix().get(e.a, e.b).clone();
        let rhs = &e.length * &e.length * &d.apq / (&s * &s) + &r * &r / int(6);
        out.eq(&format!("e{i}"), apq_direct(g, e.a, e.b)?, rhs);
    }
    Ok(())
}

fn check_apq_tree(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let tree = if g.is_tree() { g.clone() } else { families::path(&g.lengths()) };
    for (p, q) in spread_pairs(tree.vertex_count()) {
        out.eq(&format!("{p},{q}"), apq_direct(&tree, p, q)?, Scalar::zero());
    }
    Ok(())
}

/// `(0, q)` for every `q > 0`, plus consecutive pairs `(q, q+1)`: linear in
/// `n` yet every vertex shows up on both sides.
fn spread_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|q| (0, q)).collect();
    pairs.extend((1..n.saturating_sub(1)).map(|q| (q, q + 1)));
    pairs
}

fn check_apq_additive(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let h = theta_companion();
    let p = g.vertex_count() - 1;
    let u = ops::union_one_point(g, 0, &h, 0)?;
    let q = ops::wedge_vertex(g, 0, 1).expect("vertex 1 survives");
    let rhs = apq_direct(g, p, 0)? + apq_direct(&h, 0, 1)?;
    out.eq("", apq_direct(&u.graph, p, q)?, rhs);
    out.prediction("tau", &u);
    Ok(())
}

fn instance_banana(g: &MetrizedGraph) -> MetrizedGraph {
    let ls = g.lengths();
    families::banana_lengths(&ls[..ls.len().min(6)])
}

fn check_apq_banana(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let b = instance_banana(&inst.graph);
    let m = int(b.edge_count() as i64);
    let r = b.resistance_matrix().get(0, 1).clone();
    out.eq("", apq_direct(&b, 0, 1)?, (m - int(1)) * &r * &r / int(6));
    Ok(())
}

fn check_lembanana(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let b = instance_banana(&inst.graph);
    let m = b.edge_count();
    let mm = int(m as i64);
    let r = b.resistance_matrix().get(0, 1).clone();
    out.eq("", tau(&b), b.total_length() / int(12) - (&mm - int(2)) * r / int(6));
    let l = b.total_length();
    out.cmp("min", tau(&b), Relation::Ge, &l * (ratio(1, 12) - (&mm - int(2)) / (int(6) * &mm * &mm)));
    out.cmp("quarter", tau(&b), Relation::Ge, l / int(16));
    Ok(())
}

fn check_bridge_contraction(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    let mut cur = g.clone();
    while let Some(&i) = cur.bridges().first() {
        cur = cur.contract_edge(i)?;
    }
    out.eq("", tau(g), tau(&cur) + (g.total_length() - cur.total_length()) / int(4));
    for i in g.bridges() {
        out.prediction(&format!("e{i}"), &ops::contract_edge(g, i)?);
    }
    Ok(())
}

fn check_additive(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    let g = &inst.graph;
    out.prediction("", &ops::union_one_point(g, 0, g, g.vertex_count() - 1)?);
    Ok(())
}

fn check_closed_form(inst: &GraphInstance, out: &mut Out) -> Result<()> {
    match &inst.closed_form {
        Some(cf) => out.eq("", tau(&inst.graph), cf.clone()),
        None => out.skip("", "family has no closed form"),
    }
    Ok(())
}

macro_rules! entry {
    ($id:expr, $desc:expr, $stmt:expr, $f:ident) => {
        Identity { id: $id, description: $desc, statement: $stmt, check: $f }
    };
}

static CATALOG: &[Identity] = &[
    entry!("voltage-resistance-split", "voltage splits resistance", "r(p,x) = j_p(x,q) + j_x(p,q) and cyclic", check_voltage_relations),
    entry!("genus-identity", "edge shares sum to genus", "Σ L/(L+R) = g, Σ R/(L+R) = v-1", check_genus),
    entry!("mucan-total-mass", "canonical measure is a probability measure", "μ_can(Γ) = 1", check_mass),
    entry!("proptau-base-independence", "edge-sum formula at every base vertex", "τ_p = τ_q = (1/4)∫(r_p')^2", check_base_independence),
    entry!("lem2term", "two-term sum via incident and far edges", "Σ L(Ra-Rb)^2/(L+R)^2 = (2/v)Σ L R^2/(L+R)^2 + far/v", check_lem2term),
    entry!("rem2term", "two-term sum independent of base", "Σ_p two_term = Σ_q two_term", check_rem2term),
    entry!("valence-independence", "valence-2 points do not change tau", "τ(Γ with extra point) = τ(Γ)", check_valence),
    entry!("scale-covariance", "scaling lengths by c", "τ(cΓ) = cτ, r scales by c, A by c^2", check_scale),
    entry!("thmjpq2njpq-n0", "voltage power integral n=0", "∫(j')^2 = r", check_jpq0),
    entry!("thmjpq2njpq-n1", "voltage power integral n=1", "∫(j')^2 j = r^2/2", check_jpq1),
    entry!("thmjpq2njpq-n2", "voltage power integral n=2", "∫(j')^2 j^2 = r^3/3", check_jpq2),
    entry!("thmjpq2njpq-n3", "voltage power integral n=3", "∫(j')^2 j^3 = r^4/4", check_jpq3),
    entry!("lemorthogonality", "orthogonality of voltage slopes", "∫ j_x(p,q)' j_p(x,q)' = 0", check_orthogonality),
    entry!("thmbasic", "tau from one voltage function", "τ = (1/4)∫(j_x(p,q)')^2 + r/4", check_thmbasic),
    entry!("thmremain-equivalences", "equivalent forms of A", "A = (iv) = (v) = (vi)", check_thmremain),
    entry!("apq-routes", "A by integration and by identification agree", "A_direct = r(τ(Γ_pq)-τ) + r^2/6 >= 0", check_apq_routes),
    entry!("FMM1-bounds", "global bounds", "ℓ/(16e) <= τ <= ℓ/4, equality iff tree", check_fmm1),
    entry!("thmeqlength", "equal-length lower bound", "τ >= g^2/(12 e^2) (ℓ = 1)", check_eqlength),
    entry!("thmeqlength2", "refined equal-length bound", "τ >= g^2/(12e^2) + (v-1)^2/(2ve^2)", check_eqlength2),
    entry!("thmcorineqsumR4", "bound through total edge resistance", "τ >= 1/(12(1+ΣR)^2)", check_sum_r4),
    entry!("thm2term", "Cauchy-Schwarz on resistance shares", "Σ L s^2 >= (Σ L s)^2", check_2term),
    entry!("thmdouble", "tau of the n-fold parallel graph", "τ(DA,n) = τ/n^2 + (ℓ/12)((n-1)/n)^2 + ((n-1)/(6n^2))Σ L^2/(L+R)", check_double),
    entry!("thmdoubledivision", "parallel graph of a subdivision", "τ((Γ^m)^{DA,n}) with Σ scaled by 1/m", check_double_division),
    entry!("lemdivision1", "edge sums under subdivision", "Σ L^2/(L+R) /m, Σ L^3/(L+R)^2 /m^2, Σ LR/(L+R) -> ((m-1)/m)ℓ + Σ/m", check_division1),
    entry!("lemdivisione", "edge data of the parallel graph", "R_i(DA,n) = L R/(n(nL+(n-1)R))", check_divisione),
    entry!("thmdoubleimp-implication", "parallel-graph lower-bound implication", "τ(DA,n) >= ((3n-2)/n)^2/108 implies τ >= 1/108", check_doubleimp),
    entry!("thmmagnificent", "immersion of one graph into all edges", "τ = τ(β) - r/4 + rτ(Γ) + (A/r)Σ L^2/(L+R)", check_magnificent),
    entry!("thmmaggen", "immersion of a factor per edge", "τ(N)ΣL/r = τ - 1/4 + Σ[Lτ(β)/r + L^2 A/((L+R)r^2)]", check_maggen),
    entry!("cormaggen1", "immersion with equal factor resistance", "τ = rτ - r/4 + ΣLτ(β) + (1/r)ΣL^2 A/(L+R)", check_cormaggen1),
    entry!("cormaggen2", "immersion of one graph at varying pairs", "τ = τ(β) + [τ - 1/4 + ΣL^2A/((L+R)r^2)]/ΣL/r", check_cormaggen2),
    entry!("thm-smaller-tau-decrease", "tau-reducing immersion", "τ((Γ^m⋆Γ_pq)^N) = τ - r(1/4-τ) + (A/(mr))ΣL^2/(L+R)", check_smaller_tau),
    entry!("thmtwopunion", "union along two points", "τ = τ1 + τ2 - (r1+r2)/6 + (A1+A2)/(r1+r2)", check_twopunion),
    entry!("cor1twopunion", "self-union along two points", "τ(Γ∪Γ) = 2τ - r/3 + A/r", check_cor1twopunion),
    entry!("cor2twopunion", "edge deletion", "τ(Γ-e) = τ - L/12 + R/6 - A/(L+R)", check_cor2twopunion),
    entry!("cor2twopunion2", "tau through the deleted graph's voltage", "τ = (1/4)∫_{Γ-e}(j')^2 + (L+R)/12 + A/(L+R)", check_cor2twopunion2),
    entry!("lemedgeext", "changing one edge length", "τ' = τ + x/12 - xA/((L+R)(L+R+x))", check_edgeext),
    entry!("lemsuccessedgeext", "successive edge length changes", "telescoped single-edge changes", check_successedgeext),
    entry!("thmbasic2", "tau of a bridgeless graph", "τ = ℓ/12 - Σ L A/(L+R)^2", check_thmbasic2),
    entry!("lem-diff-euler", "gradient is homogeneous of degree 0", "Σ L ∂τ/∂L = τ", check_gradient_euler),
    entry!("corbasic2", "bridgeless upper bound", "τ <= ℓ/12", check_corbasic2),
    entry!("lemcontract1", "contracting or looping an edge from Γ-e", "τ(Γ̄) = τ(Γ-e) - R/6 + A/R", check_lemcontract1),
    entry!("lemcontract2", "contracting an edge from Γ", "τ = τ(Γ̄) + L/12 - LA/(R(L+R))", check_lemcontract2),
    entry!("coradding1", "adding an edge", "τ(Γ_(p,q)) = τ + L/12 - r/6 + A/(L+r)", check_coradding1),
    entry!("coradding2", "identifying two points", "τ(Γ_pq) = τ - r/6 + A/r", check_coradding2),
    entry!("thm-twopunion-Apq", "A of a two-point union", "A = (r2^2A1 + r1^2A2)/(r1+r2)^2 + (r1r2/(r1+r2))^2/6", check_twopunion_apq),
    entry!("corlem-twopunion-Apq", "A of a self-union", "2A(Γ∪Γ) = r^2/12 + A", check_corlem_twopunion_apq),
    entry!("thm-twopunion2-tower", "normalized 2^n-fold union", "τ + (1-2^-n)A/r + (-1/6 - 1/(6·2^n) + 1/(3·4^n))r", check_tower),
    entry!("corpropAcircle", "A on a circle", "A = a^2b^2/(6(a+b)^2)", check_apq_circle),
    entry!("lemApq", "A across an edge", "A_Γ = L^2 A_{Γ-e}/(L+R)^2 + r^2/6", check_lemapq),
    entry!("propAtree", "A vanishes on trees", "A = 0", check_apq_tree),
    entry!("propAadditive", "A is additive across a cut point", "A_{p,q} = A_{p,y} + A_{y,q}", check_apq_additive),
    entry!("propAbanana", "A on a banana graph", "A = (m-1)r^2/6", check_apq_banana),
    entry!("proplembanana", "tau of a banana graph", "τ = ℓ/12 - (m-2)r/6 >= ℓ/16", check_lembanana),
    entry!("coradd-bridge-contraction", "contracting bridges", "τ = τ(Γ̄) + (ℓ - ℓ̄)/4", check_bridge_contraction),
    entry!("additive", "wedge sums add tau", "τ(Γ1 ∨ Γ2) = τ1 + τ2", check_additive),
    entry!("family-closed-form", "closed form of the generating family", "τ = closed form", check_closed_form),
];

pub fn identity_catalog() -> &'static [Identity] {
    CATALOG
}

/// Catalog entries by id; unknown ids are an error.
pub fn select_identities(names: &[String]) -> Result<Vec<&'static Identity>> {
    names
        .iter()
        .map(|n| {
            CATALOG
                .iter()
                .find(|i| i.id == n.as_str())
                .ok_or_else(|| Error::InvalidArgument(format!("unknown identity `{n}`")))
        })
        .collect()
}

/// Every identity on every instance; results are ordered by instance, then catalog.
pub fn run_on_instances(instances: &[GraphInstance], identities: &[&Identity]) -> Vec<CheckResult> {
    instances
        .par_iter()
        .map(|inst| identities.par_iter().map(|id| id.run(inst)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .flatten()
        .collect()
}

/// Generates `count` instances and runs the given identities (all when `None`).
pub fn run_suite(gen: &GraphGenerator, count: usize, identities: Option<&[&Identity]>) -> Vec<CheckResult> {
    let all: Vec<&Identity> = CATALOG.iter().collect();
    let ids = identities.unwrap_or(&all);
    run_on_instances(&gen.generate(count), ids)
}

/// Tallies of a result list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

pub fn summarize(results: &[CheckResult]) -> Summary {
    let mut s = Summary::default();
    for r in results {
        if r.passed() {
            s.passed += 1;
        } else if r.failed() {
            s.failed += 1;
        } else {
            s.skipped += 1;
        }
    }
    s
}

/// Exact tau and `(1/12)Σ L^3/(L+R)^2` of the necklace `Γ(a,b,t)`, computed
/// from one diamond and its complement instead of the full graph.
pub fn necklace_by_classes(a: &Scalar, b: &Scalar, t: usize) -> Result<(Scalar, Scalar)> {
    let ts = int(t as i64);
    let t1 = int(t as i64 - 1);
    let diamond = families::diamond(b);
    let (p, q) = families::diamond_poles();
    // Γ - e_a is a chain of diamonds joined by bridges
    let r_a = &t1 * a + &ts * diamond.resistance_matrix().get(p, q);
    let tau_chain = &t1 * a / int(4) + &ts * tau(&diamond);
    let a_chain = &ts * apq_direct(&diamond, p, q)?;
    let s = a + &r_a;
    let tau_full = tau_chain + a / int(12) - &r_a / int(6) + a_chain / &s;

    // one diamond with the rest of the ring collapsed to a single edge
    let rest = &ts * a + &t1 * b;
    let reduced = diamond.with_edge(q, p, rest)?;
    let mut cubes = a * a * a / (&s * &s);
    let mut per_diamond = Scalar::zero();
    for i in 0..diamond.edge_count() {
        let pr = edge_profile(&reduced, i, 0)?;
        let ls = length_share(&pr);
        per_diamond += &pr.length * &ls * &ls;
    }
    cubes += per_diamond;
    Ok((tau_full, &ts * cubes / int(12)))
}

/// The necklace example: normalized `Γ(1/101, b, 100)` has
/// `τ > 1/12.1` and `(1/12)Σ L^3/(L+R)^2 < 1/5000`.
pub fn necklace_witness() -> (CheckResult, CheckResult) {
    let (a, t) = (ratio(1, 101), 100usize);
    let ts = int(t as i64);
    let b = (int(1) - &a * &ts) / (int(5) * &ts);
    let label = format!("necklace a=1/101 b={} t=100", crate::scalar::format_scalar(&b));
    match necklace_by_classes(&a, &b, t) {
        Ok((tau_v, cubes)) => (
            CheckResult::compare("necklace-tau", &label, tau_v, Relation::Gt, ratio(10, 121)),
            CheckResult::compare("necklace-cube-sum", &label, cubes, Relation::Lt, ratio(1, 5000)),
        ),
        Err(e) => (
            CheckResult::errored("necklace-tau", &label, e.to_string()),
            CheckResult::errored("necklace-cube-sum", &label, e.to_string()),
        ),
    }
}
