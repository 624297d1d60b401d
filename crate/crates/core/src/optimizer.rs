//! Exploration of the lower-bound question: float descent on the unit
//! simplex with exact re-evaluation, closed-form family scans, and the
//! explicit tau-reducing construction.

use nalgebra::DMatrix;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families;
use crate::graph::MetrizedGraph;
use crate::integration::apq_direct;
use crate::ops::{self, Factor, OpResult};
use crate::scalar::{format_scalar, int, parse_scalar, ratio, rational_approx, to_f64, Scalar};
use crate::suite::edge_sums;
use crate::tau::tau;

pub const FLOOR: f64 = 1e-9;
pub const INITIAL_STEP: f64 = 0.1;
pub const BACKTRACK: f64 = 0.5;
pub const ARMIJO: f64 = 1e-4;
pub const DENOMINATOR_CAP: u64 = 1_000_000;

/// Float evaluation of tau and its gradient on a fixed topology.
#[derive(Clone, Debug)]
pub struct FloatModel {
    vertex_count: usize,
    ends: Vec<(usize, usize)>,
    bridges: Vec<bool>,
    /// Bridge flags of `Γ - e_i` (in the numbering of `Γ`) for each non-bridge `e_i`.
    deleted_bridges: Vec<Option<Vec<bool>>>,
}

impl FloatModel {
    pub fn new(g: &MetrizedGraph) -> Self {
        let m = g.edge_count();
        let flags = |list: Vec<usize>, n: usize| {
            let mut f = vec![false; n];
            for i in list {
                f[i] = true;
            }
            f
        };
        let bridges = flags(g.bridges(), m);
        let deleted_bridges = (0..m)
            .map(|i| {
                if bridges[i] {
                    return None;
                }
                let h = g.without_edge(i).expect("non-bridge deletion is connected");
                let inner = flags(h.bridges(), m - 1);
                Some((0..m).map(|j| j != i && inner[if j < i { j } else { j - 1 }]).collect())
            })
            .collect();
        FloatModel {
            vertex_count: g.vertex_count(),
            ends: g.edges().iter().map(|e| (e.a, e.b)).collect(),
            bridges,
            deleted_bridges,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    /// Resistance matrix of the graph without edge `skip`.
    fn resistances(&self, lengths: &[f64], skip: Option<usize>) -> DMatrix<f64> {
        let n = self.vertex_count;
        let mut lap = DMatrix::<f64>::zeros(n, n);
        for (i, &(a, b)) in self.ends.iter().enumerate() {
            if Some(i) == skip || a == b {
                continue;
            }
            let c = 1.0 / lengths[i];
            lap[(a, a)] += c;
            lap[(b, b)] += c;
            lap[(a, b)] -= c;
            lap[(b, a)] -= c;
        }
        let mut green = DMatrix::<f64>::zeros(n, n);
        if n > 1 {
            let grounded = lap.view((1, 1), (n - 1, n - 1)).into_owned();
            let inv = grounded.cholesky().expect("grounded Laplacian of a connected graph").inverse();
            green.view_mut((1, 1), (n - 1, n - 1)).copy_from(&inv);
        }
        DMatrix::from_fn(n, n, |x, y| green[(x, x)] + green[(y, y)] - 2.0 * green[(x, y)])
    }

    fn tau_with(&self, lengths: &[f64], skip: Option<usize>, bridges: &[bool]) -> f64 {
        let r = self.resistances(lengths, skip);
        let p = 0;
        let mut total = 0.0;
        for (i, &(a, b)) in self.ends.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let l = lengths[i];
            if a == b {
                total += l / 12.0;
                continue;
            }
            if bridges[i] {
                total += l / 4.0;
                continue;
            }
            let rab = r[(a, b)];
            let big_r = l * rab / (l - rab);
            let k = 1.0 / (l - rab);
            let w = |x: usize, y: usize| (r[(x, b)] + r[(y, a)] - r[(x, a)] - r[(y, b)]) / 2.0;
            let del = |x: usize, y: usize| r[(x, y)] + k * w(x, y) * w(x, y);
            let s = l + big_r;
            let diff = del(a, p) - del(b, p);
            total += (l * l * l / (s * s) + 3.0 * l * diff * diff / (s * s)) / 12.0;
        }
        total
    }

    pub fn tau(&self, lengths: &[f64]) -> f64 {
        self.tau_with(lengths, None, &self.bridges)
    }

    /// `∂τ/∂L_i = 1/12 - A/(L+R)^2`, with `A/(L+R)` recovered from the
    /// deletion formula; bridges give `1/4`.
    pub fn gradient(&self, lengths: &[f64]) -> Vec<f64> {
        let t = self.tau(lengths);
        let r = self.resistances(lengths, None);
        (0..self.edge_count())
            .map(|i| {
                let (a, b) = self.ends[i];
                if a == b {
                    return 1.0 / 12.0;
                }
                let Some(del_bridges) = &self.deleted_bridges[i] else { return 0.25 };
                let l = lengths[i];
                let rab = r[(a, b)];
                let big_r = l * rab / (l - rab);
                let t_del = self.tau_with(lengths, Some(i), del_bridges);
                let a_over = t - t_del - l / 12.0 + big_r / 6.0;
                1.0 / 12.0 - a_over / (l + big_r)
            })
            .collect()
    }
}

/// Float gradient of `g` at its own lengths.
pub fn float_gradient(g: &MetrizedGraph) -> Vec<f64> {
    let lengths: Vec<f64> = g.edges().iter().map(|e| to_f64(&e.length)).collect();
    FloatModel::new(g).gradient(&lengths)
}

/// Euclidean projection onto `{x_i >= FLOOR, Σ x_i = 1}`.
pub fn project_simplex(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let budget = 1.0 - FLOOR * n as f64;
    let mut sorted: Vec<f64> = x.iter().map(|v| v - FLOOR).collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite coordinates"));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        acc += v;
        let t = (acc - budget) / (k + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    x.iter().map(|v| (v - FLOOR - theta).max(0.0) + FLOOR).collect()
}

#[derive(Clone, Debug)]
pub struct OptState {
    /// Bridgeless topology actually optimized (bridges contracted).
    pub topology: MetrizedGraph,
    /// Original edge index of each edge of `topology`.
    pub edge_origin: Vec<usize>,
    pub contracted_bridges: Vec<usize>,
    pub lengths: Vec<f64>,
    pub tau: f64,
    pub gradient: Vec<f64>,
    pub iteration: usize,
    pub converged: bool,
    /// Edges at the positivity floor: candidates for contraction.
    pub pinned: Vec<usize>,
    pub exact_lengths: Vec<Scalar>,
    pub exact_tau: Scalar,
    /// Tau at every accepted iterate.
    pub history: Vec<f64>,
}

/// Contracts bridges until none remain; returns the core and the original index of each kept edge.
pub fn contract_bridges(g: &MetrizedGraph) -> Result<(MetrizedGraph, Vec<usize>, Vec<usize>)> {
    if g.is_tree() {
        return Err(Error::NotBridgeless);
    }
    let mut cur = g.clone();
    let mut origin: Vec<usize> = (0..g.edge_count()).collect();
    let mut removed = Vec::new();
    while let Some(&i) = cur.bridges().first() {
        cur = cur.contract_edge(i)?;
        removed.push(origin.remove(i));
    }
    removed.sort_unstable();
    Ok((cur, origin, removed))
}

/// Projected gradient descent on the unit simplex. `start` is indexed by the
/// edges of `topology`; the graph's own (normalized) lengths are used when absent.
pub fn minimize_tau(topology: &MetrizedGraph, start: Option<&[f64]>, max_iters: usize, tol: f64) -> Result<OptState> {
    let (core, origin, removed) = contract_bridges(topology)?;
    if let Some(s) = start {
        if s.len() != topology.edge_count() {
            return Err(Error::ArityMismatch { expected: topology.edge_count(), got: s.len() });
        }
        if s.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidArgument("start lengths must be positive".into()));
        }
    }
    let raw: Vec<f64> = match start {
        Some(s) => origin.iter().map(|&i| s[i]).collect(),
        None => core.edges().iter().map(|e| to_f64(&e.length)).collect(),
    };
    let sum: f64 = raw.iter().sum();
    let model = FloatModel::new(&core);
    let mut x = project_simplex(&raw.iter().map(|v| v / sum).collect::<Vec<_>>());
    let mut f = model.tau(&x);
    let mut history = vec![f];
    let mut converged = false;
    let mut iteration = 0;
    while iteration < max_iters {
        let g = model.gradient(&x);
        let full = project_simplex(&x.iter().zip(&g).map(|(a, b)| a - b).collect::<Vec<_>>());
        let stationarity = full.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if stationarity < tol {
            converged = true;
            break;
        }
        let mut step = INITIAL_STEP;
        let mut accepted = None;
        while step > 1e-20 {
            let y = project_simplex(&x.iter().zip(&g).map(|(a, b)| a - step * b).collect::<Vec<_>>());
            let fy = model.tau(&y);
            let decrease: f64 = g.iter().zip(y.iter().zip(&x)).map(|(gi, (yi, xi))| gi * (yi - xi)).sum();
            if fy <= f + ARMIJO * decrease {
                accepted = Some((y, fy));
                break;
            }
            step *= BACKTRACK;
        }
        iteration += 1;
        match accepted {
            Some((y, fy)) => {
                x = y;
                f = fy;
                history.push(f);
            }
            None => {
                // no step gives sufficient decrease: numerically stationary
                converged = true;
                break;
            }
        }
    }
    let gradient = model.gradient(&x);
    let pinned = x.iter().enumerate().filter(|(_, v)| **v <= FLOOR * (1.0 + 1e-6)).map(|(i, _)| i).collect();
    let approx: Vec<Scalar> = x.iter().map(|v| rational_approx(*v, DENOMINATOR_CAP)).collect();
    let approx: Vec<Scalar> = approx.into_iter().map(|v| if v.is_zero() { ratio(1, DENOMINATOR_CAP as i64) } else { v }).collect();
    let total: Scalar = approx.iter().sum();
    let exact_lengths: Vec<Scalar> = approx.iter().map(|v| v / &total).collect();
    let exact_tau = tau(&core.with_lengths(&exact_lengths)?);
    Ok(OptState {
        topology: core,
        edge_origin: origin,
        contracted_bridges: removed,
        lengths: x,
        tau: f,
        gradient,
        iteration,
        converged,
        pinned,
        exact_lengths,
        exact_tau,
        history,
    })
}

/// Runs from the graph's own lengths plus `restarts` random starts; returns
/// the run with the smallest exact tau. Restarts run in parallel.
pub fn minimize_with_restarts(
    topology: &MetrizedGraph,
    max_iters: usize,
    tol: f64,
    restarts: usize,
    seed: u64,
) -> Result<OptState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Option<Vec<f64>>> = vec![None];
    for _ in 0..restarts {
        starts.push(Some((0..topology.edge_count()).map(|_| rng.gen_range(0.05..1.0)).collect()));
    }
    let runs: Vec<Result<OptState>> =
        starts.par_iter().map(|s| minimize_tau(topology, s.as_deref(), max_iters, tol)).collect();
    let mut best: Option<OptState> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.exact_tau < b.exact_tau) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one start"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanFamily {
    Complete,
    Banana,
    Necklace,
    Circle,
}

impl std::str::FromStr for ScanFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(ScanFamily::Complete),
            "banana" => Ok(ScanFamily::Banana),
            "necklace" => Ok(ScanFamily::Necklace),
            "circle" => Ok(ScanFamily::Circle),
            _ => Err(Error::InvalidArgument(format!("unknown scan family `{s}`"))),
        }
    }
}

impl ScanFamily {
    pub fn name(self) -> &'static str {
        match self {
            ScanFamily::Complete => "complete",
            ScanFamily::Banana => "banana",
            ScanFamily::Necklace => "necklace",
            ScanFamily::Circle => "circle",
        }
    }
}

/// Family members to scan. `sizes` are `v`, `m` or `k`; necklaces use
/// `a_values` x `t_values`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSpec {
    pub family: ScanFamily,
    pub sizes: Vec<usize>,
    pub a_values: Vec<Scalar>,
    pub t_values: Vec<usize>,
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("bad size list `{text}`"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

impl ScanSpec {
    /// Default parameter ranges per family.
    pub fn default_for(family: ScanFamily) -> Self {
        let mut spec = ScanSpec { family, sizes: Vec::new(), a_values: Vec::new(), t_values: Vec::new() };
        match family {
            ScanFamily::Complete => spec.sizes = (2..=12).collect(),
            ScanFamily::Banana => spec.sizes = (1..=12).collect(),
            ScanFamily::Circle => spec.sizes = (1..=12).collect(),
            ScanFamily::Necklace => {
                spec.a_values = vec![ratio(1, 101), ratio(1, 20), ratio(1, 10)];
                spec.t_values = (1..=6).collect();
            }
        }
        spec
    }

    /// `2..12` or `2,3,5` for sizes; `a=1/101,1/20;t=1..6` for necklaces.
    pub fn parse(family: ScanFamily, params: &str) -> Result<Self> {
        let mut spec = ScanSpec::default_for(family);
        if family != ScanFamily::Necklace {
            spec.sizes = parse_sizes(params.trim_start_matches(|c| c == 'v' || c == 'm' || c == 'k' || c == '='))?;
            return Ok(spec);
        }
        for part in params.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got `{part}`")))?;
            match key.trim() {
                "a" => spec.a_values = value.split(',').map(|s| parse_scalar(s.trim()).map_err(Error::InvalidArgument)).collect::<Result<_>>()?,
                "t" => spec.t_values = parse_sizes(value)?,
                other => return Err(Error::InvalidArgument(format!("unknown necklace parameter `{other}`"))),
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub family: ScanFamily,
    pub params: String,
    /// Direct edge-sum tau of the normalized member.
    pub tau: Scalar,
    pub closed_form: Scalar,
    /// `τ/ℓ`.
    pub ratio: Scalar,
}

impl ScanRow {
    pub fn agrees(&self) -> bool {
        self.tau == self.closed_form
    }

    pub fn below_conjectured(&self) -> bool {
        self.ratio < ratio(1, 108)
    }

    pub fn csv(&self) -> String {
        format!("{},{},{},{}", self.family.name(), self.params, format_scalar(&self.tau), format_scalar(&self.ratio))
    }
}

/// Every member as a normalized graph with its closed-form tau.
fn scan_members(spec: &ScanSpec) -> Result<Vec<(String, MetrizedGraph, Scalar)>> {
    let mut out = Vec::new();
    match spec.family {
        ScanFamily::Complete => {
            for &v in &spec.sizes {
                if v < 2 {
                    return Err(Error::InvalidArgument("complete graphs need v >= 2".into()));
                }
                let e = (v * (v - 1) / 2) as i64;
                out.push((format!("v={v}"), families::complete(v, &ratio(1, e)), families::complete_tau_formula(v)));
            }
        }
        ScanFamily::Banana => {
            for &m in &spec.sizes {
                if m < 1 {
                    return Err(Error::BadM);
                }
                out.push((format!("m={m}"), families::banana(m, &ratio(1, m as i64)), families::banana_tau_formula(m, &int(1))));
            }
        }
        ScanFamily::Circle => {
            for &k in &spec.sizes {
                if k < 1 {
                    return Err(Error::BadM);
                }
                let g = families::circle(&int(1)).subdivide_uniform(k)?;
                out.push((format!("k={k}"), g, ratio(1, 12)));
            }
        }
        ScanFamily::Necklace => {
            for a in &spec.a_values {
                for &t in &spec.t_values {
                    let ts = int(t as i64);
                    if t < 1 || a <= &Scalar::zero() || a * &ts >= Scalar::one() {
                        return Err(Error::InvalidArgument(format!("necklace needs t >= 1 and 0 < a t < 1 (a={}, t={t})", format_scalar(a))));
                    }
                    let (b, g) = families::necklace_normalized(a, t);
                    let cf = families::necklace_tau_formula(a, &b, t);
                    out.push((format!("a={} t={t}", format_scalar(a)), g, cf));
                }
            }
        }
    }
    Ok(out)
}

/// Exact tau of every family member, by closed form and by the edge sum.
pub fn family_scan(spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    let members = scan_members(spec)?;
    Ok(members
        .into_par_iter()
        .map(|(params, g, cf)| {
            let t = tau(&g);
            let r = &t / g.total_length();
            ScanRow { family: spec.family, params, tau: t, closed_form: cf, ratio: r }
        })
        .collect())
}

pub fn min_ratio(rows: &[ScanRow]) -> Option<&ScanRow> {
    rows.iter().min_by(|a, b| a.ratio.cmp(&b.ratio))
}

/// Normalized `Γ^m ⋆ Γ_{p,q}`, predicted
/// `τ - r(1/4 - τ) + (A/(m r)) Σ L^2/(L+R)`.
pub fn tau_reducing_construction(g: &MetrizedGraph, p: usize, q: usize, m: usize) -> Result<OpResult> {
    if !g.is_normalized() {
        return Err(Error::NotNormalized);
    }
    g.check_vertex(p)?;
    g.check_vertex(q)?;
    if p == q {
        return Err(Error::SamePoint);
    }
    if m < 1 {
        return Err(Error::BadM);
    }
    let base = g.subdivide_uniform(m)?;
    let factors = vec![Factor::new(g.clone(), p, q); base.edge_count()];
    let mut res = ops::immerse(&base, &factors)?;
    let predicted = (|| {
        let t = tau(g);
        let r = g.resistance_matrix().get(p, q).clone();
        let a = apq_direct(g, p, q)?;
        let mm = int(m as i64);
        Ok::<_, Error>(&t - &r * (ratio(1, 4) - &t) + a / (mm * &r) * edge_sums(g).0)
    })();
    res.predicted_tau = predicted.ok();
    res.formula_id = "thm-smaller-tau";
    Ok(res)
}

#[derive(Clone, Debug)]
pub struct TauReduction {
    pub m: usize,
    pub result: OpResult,
    /// `τ - r(1/4 - τ) + eps`.
    pub bound: Scalar,
    pub holds: bool,
}

/// Least `m` with `(A/(m r)) Σ L^2/(L+R) <= eps`, solved exactly.
pub fn required_m(g: &MetrizedGraph, p: usize, q: usize, eps: &Scalar) -> Result<usize> {
    if eps <= &Scalar::zero() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if p == q {
        return Err(Error::SamePoint);
    }
    let r = g.resistance_matrix().get(p, q).clone();
    let need = apq_direct(g, p, q)? / r * edge_sums(g).0 / eps;
    let m = need.ceil().to_integer().to_usize().ok_or_else(|| Error::InvalidArgument("m too large".into()))?;
    Ok(m.max(1))
}

pub fn tau_reducing_sequence(g: &MetrizedGraph, p: usize, q: usize, eps: &Scalar) -> Result<TauReduction> {
    if !g.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let m = required_m(g, p, q, eps)?;
    let result = tau_reducing_construction(g, p, q, m)?;
    let t = tau(g);
    let r = g.resistance_matrix().get(p, q).clone();
    let bound = &t - &r * (ratio(1, 4) - &t) + eps;
    let holds = tau(&result.graph) <= bound;
    Ok(TauReduction { m, result, bound, holds })
}

/// The vertex pair of largest resistance (smallest ids on ties).
pub fn farthest_pair(g: &MetrizedGraph) -> Option<(usize, usize)> {
    let rm = g.resistance_matrix();
    let mut best: Option<((usize, usize), Scalar)> = None;
    for p in 0..g.vertex_count() {
        for q in p + 1..g.vertex_count() {
            let r = rm.get(p, q);
            if best.as_ref().is_none_or(|(_, b)| r > b) {
                best = Some(((p, q), r.clone()));
            }
        }
    }
    best.map(|(pq, _)| pq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::tau_gradient;
    use proptest::prelude::*;

    #[test]
    fn projection_lands_on_simplex() {
        let y = project_simplex(&[0.7, 0.6, -0.2]);
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(y.iter().all(|v| *v >= FLOOR));
        let same = project_simplex(&[0.25; 4]);
        assert!(same.iter().all(|v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn float_model_matches_exact_tau() {
        for g in [families::complete(4, &ratio(1, 6)), families::dumbbell(&ratio(1, 7)), families::diamond(&int(1))] {
            let l: Vec<f64> = g.edges().iter().map(|e| to_f64(&e.length)).collect();
            let f = FloatModel::new(&g).tau(&l);
            assert!((f - to_f64(&tau(&g))).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_gradient_is_uniform() {
        let g = families::circle(&int(1)).subdivide_uniform(4).unwrap();
        for v in float_gradient(&g) {
            assert!((v - 1.0 / 12.0).abs() < 1e-12);
        }
        let s = minimize_tau(&g, Some(&[0.1, 0.2, 0.3, 0.4]), 50, 1e-12).unwrap();
        assert!((s.tau - 1.0 / 12.0).abs() < 1e-12);
        assert_eq!(s.exact_tau, ratio(1, 12));
    }

    #[test]
    fn banana_minimum_at_equal_lengths() {
        for m in [3usize, 4, 5] {
            let g = families::banana_lengths(&(1..=m as i64).map(|i| ratio(i, 1)).collect::<Vec<_>>());
            let s = minimize_tau(&g, None, 2000, 1e-12).unwrap();
            let mm = m as f64;
            let expect = 1.0 / 12.0 - (mm - 2.0) / (6.0 * mm * mm);
            assert!((s.tau - expect).abs() < 1e-9, "m={m} {}", s.tau);
            assert!(s.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
            assert!(s.exact_tau >= families::banana_tau_formula(m, &int(1)));
        }
    }

    #[test]
    fn trees_are_rejected_and_bridges_contracted() {
        assert_eq!(minimize_tau(&families::path(&[int(1), int(2)]), None, 10, 1e-9).unwrap_err(), Error::NotBridgeless);
        let s = minimize_tau(&families::dumbbell(&int(1)), None, 200, 1e-10).unwrap();
        assert_eq!(s.contracted_bridges, vec![3]);
        assert_eq!(s.topology.edge_count(), 6);
    }

    #[test]
    fn scans_agree_with_closed_forms() {
        let rows = family_scan(&ScanSpec::default_for(ScanFamily::Complete)).unwrap();
        assert!(rows.iter().all(ScanRow::agrees));
        assert_eq!(min_ratio(&rows).unwrap().params, "v=5");
        assert_eq!(min_ratio(&rows).unwrap().ratio, ratio(23, 500));
        let rows = family_scan(&ScanSpec::default_for(ScanFamily::Banana)).unwrap();
        assert_eq!(min_ratio(&rows).unwrap().ratio, ratio(1, 16));
        let spec = ScanSpec::parse(ScanFamily::Necklace, "a=1/20;t=1..3").unwrap();
        let rows = family_scan(&spec).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.agrees() && !r.below_conjectured()));
        assert!(family_scan(&ScanSpec::default_for(ScanFamily::Circle)).unwrap().iter().all(|r| r.tau == ratio(1, 12)));
        assert!(ScanSpec::parse(ScanFamily::Necklace, "b=1").is_err());
        assert_eq!(ScanSpec::parse(ScanFamily::Banana, "2,4..5").unwrap().sizes, vec![2, 4, 5]);
    }

    #[test]
    fn circle_reduction() {
        let g = families::circle_arcs(&ratio(1, 2), &ratio(1, 2));
        let red = tau_reducing_sequence(&g, 0, 1, &ratio(1, 100)).unwrap();
        assert_eq!(red.m, 3);
        assert!(red.holds);
        assert_eq!(red.result.prediction_holds(), Some(true));
        assert!(tau(&red.result.graph) < ratio(1, 12));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn float_gradient_matches_exact(seed in any::<u64>()) {
            let g = families::random_connected_seeded(seed, 6, 9);
            let exact = tau_gradient(&g).values();
            for (f, e) in float_gradient(&g).iter().zip(&exact) {
                let e = to_f64(e);
                prop_assert!((f - e).abs() <= 1e-9 * e.abs().max(1e-3), "{f} vs {e}");
            }
        }

        #[test]
        fn descent_never_increases(seed in any::<u64>()) {
            let g = families::random_connected_seeded(seed, 5, 8);
            prop_assume!(!g.is_tree());
            let s = minimize_tau(&g, None, 40, 1e-10).unwrap();
            prop_assert!(s.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
            let core = s.topology.with_lengths(&s.exact_lengths).unwrap();
            prop_assert!(s.exact_tau >= ratio(1, 16 * core.edge_count() as i64));
            prop_assert!(s.exact_tau <= ratio(1, 12));
        }
    }
}
