//! Acceptance suite: one PASS/FAIL line per criterion. Exact criteria use
//! zero tolerance; the float tolerances are pinned below.

use std::time::Instant;

use mgt_core::check::CheckResult;
use mgt_core::circuit::resistance_by_reduction;
use mgt_core::families;
use mgt_core::ops::{self, Factor};
use mgt_core::optimizer::{self, ScanFamily, ScanSpec};
use mgt_core::scalar::to_f64;
use mgt_core::suite::{self, Family, GraphGenerator, GraphInstance};
use mgt_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 1;
const CORPUS_SIZE: usize = 200;
const GRADIENT_REL_TOL: f64 = 1e-9;
const OPTIMIZER_TAU_TOL: f64 = 1e-8;

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Vec<GraphInstance> {
    GraphGenerator::new(CORPUS_SEED, Family::RandomConnected).generate(CORPUS_SIZE)
}

fn closed_forms() -> Outcome {
    let mut n = 0;
    for (l, k) in [(int(1), 1), (ratio(7, 3), 5), (ratio(1, 9), 2)] {
        let c = families::circle(&l).subdivide_uniform(k).map_err(|e| e.to_string())?;
        ensure(tau(&c) == &l / int(12), || format!("circle ℓ={l} k={k}"))?;
        n += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for v in 2..=8 {
        let t = families::random_tree(&mut rng, v);
        ensure(tau(&t) == t.total_length() / int(4), || format!("tree v={v}"))?;
        n += 1;
    }
    for v in 2..=8usize {
        let e = (v * (v - 1) / 2) as i64;
        let k = families::complete(v, &ratio(1, e));
        let x = int(1) - ratio(2, v as i64);
        let expect = &x * &x / int(12) + ratio(2, (v * v * v) as i64);
        ensure(tau(&k) == expect, || format!("K{v}"))?;
        n += 1;
    }
    ensure(tau(&families::complete(5, &ratio(1, 10))) == ratio(23, 500), || "K5 != 23/500".into())?;
    let mut best = (0, Scalar::from_integer(10.into()));
    for m in 1..=10usize {
        let l = ratio(3, 2);
        let b = families::banana(m, &(&l / int(m as i64)));
        let mm = int(m as i64);
        let expect = &l * (&mm * &mm - int(2) * &mm + int(4)) / (int(12) * &mm * &mm);
        let t = tau(&b);
        ensure(t == expect, || format!("banana m={m}"))?;
        if t < best.1 {
            best = (m, t);
        }
        let r = b.resistance_matrix().get(0, 1).clone();
        let a = apq_direct(&b, 0, 1).map_err(|e| e.to_string())?;
        ensure(a == (&mm - int(1)) * &r * &r / int(6), || format!("banana A m={m}"))?;
        n += 2;
    }
    ensure(best.0 == 4 && best.1 == ratio(3, 2) / int(16), || format!("banana minimum at m={}", best.0))?;
    for l in [int(1), ratio(2, 5)] {
        let d = families::diamond(&l);
        let (p, q) = families::diamond_poles();
        ensure(tau(&d) == d.total_length() / int(15), || format!("diamond τ L={l}"))?;
        let a = apq_direct(&d, p, q).map_err(|e| e.to_string())?;
        ensure(a == &l * &l / int(8), || format!("diamond A L={l}"))?;
        n += 2;
    }
    for (a, b) in [(int(1), int(1)), (ratio(1, 3), ratio(5, 2)), (int(4), ratio(1, 7))] {
        let c = families::circle_arcs(&a, &b);
        let s = &a + &b;
        let got = apq_direct(&c, 0, 1).map_err(|e| e.to_string())?;
        ensure(got == &a * &a * &b * &b / (int(6) * &s * &s), || format!("circle A a={a} b={b}"))?;
        n += 1;
    }
    for a in [ratio(1, 3), int(1), int(2)] {
        for b in [ratio(1, 2), int(1), int(3)] {
            for t in 1..=3 {
                let g = families::necklace(&a, &b, t);
                let t2 = int(t as i64);
                let expect = &t2 * (&a + int(2) * &b) / int(12) + &b * &b / (int(8) * (&a + &b));
                ensure(tau(&g) == expect, || format!("necklace a={a} b={b} t={t}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} closed-form values equal"))
}

fn necklace_witness() -> Outcome {
    let (t, c) = suite::necklace_witness();
    ensure(t.passed() && c.passed(), || format!("{t}; {c}"))?;
    Ok(format!("τ = {:.9} > 1/12.1, cube sum = {:.3e} < 1/5000", to_f64(&t.lhs), to_f64(&c.lhs)))
}

fn oracle_equivalence(corpus: &[GraphInstance]) -> Outcome {
    use rayon::prelude::*;
    let checked: Vec<std::result::Result<usize, String>> = corpus
        .par_iter()
        .map(|inst| {
            let g = &inst.graph;
            let rm = g.resistance_matrix();
            let mut n = 0;
            for p in 0..g.vertex_count() {
                for q in p + 1..g.vertex_count() {
                    let red = resistance_by_reduction(g, p, q).map_err(|e| e.to_string())?;
                    ensure(&red == rm.get(p, q), || format!("{}: resistance {p},{q}", inst.descriptor))?;
                    let d = apq_direct(g, p, q).map_err(|e| e.to_string())?;
                    let i = apq_identity(g, p, q).map_err(|e| e.to_string())?;
                    ensure(d == i, || format!("{}: A {p},{q}", inst.descriptor))?;
                    n += 2;
                }
            }
            let sum = tau_edge_sum(g, 0).map_err(|e| e.to_string())?.tau;
            let int_tau = tau_via_integral(g, 0).map_err(|e| e.to_string())?;
            ensure(sum == int_tau, || format!("{}: tau routes", inst.descriptor))?;
            Ok(n + 1)
        })
        .collect();
    let mut total = 0;
    for c in checked {
        total += c?;
    }
    Ok(format!("{} graphs, {total} exact comparisons", corpus.len()))
}

fn identity_suite(corpus: &[GraphInstance]) -> Outcome {
    let catalog: Vec<_> = suite::identity_catalog().iter().collect();
    ensure(catalog.len() >= 44, || format!("catalog has {} entries", catalog.len()))?;
    let results = suite::run_on_instances(corpus, &catalog);
    let failures: Vec<&CheckResult> = results.iter().filter(|r| r.failed()).collect();
    if let Some(f) = failures.first() {
        return Err(format!("{} failures, first: {f}", failures.len()));
    }
    for r in &results {
        if let check::Status::Skipped(reason) = &r.status {
            ensure(!reason.is_empty(), || format!("skip without reason: {}", r.id))?;
        }
    }
    for id in catalog.iter().map(|i| i.id) {
        let ran = results.iter().any(|r| r.passed() && (r.id == id || r.id.starts_with(&format!("{id}:"))));
        let bound = matches!(id, "FMM1-bounds" | "thmcorineqsumR4" | "thmeqlength" | "thmeqlength2" | "thm2term" | "corbasic2");
        ensure(ran || bound || id == "family-closed-form", || format!("{id} never passed on the corpus"))?;
    }
    let s = suite::summarize(&results);
    Ok(format!("{} identities: {} pass, {} skipped (hypotheses), 0 fail", catalog.len(), s.passed, s.skipped))
}

fn operation_closure(corpus: &[GraphInstance]) -> Outcome {
    use rayon::prelude::*;
    let counts: Vec<std::result::Result<usize, String>> = corpus
        .par_iter()
        .map(|inst| {
            let g = &inst.graph;
            let mut rs = Vec::new();
            let bridges = g.bridges();
            let (p, q) = (0, g.vertex_count() - 1);
            for i in 0..g.edge_count() {
                if !bridges.contains(&i) {
                    rs.push(ops::delete_edge(g, i));
                }
                rs.push(ops::contract_edge(g, i));
            }
            rs.push(ops::add_edge(g, p, q, &ratio(2, 3)));
            rs.push(ops::union_one_point(g, p, g, q));
            rs.push(ops::da_n(g, 2));
            rs.push(ops::subdivide(g, 2));
            if p != q {
                rs.push(ops::identify_points(g, p, q));
                rs.push(ops::union_two_points(g, &families::theta(&int(1), &int(2), &int(3)), (p, 0), (q, 1)));
                let n = g.normalize();
                rs.push(ops::c_tower(&n, p, q, 1));
                rs.push(ops::c_tower(&n, p, q, 2));
            }
            let n = g.normalize();
            let beta = Factor::new(families::circle_arcs(&ratio(1, 4), &ratio(3, 4)), 0, 1);
            rs.push(ops::immerse(&n, &vec![beta; n.edge_count()]));
            let mut k = 0;
            for r in rs {
                let r = r.map_err(|e| format!("{}: {e}", inst.descriptor))?;
                ensure(r.prediction_holds() == Some(true), || format!("{}: {}", inst.descriptor, r.formula_id))?;
                k += 1;
            }
            Ok(k)
        })
        .collect();
    let mut total = 0;
    for c in counts {
        total += c?;
    }
    // worked examples
    for n in 1..=6 {
        let r = ops::da_n(&families::segment(&int(1)), n).map_err(|e| e.to_string())?;
        ensure(tau(&r.graph) == families::banana_tau_formula(n, &int(1)), || format!("da_n segment n={n}"))?;
    }
    let g = families::complete(4, &ratio(1, 6));
    for n in 2..=4 {
        let beta = Factor::new(families::banana(n, &ratio(1, n as i64)), 0, 1);
        let im = ops::immerse(&g, &vec![beta; 6]).map_err(|e| e.to_string())?;
        let da = ops::da_n(&g, n).map_err(|e| e.to_string())?;
        ensure(tau(&im.graph) == tau(&da.graph), || format!("immerse bananas n={n}"))?;
    }
    let c = families::circle_arcs(&ratio(1, 3), &ratio(2, 3));
    let tower = ops::c_tower(&c, 0, 1, 2).map_err(|e| e.to_string())?;
    let r = c.resistance_matrix().get(0, 1).clone();
    let a = apq_direct(&c, 0, 1).map_err(|e| e.to_string())?;
    ensure(tau(&tower.graph) == tau(&c) + ratio(3, 4) * a / &r - ratio(3, 16) * r, || "tower n=2".into())?;
    Ok(format!("{total} predictions on the corpus plus worked examples, all exact"))
}

fn gradient() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut triples = 0;
    let mut seed = 100;
    while triples < 10 {
        seed += 1;
        let g = families::random_connected_seeded(seed, 6, 10);
        let cands: Vec<usize> = (0..g.edge_count()).filter(|i| !g.bridges().contains(i)).collect();
        if cands.is_empty() {
            continue;
        }
        let i = cands[rng.gen_range(0..cands.len())];
        let l = g.edges()[i].length.clone();
        let x = &l * ratio(rng.gen_range(-8..=16), 10);
        if &l + &x <= Scalar::from_integer(0.into()) {
            continue;
        }
        let grad = tau_gradient(&g).components[i].value.clone();
        let (_, r) = tau::deleted_edge_data(&g, i).map_err(|e| e.to_string())?;
        let s = &l + &r;
        // A/(L+R)^2 = 1/12 - ∂τ/∂L
        let a_scaled = ratio(1, 12) - &grad;
        let predicted = tau(&g) + &x / int(12) - &x * a_scaled * &s / (&s + &x);
        let mut ls = g.lengths();
        ls[i] = &l + &x;
        let h = g.with_lengths(&ls).map_err(|e| e.to_string())?;
        ensure(tau(&h) == predicted, || format!("edge extension seed={seed} edge={i}"))?;
        ensure(tau_gradient(&g).euler_sum(&g) == tau(&g), || format!("Euler seed={seed}"))?;
        let float = optimizer::float_gradient(&g);
        for (f, e) in float.iter().zip(tau_gradient(&g).values()) {
            let e = to_f64(&e);
            ensure((f - e).abs() <= GRADIENT_REL_TOL * e.abs().max(1e-12), || format!("float gradient {f} vs {e}"))?;
        }
        triples += 1;
    }
    Ok(format!("{triples} (graph, edge, x) triples exact; Euler exact; float within {GRADIENT_REL_TOL:e} relative"))
}

fn optimizer_banana() -> Outcome {
    let g = families::banana_lengths(&[ratio(1, 10), ratio(2, 10), ratio(3, 10), ratio(4, 10)]);
    let s = optimizer::minimize_tau(&g, None, 5000, 1e-13).map_err(|e| e.to_string())?;
    ensure((s.tau - 1.0 / 16.0).abs() < OPTIMIZER_TAU_TOL, || format!("τ = {}", s.tau))?;
    ensure(s.lengths.iter().all(|l| (l - 0.25).abs() < 1e-3), || format!("lengths {:?}", s.lengths))?;
    ensure(s.exact_tau >= ratio(1, 16), || "exact τ below 1/16".into())?;
    let equal = families::banana(4, &ratio(1, 4));
    ensure(tau(&equal) == ratio(1, 16), || "equal lengths".into())?;
    let equal_at_rounded = s.exact_lengths.iter().all(|l| *l == ratio(1, 4));
    ensure(equal_at_rounded == (s.exact_tau == ratio(1, 16)), || "equality iff equal lengths".into())?;
    Ok(format!("τ = {:.12} after {} iterations; exact τ at rounded point = {}", s.tau, s.iteration, format_scalar(&s.exact_tau)))
}

fn tau_reduction() -> Outcome {
    let g = families::circle_arcs(&ratio(1, 2), &ratio(1, 2));
    let eps = ratio(1, 100);
    let red = optimizer::tau_reducing_sequence(&g, 0, 1, &eps).map_err(|e| e.to_string())?;
    let bound = ratio(1, 12) - ratio(1, 4) * (ratio(1, 4) - ratio(1, 12)) + &eps;
    let t = tau(&red.result.graph);
    ensure(red.result.graph.is_normalized(), || "result not normalized".into())?;
    ensure(t <= bound, || format!("τ = {} > {}", format_scalar(&t), format_scalar(&bound)))?;
    Ok(format!("m = {}, τ = {} <= {}", red.m, format_scalar(&t), format_scalar(&bound)))
}

fn conjecture_harness(corpus: &[GraphInstance]) -> Outcome {
    let floor = ratio(1, 108);
    let mut observed = Vec::new();
    for family in [ScanFamily::Complete, ScanFamily::Banana, ScanFamily::Necklace, ScanFamily::Circle] {
        let rows = optimizer::family_scan(&ScanSpec::default_for(family)).map_err(|e| e.to_string())?;
        ensure(rows.iter().all(|r| r.agrees()), || format!("{} closed form disagrees", family.name()))?;
        observed.extend(rows.into_iter().map(|r| (format!("{} {}", r.family.name(), r.params), r.ratio)));
    }
    for inst in corpus.iter().take(20).filter(|i| !i.graph.is_tree()) {
        let s = optimizer::minimize_tau(&inst.graph, None, 200, 1e-10).map_err(|e| e.to_string())?;
        observed.push((format!("minimized {}", inst.descriptor), s.exact_tau));
    }
    let violations: Vec<_> = observed.iter().filter(|(_, r)| *r < floor).collect();
    for (name, r) in &violations {
        println!("    REPORT: ratio {} below 1/108 at {name}", format_scalar(r));
    }
    let min = observed.iter().min_by(|a, b| a.1.cmp(&b.1)).expect("nonempty");
    Ok(format!(
        "{} ratios observed, minimum {} ({}), {} below 1/108",
        observed.len(),
        format_scalar(&min.1),
        min.0,
        violations.len()
    ))
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("closed-form regression", Box::new(closed_forms)),
        ("necklace witness", Box::new(necklace_witness)),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&corpus))),
        ("identity suite", Box::new(|| identity_suite(&corpus))),
        ("operation-formula closure", Box::new(|| operation_closure(&corpus))),
        ("gradient", Box::new(gradient)),
        ("optimizer on the 4-banana", Box::new(optimizer_banana)),
        ("tau-reducing construction", Box::new(tau_reduction)),
        ("lower-bound harness", Box::new(|| conjecture_harness(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
