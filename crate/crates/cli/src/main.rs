//! `mgt`: exact tau computations on metrized graph files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mgt_core::check::CheckResult;
use mgt_core::format::{parse_any, to_json_value, write_text};
use mgt_core::ops::{self, Factor, OpResult};
use mgt_core::optimizer::{self, ScanFamily, ScanSpec};
use mgt_core::scalar::{format_float, parse_scalar, to_f64};
use mgt_core::suite::{self, Family, GraphGenerator, GraphInstance};
use mgt_core::{apq_direct, apq_identity, canonical_measure, format_scalar, tau, tau_edge_sum, tau_gradient};
use mgt_core::{Error, ExtScalar, MetrizedGraph, PointOnGraph, Scalar};

#[derive(Parser, Debug)]
#[command(name = "mgt", version, about = "Exact tau constant, resistance and graph-operation tools for metrized graphs")]
struct Cli {
    #[command(flatten)]
    out: OutputFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct OutputFlags {
    /// Machine-readable JSON output
    #[arg(long, global = true, conflicts_with = "float")]
    json: bool,
    /// Decimal output with 15 significant digits instead of exact fractions
    #[arg(long, global = true)]
    float: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tau constant by the edge-sum formula
    Tau {
        file: PathBuf,
        /// Also list each edge's contribution and R_i
        #[arg(long)]
        per_edge: bool,
    },
    /// Effective resistance between two points (`<vertex>` or `<edge>:<offset>`)
    Resistance { file: PathBuf, p: String, q: String },
    /// Voltage j_x(p, q)
    Voltage { file: PathBuf, x: String, p: String, q: String },
    /// The invariant A_{p,q}
    Apq {
        file: PathBuf,
        p: usize,
        q: usize,
        #[arg(long, value_enum, default_value_t = ApqMethod::Direct)]
        method: ApqMethod,
    },
    /// Canonical measure: vertex masses and edge densities
    Mucan { file: PathBuf },
    /// Exact partial derivatives of tau in each edge length
    Gradient { file: PathBuf },
    /// Global bounds evaluated exactly
    Bounds { file: PathBuf },
    /// Build a graph by a tau-transforming operation
    Op {
        #[command(subcommand)]
        op: OpCommand,
        /// Write the resulting graph here instead of standard output
        #[arg(short = 'o', long = "output", global = true)]
        output: Option<PathBuf>,
    },
    /// Run the identity catalog on one graph or on a generated corpus
    Verify {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        /// `all` or a comma-separated list of identity ids
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        random: bool,
        #[arg(long, env = "MGT_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20, requires = "random")]
        count: usize,
        /// Generator family for `--random`: random-connected, complete, banana,
        /// circle-subdivided, diamond-necklace, tree, theta, cube-like or mixed
        #[arg(long, default_value = "random-connected", requires = "random")]
        family: String,
    },
    /// Minimize tau over edge lengths on a fixed topology
    Minimize {
        file: PathBuf,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        #[arg(long, env = "MGT_SEED", default_value_t = 1)]
        seed: u64,
        /// Write the exact rounded minimizer here
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Exact tau over a closed-form family, as CSV
    Scan {
        #[arg(long, value_enum)]
        family: ScanArg,
        /// `2..12` or `2,3,5`; necklaces take `a=1/101,1/20;t=1..6`
        #[arg(long)]
        params: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum OpCommand {
    /// Delete a non-bridge edge
    Delete { edge: usize, file: PathBuf },
    /// Contract an edge to a point
    Contract { edge: usize, file: PathBuf },
    /// Identify two vertices
    Identify { p: usize, q: usize, file: PathBuf },
    /// Add an edge of the given length
    AddEdge { p: usize, q: usize, length: String, file: PathBuf },
    /// Glue FILE2's vertex P2 onto FILE's vertex P1
    Union1 { p1: usize, p2: usize, file: PathBuf, file2: PathBuf },
    /// Glue FILE2 onto FILE at two pairs of vertices (P1~P2, Q1~Q2)
    Union2 { p1: usize, p2: usize, q1: usize, q2: usize, file: PathBuf, file2: PathBuf },
    /// Replace every edge by N parallel edges of length L/N
    DaN { n: usize, file: PathBuf },
    /// Subdivide every edge into M equal pieces
    Subdivide { m: usize, file: PathBuf },
    /// Replace every edge by a scaled copy of a factor graph; factors are
    /// used in turn when fewer than the edge count are given
    Immerse {
        file: PathBuf,
        #[arg(required = true)]
        factors: Vec<PathBuf>,
        /// Marked points `p:q` per factor (default `0:1`)
        #[arg(long, value_delimiter = ',')]
        marks: Vec<String>,
    },
    /// Normalized union of 2^N copies along P, Q
    Tower { p: usize, q: usize, n: u32, file: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ApqMethod {
    Direct,
    Identity,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScanArg {
    Complete,
    Banana,
    Necklace,
    Circle,
}

impl From<ScanArg> for ScanFamily {
    fn from(a: ScanArg) -> Self {
        match a {
            ScanArg::Complete => ScanFamily::Complete,
            ScanArg::Banana => ScanFamily::Banana,
            ScanArg::Necklace => ScanFamily::Necklace,
            ScanArg::Circle => ScanFamily::Circle,
        }
    }
}

/// Why a run stopped; each maps to one exit code.
#[derive(Debug)]
enum Failure {
    /// A check evaluated false (exit 1).
    Check,
    /// Arguments parsed but make no sense (exit 2).
    Usage(String),
    /// The graph file or its contents are bad (exit 3).
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(m) => Failure::Usage(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (text, code) = match run(&cli) {
        Ok(text) => (text, 0),
        Err(Failure::Check) => (String::new(), 1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            (String::new(), 2)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            (String::new(), 3)
        }
    };
    print!("{text}");
    ExitCode::from(code)
}

fn read_graph(path: &Path) -> Result<MetrizedGraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_any(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn point(text: &str) -> Result<PointOnGraph, Failure> {
    PointOnGraph::parse(text).map_err(Failure::Usage)
}

struct Printer(OutputFlags);

impl Printer {
    fn num(&self, x: &Scalar) -> String {
        if self.0.float {
            format_float(to_f64(x))
        } else {
            format_scalar(x)
        }
    }

    fn ext(&self, x: &ExtScalar) -> String {
        match x.finite() {
            Some(v) => self.num(v),
            None => "inf".into(),
        }
    }
}

fn json_text(v: Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).expect("plain data serializes"))
}

fn run(cli: &Cli) -> Outcome {
    let pr = Printer(cli.out);
    let json = cli.out.json;
    match &cli.command {
        Command::Tau { file, per_edge } => {
            let g = read_graph(file)?;
            let report = tau_edge_sum(&g, 0)?;
            if json {
                return Ok(json_text(report.to_json()));
            }
            let mut s = format!("{}\n", pr.num(&report.tau));
            if *per_edge {
                for c in &report.per_edge {
                    writeln!(s, "edge {}: {} (R = {})", c.edge, pr.num(&c.contribution), pr.ext(&c.r_i)).unwrap();
                }
            }
            Ok(s)
        }
        Command::Resistance { file, p, q } => {
            let g = read_graph(file)?;
            let r = mgt_core::resistance(&g, &point(p)?, &point(q)?)?;
            scalar_out(&pr, json, "resistance", &r)
        }
        Command::Voltage { file, x, p, q } => {
            let g = read_graph(file)?;
            let v = mgt_core::voltage(&g, &point(x)?, &point(p)?, &point(q)?)?;
            scalar_out(&pr, json, "voltage", &v)
        }
        Command::Apq { file, p, q, method } => {
            let g = read_graph(file)?;
            let value = match method {
                ApqMethod::Direct => apq_direct(&g, *p, *q)?,
                ApqMethod::Identity => apq_identity(&g, *p, *q)?,
                ApqMethod::Both => {
                    let (d, i) = (apq_direct(&g, *p, *q)?, apq_identity(&g, *p, *q)?);
                    if d != i {
                        eprintln!("methods disagree: direct {} vs identity {}", format_scalar(&d), format_scalar(&i));
                        return Err(Failure::Check);
                    }
                    d
                }
            };
            scalar_out(&pr, json, "apq", &value)
        }
        Command::Mucan { file } => {
            let g = read_graph(file)?;
            let m = canonical_measure(&g);
            if json {
                return Ok(json_text(json!({
                    "vertex_masses": m.vertex_masses.iter().map(|(v, x)| json!({"vertex": v, "mass": format_scalar(x)})).collect::<Vec<_>>(),
                    "edge_densities": m.edge_densities.iter().map(|(i, x)| json!({"edge": i, "density": format_scalar(x)})).collect::<Vec<_>>(),
                    "total_mass": format_scalar(&m.total_mass(&g)),
                })));
            }
            let mut s = String::new();
            for (v, x) in &m.vertex_masses {
                writeln!(s, "vertex {v}: {}", pr.num(x)).unwrap();
            }
            for (i, x) in &m.edge_densities {
                writeln!(s, "edge {i}: {}", pr.num(x)).unwrap();
            }
            writeln!(s, "total: {}", pr.num(&m.total_mass(&g))).unwrap();
            Ok(s)
        }
        Command::Gradient { file } => {
            let g = read_graph(file)?;
            let grad = tau_gradient(&g);
            if json {
                return Ok(json_text(json!({
                    "gradient": grad.components.iter().map(|c| json!({"edge": c.edge, "value": format_scalar(&c.value), "bridge": c.bridge})).collect::<Vec<_>>(),
                    "euler_sum": format_scalar(&grad.euler_sum(&g)),
                })));
            }
            let mut s = String::new();
            for c in &grad.components {
                writeln!(s, "edge {}: {}{}", c.edge, pr.num(&c.value), if c.bridge { " (bridge)" } else { "" }).unwrap();
            }
            Ok(s)
        }
        Command::Bounds { file } => {
            let g = read_graph(file)?;
            let report = mgt_core::tau::lower_bound_suite(&g);
            checks_out(&pr, json, &report.checks)
        }
        Command::Op { op, output } => run_op(&pr, json, op, output.as_deref()),
        Command::Verify { file, suite: names, random, seed, count, family } => {
            let ids = if names == "all" {
                suite::identity_catalog().iter().collect()
            } else {
                suite::select_identities(&names.split(',').map(|s| s.trim().to_string()).collect::<Vec<_>>())?
            };
            let results = if *random {
                let family: Family = family.parse()?;
                suite::run_suite(&GraphGenerator::new(*seed, family), *count, Some(&ids))
            } else {
                let path = file.as_ref().expect("clap requires a file without --random");
                let g = read_graph(path)?;
                let inst = GraphInstance::standalone(g, path.display().to_string());
                suite::run_on_instances(std::slice::from_ref(&inst), &ids)
            };
            checks_out(&pr, json, &results)
        }
        Command::Minimize { file, iters, tol, restarts, seed, output } => {
            let g = read_graph(file)?;
            let st = optimizer::minimize_with_restarts(&g, *iters, *tol, *restarts, *seed)?;
            let best = st.topology.with_lengths(&st.exact_lengths)?;
            if let Some(path) = output {
                write_file(path, &write_text(&best))?;
            }
            let ratio = &st.exact_tau / best.total_length();
            if json {
                return Ok(json_text(json!({
                    "tau": format_scalar(&st.exact_tau),
                    "tau_float": st.tau,
                    "ratio": format_scalar(&ratio),
                    "iterations": st.iteration,
                    "converged": st.converged,
                    "lengths": st.exact_lengths.iter().map(format_scalar).collect::<Vec<_>>(),
                    "edge_origin": st.edge_origin,
                    "contracted_bridges": st.contracted_bridges,
                    "pinned": st.pinned,
                })));
            }
            let mut s = format!("tau: {}\n", pr.num(&st.exact_tau));
            writeln!(s, "iterations: {}{}", st.iteration, if st.converged { "" } else { " (not converged)" }).unwrap();
            let lengths: Vec<String> = st.exact_lengths.iter().map(|l| pr.num(l)).collect();
            writeln!(s, "lengths: {}", lengths.join(" ")).unwrap();
            if !st.contracted_bridges.is_empty() {
                writeln!(s, "contracted bridges: {:?}", st.contracted_bridges).unwrap();
            }
            if !st.pinned.is_empty() {
                writeln!(s, "edges at the floor: {:?}", st.pinned).unwrap();
            }
            if ratio < mgt_core::ratio(1, 108) {
                eprintln!("ratio {} is below 1/108", format_scalar(&ratio));
            }
            Ok(s)
        }
        Command::Scan { family, params } => {
            let fam = ScanFamily::from(*family);
            let spec = match params {
                Some(p) => ScanSpec::parse(fam, p)?,
                None => ScanSpec::default_for(fam),
            };
            let rows = optimizer::family_scan(&spec)?;
            for r in rows.iter().filter(|r| r.below_conjectured()) {
                eprintln!("ratio below 1/108: {} {} ratio {}", r.family.name(), r.params, format_scalar(&r.ratio));
            }
            if rows.iter().any(|r| !r.agrees()) {
                eprintln!("closed form disagrees with the edge sum");
                return Err(Failure::Check);
            }
            if json {
                return Ok(json_text(Value::Array(
                    rows.iter()
                        .map(|r| json!({"family": r.family.name(), "params": r.params, "tau": format_scalar(&r.tau), "ratio": format_scalar(&r.ratio)}))
                        .collect(),
                )));
            }
            let mut s = String::from("family,params,tau,ratio\n");
            for r in &rows {
                writeln!(s, "{},{},{},{}", r.family.name(), r.params, pr.num(&r.tau), pr.num(&r.ratio)).unwrap();
            }
            Ok(s)
        }
    }
}

fn scalar_out(pr: &Printer, json: bool, key: &str, x: &Scalar) -> Outcome {
    if json {
        Ok(json_text(json!({ key: format_scalar(x) })))
    } else {
        Ok(format!("{}\n", pr.num(x)))
    }
}

/// Prints every check; fails when any check failed.
fn checks_out(pr: &Printer, json: bool, results: &[CheckResult]) -> Outcome {
    let summary = suite::summarize(results);
    let text = if json {
        json_text(json!({
            "results": results.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            "passed": summary.passed,
            "failed": summary.failed,
            "skipped": summary.skipped,
        }))
    } else {
        let mut s = String::new();
        for r in results {
            let line = match &r.status {
                mgt_core::check::Status::Skipped(why) => format!("SKIP {} [{}]: {why}", r.id, r.graph),
                mgt_core::check::Status::Error(why) => format!("ERROR {} [{}]: {why}", r.id, r.graph),
                st => format!(
                    "{} {} [{}]: {} {} {}",
                    if *st == mgt_core::check::Status::Pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.graph,
                    pr.num(&r.lhs),
                    r.relation.symbol(),
                    pr.num(&r.rhs)
                ),
            };
            writeln!(s, "{line}").unwrap();
        }
        writeln!(s, "{} passed, {} failed, {} skipped", summary.passed, summary.failed, summary.skipped).unwrap();
        s
    };
    if summary.failed > 0 {
        print!("{text}");
        return Err(Failure::Check);
    }
    Ok(text)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_mark(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("bad mark `{text}`, expected p:q"));
    let (p, q) = text.split_once(':').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn run_op(pr: &Printer, json: bool, op: &OpCommand, output: Option<&Path>) -> Outcome {
    let res: OpResult = match op {
        OpCommand::Delete { edge, file } => ops::delete_edge(&read_graph(file)?, *edge)?,
        OpCommand::Contract { edge, file } => ops::contract_edge(&read_graph(file)?, *edge)?,
        OpCommand::Identify { p, q, file } => ops::identify_points(&read_graph(file)?, *p, *q)?,
        OpCommand::AddEdge { p, q, length, file } => {
            let l = parse_scalar(length).map_err(Failure::Usage)?;
            ops::add_edge(&read_graph(file)?, *p, *q, &l)?
        }
        OpCommand::Union1 { p1, p2, file, file2 } => ops::union_one_point(&read_graph(file)?, *p1, &read_graph(file2)?, *p2)?,
        OpCommand::Union2 { p1, p2, q1, q2, file, file2 } => {
            ops::union_two_points(&read_graph(file)?, &read_graph(file2)?, (*p1, *p2), (*q1, *q2))?
        }
        OpCommand::DaN { n, file } => ops::da_n(&read_graph(file)?, *n)?,
        OpCommand::Subdivide { m, file } => ops::subdivide(&read_graph(file)?, *m)?,
        OpCommand::Immerse { file, factors, marks } => {
            let g = read_graph(file)?;
            let graphs = factors.iter().map(|f| read_graph(f)).collect::<Result<Vec<_>, _>>()?;
            let marks = marks.iter().map(|m| parse_mark(m)).collect::<Result<Vec<_>, _>>()?;
            let betas: Vec<Factor> = (0..g.edge_count())
                .map(|i| {
                    let (p, q) = if marks.is_empty() { (0, 1) } else { marks[i % graphs.len() % marks.len()] };
                    Factor::new(graphs[i % graphs.len()].clone(), p, q)
                })
                .collect();
            ops::immerse_normalizing(&g, &betas)?
        }
        OpCommand::Tower { p, q, n, file } => ops::c_tower(&read_graph(file)?.normalize(), *p, *q, *n)?,
    };
    let actual = tau(&res.graph);
    let holds = res.predicted_tau.as_ref().map(|p| *p == actual);
    let graph_text = write_text(&res.graph);
    if let Some(path) = output {
        write_file(path, &graph_text)?;
    }
    let text = if json {
        json_text(json!({
            "formula": res.formula_id,
            "predicted_tau": res.predicted_tau.as_ref().map(format_scalar),
            "tau": format_scalar(&actual),
            "holds": holds,
            "graph": to_json_value(&res.graph),
        }))
    } else {
        let mut s = String::new();
        let predicted = res.predicted_tau.as_ref().map_or("unavailable".to_string(), |p| pr.num(p));
        writeln!(s, "predicted tau: {predicted} ({})", res.formula_id).unwrap();
        writeln!(s, "actual tau: {}", pr.num(&actual)).unwrap();
        if output.is_none() {
            s.push_str(&graph_text);
        }
        s
    };
    if holds == Some(false) {
        print!("{text}");
        eprintln!("prediction does not match the constructed graph");
        return Err(Failure::Check);
    }
    Ok(text)
}
