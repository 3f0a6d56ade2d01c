use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use otisham::constructive::{build_on, classify, key_edges, FailureReport};
use otisham::engine::{
    counting_refutation, decide_with, Budget, CountingOutcome, EdgeAssignment, HamVerdict, SearchOptions,
    DEFAULT_MAX_NODES, DEFAULT_MAX_SECS,
};
use otisham::graph::check_hamiltonian_cycle;
use otisham::io::{canonical_form, parse_edge_list, to_dot, to_edge_list, CycleCertificate};
use otisham::seed::Seed;
use otisham::topology::{gen_complete, gen_cycle, gen_path};
use otisham::trees::{build_ists, check_independence};
use otisham::{bowtie_otis, gen_bowtie, gen_butterfly, otis, BowtieParams, Graph, HamCycle};
use otisham_cli::report::InputHash;
use otisham_cli::reproduce::{reproduce, reproduce_with};
use otisham_cli::sweep::{sweep, Outcome};
use otisham_cli::{Exit, RunReport};

/// Hamiltonicity toolkit for OTIS networks over bowtie and butterfly bases.
#[derive(Parser)]
#[command(name = "otisham", version)]
struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Record wall-clock timings (in the JSON report, or on stderr).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Search-node limit for the decider.
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    budget_nodes: u64,
    /// Wall-clock limit for the decider, in seconds.
    #[arg(long, default_value_t = DEFAULT_MAX_SECS)]
    budget_secs: u64,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget {
            max_nodes: self.budget_nodes,
            max_time: Duration::from_secs(self.budget_secs),
        }
    }
}

#[derive(Args, Clone)]
struct GraphOut {
    /// Write the graph here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// DOT instead of the edge-list format.
    #[arg(long)]
    dot: bool,
}

#[derive(Subcommand)]
enum GenKind {
    /// Bowtie BF(m,n), normalized.
    Bowtie {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: GraphOut,
    },
    /// Wrapped butterfly BF(dim).
    Butterfly {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        out: GraphOut,
    },
    Cycle {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: GraphOut,
    },
    Path {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: GraphOut,
    },
    Complete {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: GraphOut,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    EdgeList,
    Canonical,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a base graph.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// OTIS (swapped) network over an edge-list base.
    Otis {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        out: GraphOut,
    },
    /// Decide Hamiltonicity by branch-and-propagate search.
    Decide {
        #[arg(long = "in")]
        input: PathBuf,
        /// JSON seed {"forced": [[a,b],...], "deleted": [...]}.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Explore the two root branches in parallel.
        #[arg(long)]
        parallel_root: bool,
        /// Write the cycle certificate here when one is found.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Edge-counting refutation.
    RefuteCount {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Table-driven Hamiltonian cycle of OTIS(BF(m,n)).
    HamBuild {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// List the key edges with the table row behind each.
        #[arg(long)]
        emit_key_edges: bool,
        /// DOT of the OTIS graph with the cycle highlighted.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        cert_out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Two independent spanning trees from a cycle certificate.
    Ist {
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        root: String,
        /// Host graph; defaults to the cycle itself.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Check a cycle certificate against a graph.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
    },
    /// Re-render a graph.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        /// Cycle certificate to highlight (DOT only).
        #[arg(long)]
        cycle: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the known BF(4,4) and BF(4,6) counts and verdicts.
    Reproduce {
        #[command(flatten)]
        budget: BudgetArgs,
        /// Drop one generated edge (exercises the mismatch path).
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// Build, verify and derive trees for every bowtie-OTIS up to a base size.
    Sweep {
        /// Largest base vertex count i = m + n - 1 (at least 5).
        #[arg(long)]
        max_base: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

struct Failure(Exit, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(Exit::Usage, msg.into())
}

/// What a command produced: exit status, JSON result, text rendering.
struct Output {
    status: Exit,
    result: Value,
    text: String,
}

impl Output {
    fn ok(result: Value, text: String) -> Self {
        Self {
            status: Exit::Ok,
            result,
            text,
        }
    }
}

#[derive(Default)]
struct Inputs(Vec<InputHash>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        self.0.push(InputHash::of(&path.display().to_string(), text.as_bytes()));
        Ok(text)
    }

    fn graph(&mut self, path: &Path) -> Result<Graph, Failure> {
        let text = self.read(path)?;
        parse_edge_list(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn certificate(&mut self, path: &Path) -> Result<CycleCertificate, Failure> {
        let text = self.read(path)?;
        CycleCertificate::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn params(m: usize, n: usize) -> Result<BowtieParams, Failure> {
    BowtieParams::new(m, n).map_err(|e| usage(e.to_string()))
}

fn emit_graph(g: &Graph, out: &GraphOut) -> Result<Output, Failure> {
    let text = if out.dot { to_dot(g, None) } else { to_edge_list(g) };
    let mut result = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "graph_hash": g.content_hash(),
    });
    match &out.out {
        Some(path) => {
            write_file(path, &text)?;
            result["out"] = json!(path.display().to_string());
            let summary = format!("{} vertices, {} edges -> {}\n", g.vertex_count(), g.edge_count(), path.display());
            Ok(Output::ok(result, summary))
        }
        None => {
            result[if out.dot { "dot" } else { "edge_list" }] = json!(text);
            Ok(Output::ok(result, text))
        }
    }
}

fn cmd_gen(kind: &GenKind) -> Result<Output, Failure> {
    let bad = |e: otisham::TopologyError| usage(e.to_string());
    let (g, out) = match kind {
        GenKind::Bowtie { m, n, out } => (gen_bowtie(params(*m, *n)?), out),
        GenKind::Butterfly { dim, out } => (gen_butterfly(*dim).map_err(bad)?, out),
        GenKind::Cycle { k, out } => (gen_cycle(*k).map_err(bad)?, out),
        GenKind::Path { k, out } => (gen_path(*k).map_err(bad)?, out),
        GenKind::Complete { k, out } => (gen_complete(*k).map_err(bad)?, out),
    };
    emit_graph(&g, out)
}

fn cmd_otis(inputs: &mut Inputs, input: &Path, out: &GraphOut) -> Result<Output, Failure> {
    let base = inputs.graph(input)?;
    let g = otis(&base).map_err(|e| usage(e.to_string()))?;
    emit_graph(&g, out)
}

fn verdict_json(g: &Graph, v: &HamVerdict) -> Value {
    let stats = v.stats();
    let mut out = json!({
        "verdict": v.name(),
        "witness": v.cycle().map(|c| c.order().to_vec()),
        "nodes": stats.nodes,
        "depth": stats.max_depth,
    });
    if let HamVerdict::Inconclusive { limit, .. } = v {
        out["limit"] = json!(limit);
    }
    if v.is_hamiltonian() {
        out["graph_hash"] = json!(g.content_hash());
    }
    out
}

fn cmd_decide(
    inputs: &mut Inputs,
    input: &Path,
    seed: Option<&Path>,
    budget: Budget,
    parallel_root: bool,
    cert_out: Option<&Path>,
) -> Result<Output, Failure> {
    let g = inputs.graph(input)?;
    let seeded = match seed {
        Some(path) => {
            let text = inputs.read(path)?;
            let seed = Seed::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Some(seed.assignment(&g).map_err(|e| usage(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    // A seed can already contradict itself or under propagation; report where.
    let root_contradiction = match &seeded {
        Some(Err(c)) => Some(c.report(&g)),
        Some(Ok(a)) => {
            let mut a: EdgeAssignment = a.clone();
            a.propagate(&g).err().map(|c| c.report(&g))
        }
        None => None,
    };
    let verdict = match seeded {
        Some(Err(_)) => HamVerdict::NonHamiltonian {
            stats: Default::default(),
        },
        Some(Ok(a)) => decide_with(&g, Some(a), SearchOptions { budget, parallel_root }),
        None => decide_with(&g, None, SearchOptions { budget, parallel_root }),
    };
    let mut result = verdict_json(&g, &verdict);
    if let Some(c) = &root_contradiction {
        result["root_contradiction"] = json!(c);
    }
    if let (Some(path), Some(cycle)) = (cert_out, verdict.cycle()) {
        write_file(path, &CycleCertificate::for_graph(&g, cycle.order()).to_json())?;
    }
    let stats = verdict.stats();
    let mut text = format!("{} (nodes {}, depth {})\n", verdict.name(), stats.nodes, stats.max_depth);
    if let Some(c) = &root_contradiction {
        text.push_str(&format!("seed propagation: {} at {}\n", c.kind, c.witness.join(" ")));
    }
    if let Some(c) = verdict.cycle() {
        text.push_str(&c.order().join(" "));
        text.push('\n');
    }
    let status = match verdict {
        HamVerdict::Inconclusive { .. } => Exit::Inconclusive,
        _ => Exit::Ok,
    };
    Ok(Output { status, result, text })
}

fn cmd_refute_count(inputs: &mut Inputs, input: &Path) -> Result<Output, Failure> {
    let g = inputs.graph(input)?;
    Ok(match counting_refutation(&g) {
        CountingOutcome::Refuted(cert) => {
            let text = format!(
                "refuted: budget {} < bound {} = {} + {}\n",
                cert.budget, cert.bound, cert.high_degree_contribution, cert.independent_contribution
            );
            Output::ok(json!(cert), text)
        }
        CountingOutcome::Inconclusive {
            budget,
            bound,
            candidates_too_large,
        } => Output::ok(
            json!({
                "inconclusive": true,
                "budget": budget,
                "bound": bound,
                "candidates_too_large": candidates_too_large,
            }),
            format!("inconclusive: bound {bound} does not exceed budget {budget}\n"),
        ),
    })
}

struct HamBuildArgs<'a> {
    m: usize,
    n: usize,
    emit_key_edges: bool,
    dot: bool,
    cert_out: Option<&'a Path>,
    budget: Budget,
}

fn cmd_ham_build(a: HamBuildArgs<'_>) -> Result<Output, Failure> {
    let p = params(a.m, a.n)?;
    let g = bowtie_otis(p);
    let class = classify(p);
    let mut result = json!({ "m": p.m(), "n": p.n(), "class": class, "vertices": g.vertex_count() });
    let mut text = format!("OTIS(BF({},{})): class {class}, {} vertices\n", p.m(), p.n(), g.vertex_count());
    if a.emit_key_edges {
        match key_edges(p) {
            Ok(set) => {
                for k in &set.edges {
                    text.push_str(&format!("key {} ({},{}) {}\n", k.cluster, k.a, k.b, k.rule));
                }
                result["key_edges"] = json!(set.edges);
            }
            Err(e) => {
                text.push_str(&format!("no key edges: {e}\n"));
                result["key_edges"] = Value::Null;
            }
        }
    }
    let built = match build_on(&g, p, a.budget) {
        Ok(b) => b,
        Err(e) => {
            let status = match &e {
                FailureReport::UnsupportedClass { .. } => Exit::Ok,
                e if e.is_inconclusive() => Exit::Inconclusive,
                _ => Exit::Mismatch,
            };
            text.push_str(&format!("no cycle: {e}\n"));
            result["failure"] = json!(e);
            return Ok(Output { status, result, text });
        }
    };
    let cert = CycleCertificate::for_graph(&g, built.cycle.order());
    if let Some(path) = a.cert_out {
        write_file(path, &cert.to_json())?;
    }
    result["method"] = json!(built.method);
    result["steps"] = json!(built.steps);
    result["cycle"] = json!(cert);
    if a.dot {
        text = to_dot(&g, Some(&built.cycle.edge_ids(&g)));
    } else {
        text.push_str(&format!(
            "method {:?}, {} steps, cycle verified: {}\n{}\n",
            built.method,
            built.steps.map_or("-".to_string(), |s| s.to_string()),
            cert.verified,
            built.cycle.order().join(" ")
        ));
    }
    let status = if cert.verified { Exit::Ok } else { Exit::Mismatch };
    Ok(Output { status, result, text })
}

fn cycle_graph(order: &[String]) -> Result<Graph, Failure> {
    let mut g = Graph::with_vertices(order.iter().cloned()).map_err(|e| usage(e.to_string()))?;
    for k in 0..order.len() {
        g.add_edge_ids(k, (k + 1) % order.len()).map_err(|e| usage(e.to_string()))?;
    }
    Ok(g)
}

fn cmd_ist(inputs: &mut Inputs, cycle: &Path, root: &str, graph: Option<&Path>) -> Result<Output, Failure> {
    let cert = inputs.certificate(cycle)?;
    let g = match graph {
        Some(path) => inputs.graph(path)?,
        None => cycle_graph(&cert.order)?,
    };
    let cycle = match HamCycle::verified(&g, &cert.order) {
        Ok(c) => c,
        Err(defect) => {
            return Ok(Output {
                status: Exit::Mismatch,
                result: json!({ "verified": false, "defect": defect.to_string() }),
                text: format!("cycle does not verify: {defect}\n"),
            })
        }
    };
    let pair = build_ists(&cycle, root).map_err(|e| usage(e.to_string()))?;
    let report = check_independence(&pair, &g);
    let independent = report.independent();
    let result = json!({
        "root": pair.root,
        "t1": pair.t1,
        "t2": pair.t2,
        "omitted_edge_1": pair.omitted_edge_1,
        "omitted_edge_2": pair.omitted_edge_2,
        "independent": independent,
        "edge_disjoint": report.edge_disjoint,
        "report": report,
    });
    let text = format!(
        "root {root}: t1 omits {}-{}, t2 omits {}-{}; independent: {independent}, edge-disjoint: {}\n",
        pair.omitted_edge_1.0, pair.omitted_edge_1.1, pair.omitted_edge_2.0, pair.omitted_edge_2.1, report.edge_disjoint
    );
    let status = if independent { Exit::Ok } else { Exit::Mismatch };
    Ok(Output { status, result, text })
}

fn cmd_verify(inputs: &mut Inputs, input: &Path, cycle: &Path) -> Result<Output, Failure> {
    let g = inputs.graph(input)?;
    let cert = inputs.certificate(cycle)?;
    let hash_matches = cert.graph_hash == g.content_hash();
    let defect = check_hamiltonian_cycle(&g, &cert.order).err();
    let ok = hash_matches && defect.is_none();
    let result = json!({
        "hamiltonian_cycle": defect.is_none(),
        "defect": defect.as_ref().map(|d| d.to_string()),
        "graph_hash_matches": hash_matches,
    });
    let text = match (&defect, hash_matches) {
        (None, true) => "cycle verified\n".to_string(),
        (None, false) => "cycle verified, but the certificate names a different graph hash\n".to_string(),
        (Some(d), _) => format!("not a Hamiltonian cycle: {d}\n"),
    };
    let status = if ok { Exit::Ok } else { Exit::Mismatch };
    Ok(Output { status, result, text })
}

fn cmd_export(
    inputs: &mut Inputs,
    input: &Path,
    format: Format,
    cycle: Option<&Path>,
    out: Option<&Path>,
) -> Result<Output, Failure> {
    let g = inputs.graph(input)?;
    let highlight = match cycle {
        Some(path) => {
            let cert = inputs.certificate(path)?;
            let c = HamCycle::verified(&g, &cert.order).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Some(c.edge_ids(&g))
        }
        None => None,
    };
    let text = match format {
        Format::Dot => to_dot(&g, highlight.as_deref()),
        Format::EdgeList => to_edge_list(&g),
        Format::Canonical => canonical_form(&g),
    };
    let mut result = json!({ "graph_hash": g.content_hash() });
    match out {
        Some(path) => {
            write_file(path, &text)?;
            result["out"] = json!(path.display().to_string());
            Ok(Output::ok(result, format!("wrote {}\n", path.display())))
        }
        None => {
            result["text"] = json!(text);
            Ok(Output::ok(result, text))
        }
    }
}

fn cmd_reproduce(budget: Budget, tamper: bool) -> Output {
    let r = if tamper {
        reproduce_with(&|p| bowtie_otis(p).without_edges(&[0]), budget)
    } else {
        reproduce(budget)
    };
    let mut text = String::new();
    for c in &r.checks {
        text.push_str(&format!(
            "{:<4} {:<30} expected {} got {}\n",
            if c.ok { "ok" } else { "FAIL" },
            c.name,
            c.expected,
            c.actual
        ));
    }
    text.push_str(&format!("degree-5 vertices of OTIS(BF(4,4)): {}\n", r.degree_five_bf44.join(" ")));
    Output {
        status: if r.ok() { Exit::Ok } else { Exit::Mismatch },
        result: json!(r),
        text,
    }
}

fn cmd_sweep(max_base: usize, budget: Budget) -> Result<Output, Failure> {
    if max_base < 5 {
        return Err(usage("--max-base must be at least 5"));
    }
    let threads = match std::env::var("OTISHAM_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| usage(format!("OTISHAM_THREADS must be a positive integer, got {v:?}")))?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| usage(e.to_string()))?;
    let s = pool.install(|| sweep(max_base, budget));
    let mut text = String::new();
    for it in &s.items {
        let outcome = serde_json::to_value(it.outcome).expect("serializes");
        text.push_str(&format!(
            "BF({},{}) {:<17} {:>4} vertices  {:<12} {}\n",
            it.m,
            it.n,
            it.class.to_string(),
            it.vertices,
            outcome.as_str().unwrap_or_default(),
            it.detail.as_deref().unwrap_or_default()
        ));
    }
    text.push_str(&format!(
        "pass {} unsupported {} inconclusive {} fail {}\n",
        s.pass, s.unsupported, s.inconclusive, s.fail
    ));
    let status = if s.fail > 0 {
        Exit::Mismatch
    } else if s.items.iter().any(|it| it.outcome == Outcome::Inconclusive) {
        Exit::Inconclusive
    } else {
        Exit::Ok
    };
    Ok(Output {
        status,
        result: json!(s),
        text,
    })
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Output, Failure> {
    match &cli.cmd {
        Cmd::Gen { kind } => cmd_gen(kind),
        Cmd::Otis { input, out } => cmd_otis(inputs, input, out),
        Cmd::Decide {
            input,
            seed,
            budget,
            parallel_root,
            cert_out,
        } => cmd_decide(
            inputs,
            input,
            seed.as_deref(),
            budget.budget(),
            *parallel_root,
            cert_out.as_deref(),
        ),
        Cmd::RefuteCount { input } => cmd_refute_count(inputs, input),
        Cmd::HamBuild {
            m,
            n,
            emit_key_edges,
            dot,
            cert_out,
            budget,
        } if !(*dot && cli.json) => cmd_ham_build(HamBuildArgs {
            m: *m,
            n: *n,
            emit_key_edges: *emit_key_edges,
            dot: *dot,
            cert_out: cert_out.as_deref(),
            budget: budget.budget(),
        }),
        Cmd::HamBuild { .. } => Err(usage("--dot and --json are exclusive")),
        Cmd::Ist { cycle, root, graph } => cmd_ist(inputs, cycle, root, graph.as_deref()),
        Cmd::Verify { input, cycle } => cmd_verify(inputs, input, cycle),
        Cmd::Export {
            input,
            format,
            cycle,
            out,
        } => cmd_export(inputs, input, *format, cycle.as_deref(), out.as_deref()),
        Cmd::Reproduce { budget, tamper } => Ok(cmd_reproduce(budget.budget(), *tamper)),
        Cmd::Sweep { max_base, budget } => cmd_sweep(*max_base, budget.budget()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage.code() as u8 } else { 0 });
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = run(&cli, &mut inputs);
    let wall = start.elapsed().as_millis() as u64;
    let mut report = RunReport::new(std::env::args().skip(1).collect());
    report.inputs = inputs.0;
    if cli.timings {
        report.timings_ms = Some(BTreeMap::from([("wall".to_string(), wall)]));
    }
    let status = match outcome {
        Ok(out) => {
            report.status = out.status;
            report.result = out.result;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", out.text);
                if cli.timings {
                    eprintln!("wall {wall} ms");
                }
            }
            out.status
        }
        Err(Failure(status, msg)) => {
            report.status = status;
            report.result = json!({ "error": msg });
            if cli.json {
                println!("{}", report.to_json());
            }
            eprintln!("error: {msg}");
            status
        }
    };
    ExitCode::from(status.code() as u8)
}
