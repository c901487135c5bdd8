//! `graphlim` — reproducible graph-limit experiments from the command line.
//!
//! Deterministic by construction: identical invocations (including `--seed`)
//! produce byte-identical output. Exit codes: 0 success, 1 runtime failure,
//! 2 usage error, 3 size/work bound exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use graphlim::algebra::{self, DensityTarget};
use graphlim::canon;
use graphlim::cutdist;
use graphlim::energy;
use graphlim::gen;
use graphlim::graph::{
    parse_simple_edge_list, write_simple_edge_list, Multigraph, SimpleGraph, WeightedGraph,
};
use graphlim::graphon::{self, Builtin, Graphon, StepGraphon};
use graphlim::homcount;
use graphlim::regularity::{self, SamplingOracle};
use graphlim::sampling::{self, CatalogPattern, SampleDistribution};
use graphlim::{checks, Error};

const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    "+",
    env!("BUILD_HASH")
);

// ---------------------------------------------------------------------------
// Command grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(name = "graphlim", version = VERSION, about = "Graph-limit toolkit: densities, graphons, cut metrics, regularity, energies, graph algebras, sampling")]
struct Cli {
    /// Cap the worker-thread pool (results do not depend on this).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Run a numbered verification experiment (1..=13, or "all"); exits
    /// nonzero if the experiment fails.
    #[arg(long, value_name = "ID")]
    paper_check: Option<String>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a builtin graph family and write it as an edge list.
    Generate(GenerateArgs),
    /// Exact homomorphism / injective / induced counts of a pattern.
    Count(PatternGraphArgs),
    /// Exact homomorphism / injective / induced density of a pattern.
    Density(PatternGraphArgs),
    /// Densities in graphons (exact for step functions, Monte Carlo
    /// otherwise) and W-random graph sampling.
    Graphon(GraphonArgs),
    /// Cut distances between two graphs.
    Dist(DistArgs),
    /// Oracle-driven weak regularity partition with quality diagnostics.
    Regularity(RegularityArgs),
    /// Max-cut, energy sandwiches, and ground-state checks.
    Energy(EnergyArgs),
    /// Graph-algebra certificates and connection matrices.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Subgraph / neighborhood sample distributions vs. their exact laws.
    Sample(SampleArgs),
    /// Density convergence tables for growing graph families.
    Converge(ConvergeArgs),
    /// Quasirandomness or density-inequality batteries.
    #[command(subcommand)]
    Battery(BatteryCmd),
}

#[derive(Args)]
struct GenerateArgs {
    /// Family: empty | complete | complete-bipartite | cycle | path | grid |
    /// turan | paley | threshold | er | uniform-attachment |
    /// prefix-attachment
    #[arg(long)]
    family: String,
    /// Node count (first dimension for grid / complete-bipartite).
    #[arg(long)]
    n: Option<usize>,
    /// Second dimension (grid columns, second bipartite side).
    #[arg(long)]
    m: Option<usize>,
    /// Edge probability for `er`; the (prime) modulus for `paley`.
    #[arg(long)]
    p: Option<f64>,
    /// Part count for `turan`.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PatternGraphArgs {
    /// Kind: hom | inj | ind (for `density`: t | tinj | tind).
    #[arg(long, default_value = "t")]
    kind: String,
    /// Pattern graph: edge-list file or builtin name (edge, triangle, k4,
    /// c5, p4, star3, k3,3, ...).
    #[arg(long = "F")]
    f: String,
    /// Host graph: edge-list file or builtin name.
    #[arg(long = "G")]
    g: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphonArgs {
    /// Graphon: constant:<p> | ua | threshold | pfx | pfx-naive | bitparity
    /// | step:<file.json> | polysign:<file.json> | graph:<graph spec>
    #[arg(long = "W")]
    w: String,
    /// Pattern whose density to evaluate.
    #[arg(long = "F")]
    f: Option<String>,
    /// Induced density instead of plain density.
    #[arg(long)]
    induced: bool,
    /// Monte Carlo sample count (required for non-step graphons).
    #[arg(long)]
    samples: Option<usize>,
    /// Sample a W-random graph on this many nodes (written as edge list).
    #[arg(long, value_name = "N")]
    wrandom: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long = "G")]
    g: String,
    #[arg(long = "H")]
    h: String,
    /// Also report the exact sampling distance up to this subset size.
    #[arg(long, value_name = "K")]
    sample_k: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RegularityArgs {
    #[arg(long = "G")]
    g: String,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long)]
    seed: u64,
    /// Also run the implicit max-cut pipeline on the same oracle.
    #[arg(long)]
    maxcut: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnergyArgs {
    #[arg(long = "G")]
    g: String,
    /// Target weights as JSON {"n", "alpha", "beta"} for restricted
    /// multiway-cut vs. free-energy comparisons.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Seed for local search when the graph exceeds the exact bound.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Verify a square-sum certificate by exact rational expansion.
    VerifyCertificate {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connection submatrix of a graph parameter on the k-labeled basis:
    /// eigenvalues, positive semidefiniteness, rank.
    Connmatrix {
        /// Parameter: hom:<pattern spec> | pm | t:<step graphon spec>
        #[arg(long)]
        param: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Basis contains all simple graphs up to this many nodes.
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the built-in triangle-bound certificate as JSON.
    Goodman {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SampleArgs {
    /// sigma (k-node induced subgraph classes) or rho (radius-r ball
    /// classes under a degree bound).
    #[arg(long)]
    kind: String,
    #[arg(long = "G")]
    g: String,
    /// Subset size for sigma.
    #[arg(long)]
    k: Option<usize>,
    /// Ball radius for rho.
    #[arg(long)]
    r: Option<usize>,
    /// Degree bound for rho.
    #[arg(long)]
    d: Option<usize>,
    /// Empirical trial count; omit for the exact/reconstructed comparison.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Stochastic family: er | uniform-attachment | prefix-attachment.
    #[arg(long)]
    family: String,
    /// Edge probability (er only).
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated graph sizes, e.g. 500,1000,2000.
    #[arg(long)]
    sizes: String,
    /// Comma-separated catalog patterns: edge,P3,triangle,P4,C4,star3.
    #[arg(long = "F")]
    f: String,
    /// Independent graphs per size.
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BatteryCmd {
    /// Quasirandomness battery at density p: degrees, codegrees, catalog
    /// homomorphism ratios, 4-cycles, random subsets.
    Quasi {
        #[arg(long = "G")]
        g: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical density inequalities on a graph, step graphon, or Monte
    /// Carlo graphon target.
    Inequalities {
        #[arg(long = "G")]
        g: Option<String>,
        #[arg(long = "W")]
        w: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Bipartite pattern for the (conjectural) Sidorenko check.
        #[arg(long)]
        sidorenko: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

// ---------------------------------------------------------------------------
// Error plumbing
// ---------------------------------------------------------------------------

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Usage(_) => 2,
        CliError::Lib(Error::SizeBound { .. }) | CliError::Lib(Error::WorkBound { .. }) => 3,
        CliError::Lib(
            Error::InvalidParam(_)
            | Error::Parse(_)
            | Error::NodeOutOfRange { .. }
            | Error::LoopRejected(_)
            | Error::LabelMismatch { .. }
            | Error::BadLabeling(_)
            | Error::NotSimple(_)
            | Error::BadPartition(_),
        ) => 2,
        CliError::Lib(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("usage error: {m}"),
                CliError::Lib(err) => eprintln!("error: {err}"),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(id) = &cli.paper_check {
        if cli.command.is_some() {
            return Err(usage("--paper-check cannot be combined with a subcommand"));
        }
        return paper_check(id);
    }
    let Some(command) = cli.command else {
        return Err(usage("no command given; see --help"));
    };
    match command {
        Command::Generate(a) => cmd_generate(a)?,
        Command::Count(a) => cmd_count(a, true)?,
        Command::Density(a) => cmd_count(a, false)?,
        Command::Graphon(a) => cmd_graphon(a)?,
        Command::Dist(a) => cmd_dist(a)?,
        Command::Regularity(a) => cmd_regularity(a)?,
        Command::Energy(a) => cmd_energy(a)?,
        Command::Algebra(a) => return cmd_algebra(a),
        Command::Sample(a) => cmd_sample(a)?,
        Command::Converge(a) => cmd_converge(a)?,
        Command::Battery(a) => cmd_battery(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

/// A graph argument: a path to an edge-list file, or a builtin pattern name
/// (`edge`, `triangle`, `k5`, `c6`, `p4`, `star3`, `k3,3`).
fn parse_graph_spec(spec: &str) -> Result<SimpleGraph, CliError> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)?;
        return Ok(parse_simple_edge_list(&text)?);
    }
    let s = spec.to_ascii_lowercase();
    let num = |t: &str| -> Result<usize, CliError> {
        t.parse::<usize>()
            .map_err(|_| usage(format!("bad number in graph spec '{spec}'")))
    };
    let g = match s.as_str() {
        "edge" | "k2" => gen::complete(2),
        "triangle" | "k3" => gen::complete(3),
        _ => {
            if let Some(rest) = s.strip_prefix("star") {
                let leaves = num(rest)?;
                gen::complete_bipartite(1, leaves)
            } else if let Some(rest) = s.strip_prefix('k') {
                if let Some((a, b)) = rest.split_once(',') {
                    gen::complete_bipartite(num(a)?, num(b)?)
                } else {
                    gen::complete(num(rest)?)
                }
            } else if let Some(rest) = s.strip_prefix('c') {
                gen::cycle(num(rest)?)
            } else if let Some(rest) = s.strip_prefix('p') {
                gen::path(num(rest)?)
            } else {
                return Err(usage(format!(
                    "graph spec '{spec}' is neither a file nor a builtin name"
                )));
            }
        }
    };
    Ok(g)
}

enum WSpec {
    Step(StepGraphon),
    Builtin(Builtin),
}

impl WSpec {
    fn as_graphon(&self) -> &dyn Graphon {
        match self {
            WSpec::Step(s) => s,
            WSpec::Builtin(b) => b,
        }
    }
}

fn parse_graphon_spec(spec: &str) -> Result<WSpec, CliError> {
    if let Some(p) = spec.strip_prefix("constant:") {
        let p: f64 = p
            .parse()
            .map_err(|_| usage(format!("bad constant graphon '{spec}'")))?;
        return Ok(WSpec::Step(StepGraphon::constant(p)?));
    }
    if let Some(path) = spec.strip_prefix("step:") {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(Error::from)?;
        let masses = json_f64_array(&v["masses"], "masses")?;
        let values = json_f64_array(&v["values"], "values")?;
        return Ok(WSpec::Step(StepGraphon::new(masses, values)?));
    }
    if let Some(path) = spec.strip_prefix("polysign:") {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(Error::from)?;
        let rows = v
            .as_array()
            .ok_or_else(|| usage("polysign file must be a JSON array of arrays"))?;
        let coeffs = rows
            .iter()
            .map(|r| json_f64_array(r, "polysign row"))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(WSpec::Builtin(Builtin::PolySign(coeffs)));
    }
    if let Some(gspec) = spec.strip_prefix("graph:") {
        let g = parse_graph_spec(gspec)?;
        return Ok(WSpec::Step(StepGraphon::from_simple(&g)?));
    }
    match spec {
        "ua" | "uniform-attachment" => Ok(WSpec::Builtin(Builtin::UniformAttachmentLimit)),
        "threshold" => Ok(WSpec::Builtin(Builtin::ThresholdLimit)),
        "pfx" | "prefix-attachment" => Ok(WSpec::Builtin(Builtin::PrefixAttachmentLimit)),
        "pfx-naive" => Ok(WSpec::Builtin(Builtin::PrefixAttachmentNaive)),
        "bitparity" => Ok(WSpec::Builtin(Builtin::BitParity)),
        _ => Err(usage(format!("unknown graphon spec '{spec}'"))),
    }
}

fn json_f64_array(v: &serde_json::Value, what: &str) -> Result<Vec<f64>, CliError> {
    v.as_array()
        .ok_or_else(|| usage(format!("{what} must be a JSON array")))?
        .iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| usage(format!("{what} must contain numbers")))
        })
        .collect()
}

fn parse_weighted_json(path: &Path) -> Result<WeightedGraph, CliError> {
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path)?).map_err(Error::from)?;
    let n = v["n"]
        .as_u64()
        .ok_or_else(|| usage("weighted graph JSON needs an integer field 'n'"))? as usize;
    let alpha = json_f64_array(&v["alpha"], "alpha")?;
    let beta = json_f64_array(&v["beta"], "beta")?;
    Ok(WeightedGraph::new(n, alpha, beta)?)
}

fn parse_catalog_pattern(name: &str) -> Result<CatalogPattern, CliError> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "edge" | "k2" => CatalogPattern::K2,
        "p3" | "path3" => CatalogPattern::P3,
        "triangle" | "k3" => CatalogPattern::K3,
        "p4" | "path4" => CatalogPattern::P4,
        "c4" => CatalogPattern::C4,
        "star3" | "k13" => CatalogPattern::Star3,
        _ => {
            return Err(usage(format!(
                "unknown catalog pattern '{name}' (edge, P3, triangle, P4, C4, star3)"
            )))
        }
    })
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_json(out: &Option<PathBuf>, v: &serde_json::Value) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(Error::from)?;
    s.push('\n');
    emit(out, &s)
}

/// Compact single-line description of a multigraph: `n=3;0-1,0-1,1-2`
/// (repeated pairs encode multiplicity).
fn describe_multigraph(g: &Multigraph) -> String {
    let mut parts = vec![];
    for ((u, v), m) in g.edge_iter() {
        for _ in 0..m {
            parts.push(format!("{u}-{v}"));
        }
    }
    format!("n={};{}", g.n(), parts.join(","))
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_generate(a: GenerateArgs) -> Result<(), CliError> {
    let need_n = || a.n.ok_or_else(|| usage("this family requires --n"));
    let need_seed = || a.seed.ok_or_else(|| usage("this family is stochastic; provide --seed"));
    let g = match a.family.as_str() {
        "empty" => gen::empty(need_n()?),
        "complete" => gen::complete(need_n()?),
        "complete-bipartite" => {
            let m = a.m.ok_or_else(|| usage("complete-bipartite requires --m"))?;
            gen::complete_bipartite(need_n()?, m)
        }
        "cycle" => gen::cycle(need_n()?),
        "path" => gen::path(need_n()?),
        "grid" => {
            let m = a.m.ok_or_else(|| usage("grid requires --m (columns)"))?;
            gen::grid(need_n()?, m)
        }
        "turan" => {
            let r = a.r.ok_or_else(|| usage("turan requires --r (part count)"))?;
            gen::turan(need_n()?, r)?
        }
        "paley" => {
            let p = a.p.ok_or_else(|| usage("paley requires --p (prime)"))?;
            if p.fract() != 0.0 || p < 2.0 {
                return Err(usage("paley's --p must be a prime integer"));
            }
            gen::paley(p as usize)?
        }
        "threshold" => gen::threshold(need_n()?),
        "er" => {
            let p = a.p.ok_or_else(|| usage("er requires --p (edge probability)"))?;
            gen::er(need_n()?, p, need_seed()?)?
        }
        "uniform-attachment" => gen::uniform_attachment(need_n()?, need_seed()?),
        "prefix-attachment" => gen::prefix_attachment(need_n()?, need_seed()?),
        other => return Err(usage(format!("unknown family '{other}'"))),
    };
    emit(&a.out, &write_simple_edge_list(&g))
}

fn cmd_count(a: PatternGraphArgs, counts: bool) -> Result<(), CliError> {
    let f = parse_graph_spec(&a.f)?;
    let g = parse_graph_spec(&a.g)?;
    let ng = g.n() as f64;
    let falling: f64 = (0..f.n()).map(|i| ng - i as f64).product();
    let (kind, density, scale) = match a.kind.as_str() {
        "t" | "hom" => ("hom", homcount::t(&f, &g)?, ng.powi(f.n() as i32)),
        "tinj" | "inj" => ("inj", homcount::t_inj(&f, &g)?, falling),
        "tind" | "ind" => ("ind", homcount::t_ind(&f, &g)?, falling),
        other => {
            return Err(usage(format!(
                "unknown kind '{other}' (t/tinj/tind, or hom/inj/ind)"
            )))
        }
    };
    let mut s = String::new();
    if counts {
        writeln!(s, "kind,F,G,count,density").unwrap();
        writeln!(s, "{kind},{},{},{},{}", a.f, a.g, (density * scale).round(), density).unwrap();
    } else {
        writeln!(s, "kind,F,G,value").unwrap();
        let name = match kind {
            "hom" => "t",
            "inj" => "tinj",
            _ => "tind",
        };
        writeln!(s, "{name},{},{},{}", a.f, a.g, density).unwrap();
    }
    emit(&a.out, &s)
}

fn cmd_graphon(a: GraphonArgs) -> Result<(), CliError> {
    let w = parse_graphon_spec(&a.w)?;

    if let Some(n) = a.wrandom {
        let seed = a
            .seed
            .ok_or_else(|| usage("--wrandom is stochastic; provide --seed"))?;
        let sampled = graphon::w_random(n, w.as_graphon(), seed)?;
        return emit(&a.out, &write_simple_edge_list(&sampled.graph));
    }

    let fspec = a
        .f
        .as_ref()
        .ok_or_else(|| usage("provide --F <pattern> or --wrandom <n>"))?;
    let f = parse_graph_spec(fspec)?;

    let mut s = String::new();
    writeln!(s, "W,F,mode,value,stderr,samples").unwrap();
    match (&w, a.samples) {
        (WSpec::Step(step), None) => {
            let value = if a.induced {
                step.t_ind(&f)?
            } else {
                step.t(&f.to_multigraph())?
            };
            let mode = if a.induced { "exact-induced" } else { "exact" };
            writeln!(s, "{},{},{mode},{},,", a.w, fspec, value).unwrap();
        }
        (_, Some(samples)) => {
            let seed = a
                .seed
                .ok_or_else(|| usage("Monte Carlo evaluation is stochastic; provide --seed"))?;
            let est = if a.induced {
                graphon::t_ind_mc(&f, w.as_graphon(), samples, seed)?
            } else {
                graphon::t_mc(&f, w.as_graphon(), samples, seed)?
            };
            let mode = if a.induced { "mc-induced" } else { "mc" };
            writeln!(
                s,
                "{},{},{mode},{},{},{}",
                a.w, fspec, est.value, est.stderr, est.samples
            )
            .unwrap();
        }
        (WSpec::Builtin(_), None) => {
            return Err(usage(
                "this graphon has no exact evaluator; provide --samples and --seed",
            ))
        }
    }
    emit(&a.out, &s)
}

fn cmd_dist(a: DistArgs) -> Result<(), CliError> {
    let g = parse_graph_spec(&a.g)?;
    let h = parse_graph_spec(&a.h)?;
    let mut s = String::new();
    writeln!(s, "stat,value,exact").unwrap();
    if g.n() == h.n() {
        let aligned = cutdist::d_cut_aligned(&g, &h)?;
        writeln!(s, "cut_norm_aligned,{},{}", aligned.value, aligned.exact).unwrap();
    }
    let bracket = cutdist::delta_cut_bracket(&g, &h, a.seed)?;
    writeln!(s, "delta_cut_lower,{},true", bracket.lower).unwrap();
    writeln!(s, "delta_cut_upper,{},{}", bracket.upper, bracket.upper_exact).unwrap();
    if let Some(k) = a.sample_k {
        let ds = cutdist::d_sample(&g, &h, k)?;
        writeln!(s, "sample_distance_k{k},{ds},true").unwrap();
    }
    emit(&a.out, &s)
}

fn cmd_regularity(a: RegularityArgs) -> Result<(), CliError> {
    let g = parse_graph_spec(&a.g)?;
    let mut oracle = SamplingOracle::from_graph(&g, a.seed)?;
    let reps = regularity::build_reps(&mut oracle, a.eps, a.seed.wrapping_add(1))?;
    let rep_nodes: Vec<usize> = reps
        .handles
        .iter()
        .map(|&h| oracle.node_of(h).expect("concrete oracle"))
        .collect();
    let part = regularity::voronoi_partition(&g, &rep_nodes)?;
    let quality = regularity::regularity_quality(&g, &part)?;
    let quotient = regularity::quotient(&g, &part)?;
    let class_weights: Vec<f64> = (0..quotient.n()).map(|i| quotient.alpha(i)).collect();
    let class_densities: Vec<f64> = (0..quotient.n())
        .flat_map(|i| (0..quotient.n()).map(move |j| (i, j)))
        .map(|(i, j)| quotient.beta(i, j))
        .collect();

    let mut doc = json!({
        "eps": a.eps,
        "seed": a.seed,
        "n": g.n(),
        "representatives": rep_nodes,
        "class_weights": class_weights,
        "class_densities": class_densities,
        "dcut": quality.dcut,
        "dcut_exact": quality.dcut_exact,
        "weak_regularity_bound": (4.0 * a.eps).powf(0.25),
        "class_diameters": quality.diameters,
        "exceptional_fraction": quality.exceptional_fraction,
        "residual_diameter": quality.residual_diameter,
        "certified_upper_bound": quality.upper_bound,
        "oracle_queries": oracle.queries(),
    });

    if a.maxcut {
        let mut oracle2 = SamplingOracle::from_graph(&g, a.seed.wrapping_add(2))?;
        let pipe = regularity::maxcut_pipeline(&mut oracle2, a.eps, a.seed.wrapping_add(3))?;
        doc["maxcut_pipeline"] = json!({
            "estimate": pipe.estimate,
            "shares": pipe.shares,
            "left": pipe.left,
            "right": pipe.right,
            "class_weights": pipe.class_weights,
            "class_densities": pipe.class_densities,
        });
    }
    emit_json(&a.out, &doc)
}

fn cmd_energy(a: EnergyArgs) -> Result<(), CliError> {
    let g = parse_graph_spec(&a.g)?;
    let cut = if g.n() <= energy::MAX_EXACT_MAXCUT_NODES {
        energy::maxcut_exact(&g)?
    } else {
        let seed = a.seed.ok_or_else(|| {
            usage(format!(
                "graphs over {} nodes use randomized local search; provide --seed",
                energy::MAX_EXACT_MAXCUT_NODES
            ))
        })?;
        energy::maxcut_local(&g, 16, seed)
    };
    let mut doc = json!({
        "n": g.n(),
        "edges": g.edge_iter().count(),
        "maxcut_density": cut.density,
        "maxcut_exact": cut.exact,
    });
    match energy::cut_hom_sandwich(&g) {
        Ok(s) => {
            doc["sandwich"] = json!({
                "maxcut": s.maxcut,
                "log2_hom_per_n2": s.log2_hom_per_n2,
                "upper": s.upper,
            });
        }
        Err(Error::SizeBound { .. }) | Err(Error::WorkBound { .. }) => {
            doc["sandwich"] = serde_json::Value::Null;
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(path) = &a.target {
        let h = parse_weighted_json(path)?;
        let gap = energy::rmcut_hom_gap(&g, &h)?;
        let rq = energy::right_quantities(&g, &h)?;
        doc["target"] = json!({
            "log_hom_per_n2": gap.log_hom_per_n2,
            "half_restricted_cut": gap.half_cut,
            "gap": gap.gap,
            "entropy_per_node": rq.u,
            "dissimilarity": rq.d_h,
        });
    }
    emit_json(&a.out, &doc)
}

fn cmd_algebra(cmd: AlgebraCmd) -> Result<ExitCode, CliError> {
    match cmd {
        AlgebraCmd::Goodman { out } => {
            let cert = algebra::goodman_certificate()?;
            emit(&out, &(cert.to_json() + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        AlgebraCmd::VerifyCertificate { cert, out } => {
            let text = std::fs::read_to_string(&cert)?;
            let cert = algebra::Certificate::from_json(&text)?;
            let report = algebra::verify_certificate(&cert)?;
            let doc = json!({
                "matches": report.matches,
                "difference_terms": report.difference_terms,
                "computed": algebra::QuantumGraphRepr::from_quantum(&report.computed),
                "target": algebra::QuantumGraphRepr::from_quantum(&report.target),
            });
            emit_json(&out, &doc)?;
            Ok(if report.matches {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        AlgebraCmd::Connmatrix {
            param,
            k,
            max_n,
            out,
        } => {
            let basis = canon::enumerate_klabeled_simple(k, max_n)?;
            let m = if param == "pm" {
                algebra::connection_submatrix(
                    |g| Ok(algebra::perfect_matchings(g)? as f64),
                    k,
                    &basis,
                )?
            } else if let Some(spec) = param.strip_prefix("hom:") {
                let target = WeightedGraph::from_simple(&parse_graph_spec(spec)?);
                algebra::connection_submatrix(|g| homcount::hom_weighted(g, &target), k, &basis)?
            } else if let Some(spec) = param.strip_prefix("t:") {
                match parse_graphon_spec(spec)? {
                    WSpec::Step(step) => {
                        algebra::connection_submatrix(move |g| step.t(g), k, &basis)?
                    }
                    WSpec::Builtin(_) => {
                        return Err(usage(
                            "t:<spec> needs an exactly evaluable (step) graphon",
                        ))
                    }
                }
            } else {
                return Err(usage(format!(
                    "unknown parameter '{param}' (pm, hom:<pattern>, t:<step graphon>)"
                )));
            };
            let psd = m.psd_rank(1e-9)?;
            let doc = json!({
                "param": param,
                "k": k,
                "max_n": max_n,
                "basis_size": basis.len(),
                "is_psd": psd.is_psd,
                "min_eigenvalue": psd.min_eigenvalue,
                "rank": psd.rank,
                "eigenvalues": psd.eigenvalues,
            });
            emit_json(&out, &doc)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn distribution_rows(
    s: &mut String,
    exact: &SampleDistribution,
    other: Option<&SampleDistribution>,
) {
    for (form, &p) in &exact.probs {
        let rep = &exact.reps[form];
        let q = other.map(|o| o.prob(form));
        writeln!(
            s,
            "class,{},{},{}",
            describe_multigraph(rep),
            p,
            q.map(|v| v.to_string()).unwrap_or_default()
        )
        .unwrap();
    }
    // classes seen empirically but impossible exactly would be a bug; still,
    // report any extra mass so the CSV always accounts for both sides
    if let Some(o) = other {
        for (form, &p) in &o.probs {
            if !exact.probs.contains_key(form) {
                writeln!(s, "class,{},0,{}", describe_multigraph(&o.reps[form]), p).unwrap();
            }
        }
    }
}

fn cmd_sample(a: SampleArgs) -> Result<(), CliError> {
    let g = parse_graph_spec(&a.g)?;
    let mut s = String::new();
    writeln!(s, "row,class,p_exact,p_other").unwrap();
    match a.kind.as_str() {
        "sigma" => {
            let k = a.k.ok_or_else(|| usage("sigma requires --k"))?;
            let exact = sampling::sigma_exact(&g, k)?;
            let emp = match a.trials {
                Some(trials) => {
                    let seed = a
                        .seed
                        .ok_or_else(|| usage("empirical sampling requires --seed"))?;
                    Some(sampling::sigma_empirical(&g, k, trials, seed)?)
                }
                None => None,
            };
            distribution_rows(&mut s, &exact, emp.as_ref());
            if let Some(e) = &emp {
                writeln!(s, "tv,,{},", sampling::total_variation(&exact, e)).unwrap();
            }
        }
        "rho" => {
            let r = a.r.ok_or_else(|| usage("rho requires --r"))?;
            let d = a.d.ok_or_else(|| usage("rho requires --d"))?;
            let exact = sampling::rho_exact(&g, r, d)?;
            let other = match a.trials {
                Some(trials) => {
                    let seed = a
                        .seed
                        .ok_or_else(|| usage("empirical sampling requires --seed"))?;
                    sampling::rho_empirical(&g, r, d, trials, seed)?
                }
                None => sampling::rho_from_counts(&g, r, d)?,
            };
            distribution_rows(&mut s, &exact, Some(&other));
            writeln!(s, "tv,,{},", sampling::total_variation(&exact, &other)).unwrap();
        }
        other => return Err(usage(format!("unknown sample kind '{other}' (sigma, rho)"))),
    }
    emit(&a.out, &s)
}

fn cmd_converge(a: ConvergeArgs) -> Result<(), CliError> {
    let sizes: Vec<usize> = a
        .sizes
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad size '{t}' in --sizes")))
        })
        .collect::<Result<_, _>>()?;
    let patterns: Vec<CatalogPattern> = a
        .f
        .split(',')
        .map(|t| parse_catalog_pattern(t.trim()))
        .collect::<Result<_, _>>()?;
    let family: Box<dyn Fn(usize, u64) -> graphlim::Result<SimpleGraph>> =
        match a.family.as_str() {
            "er" => {
                let p = a.p.ok_or_else(|| usage("er requires --p"))?;
                Box::new(move |n, seed| gen::er(n, p, seed))
            }
            "uniform-attachment" => Box::new(|n, seed| Ok(gen::uniform_attachment(n, seed))),
            "prefix-attachment" => Box::new(|n, seed| Ok(gen::prefix_attachment(n, seed))),
            other => {
                return Err(usage(format!(
                    "unknown stochastic family '{other}' (er, uniform-attachment, prefix-attachment)"
                )))
            }
        };
    let rows = sampling::convergence_diagnostic(&*family, &sizes, &patterns, a.seeds, a.seed)?;
    let mut s = String::new();
    writeln!(s, "n,pattern,mean,stderr,seeds").unwrap();
    for row in rows {
        writeln!(
            s,
            "{},{},{},{},{}",
            row.n, row.pattern, row.mean, row.stderr, row.seeds
        )
        .unwrap();
    }
    emit(&a.out, &s)
}

fn cmd_battery(cmd: BatteryCmd) -> Result<(), CliError> {
    match cmd {
        BatteryCmd::Quasi { g, p, seed, out } => {
            let graph = parse_graph_spec(&g)?;
            let r = sampling::quasirandom_battery(&graph, p, seed)?;
            let mut s = String::new();
            writeln!(s, "stat,value").unwrap();
            writeln!(s, "degree_deviation,{}", r.degree_deviation).unwrap();
            writeln!(s, "codegree_deviation,{}", r.codegree_deviation).unwrap();
            for (name, ratio) in &r.hom_ratios {
                writeln!(s, "hom_ratio_{name},{ratio}").unwrap();
            }
            writeln!(s, "hom_deviation,{}", r.hom_deviation).unwrap();
            writeln!(s, "c4_ratio,{}", r.c4_ratio).unwrap();
            writeln!(s, "subset_deviation,{}", r.subset_deviation).unwrap();
            writeln!(s, "max_deviation,{}", r.max_deviation()).unwrap();
            emit(&out, &s)
        }
        BatteryCmd::Inequalities {
            g,
            w,
            samples,
            seed,
            sidorenko,
            out,
        } => {
            let sid = match &sidorenko {
                Some(spec) => Some(parse_graph_spec(spec)?),
                None => None,
            };
            let graph;
            let wspec;
            let target = match (&g, &w) {
                (Some(gs), None) => {
                    graph = parse_graph_spec(gs)?;
                    DensityTarget::Graph(&graph)
                }
                (None, Some(ws)) => {
                    wspec = parse_graphon_spec(ws)?;
                    match (&wspec, samples) {
                        (WSpec::Step(step), None) => DensityTarget::Step(step),
                        (_, Some(samples)) => DensityTarget::Limit {
                            w: wspec.as_graphon(),
                            samples,
                            seed: seed.ok_or_else(|| {
                                usage("Monte Carlo evaluation is stochastic; provide --seed")
                            })?,
                        },
                        (WSpec::Builtin(_), None) => {
                            return Err(usage(
                                "this graphon has no exact evaluator; provide --samples and --seed",
                            ))
                        }
                    }
                }
                _ => return Err(usage("provide exactly one of --G or --W")),
            };
            let report = algebra::inequality_battery(&target, sid.as_ref())?;
            let mut s = String::new();
            writeln!(s, "name,lhs,rhs,margin,sigma,violated,conjectural").unwrap();
            for c in report {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    c.name,
                    c.lhs,
                    c.rhs,
                    c.margin,
                    c.sigma.map(|x| x.to_string()).unwrap_or_default(),
                    c.violated,
                    c.conjectural
                )
                .unwrap();
            }
            emit(&out, &s)
        }
    }
}

fn paper_check(id: &str) -> Result<ExitCode, CliError> {
    let ids: Vec<usize> = if id == "all" {
        (1..=checks::NUM_CHECKS).collect()
    } else {
        vec![id
            .parse::<usize>()
            .map_err(|_| usage(format!("--paper-check takes 1..={} or 'all'", checks::NUM_CHECKS)))?]
    };
    let mut all_pass = true;
    for i in ids {
        let r = checks::run_check(i)?;
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {:02} [{verdict}] {} — {}", r.id, r.name, r.details);
        all_pass &= r.pass;
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
