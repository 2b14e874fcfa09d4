use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bridgeness::community::{louvain_with_history, LouvainConfig};
use bridgeness::evaluation::{
    cumulative_ratio_curve, curve_advantage, node_report, smooth, RankingCurve, ReportColumn,
    DEFAULT_SMOOTHING_WINDOW,
};
use bridgeness::indicator::{global_indicator, inter_community_fraction};
use bridgeness::io::{
    load_edge_list, load_partition, write_edge_list, write_partition, Delimiter, EdgeListOptions,
    LoadedGraph,
};
use bridgeness::netgen::{generate, CommunitySizes, DegreeSpec, LfrConfig, SelectionRule};
use bridgeness::{
    bridgeness_bruteforce, locterm_by_degree, Centrality, CentralityResult, Partition,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod provenance;

use provenance::{sidecar, Provenance};

const BRUTEFORCE_WARN_NODES: usize = 2000;

#[derive(Debug, Parser)]
#[command(
    name = "bridgeness",
    version,
    about = "Bridgeness and betweenness centrality toolkit"
)]
struct Cli {
    /// Worker threads for centrality; defaults to available parallelism.
    #[arg(long, global = true, env = "BRIDGENESS_WORKERS", value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Betweenness, bridgeness and local term per node.
    Centrality(CentralityArgs),
    /// Community-based bridging indicator G per node.
    Indicator(IndicatorArgs),
    /// Louvain community detection.
    Communities(CommunitiesArgs),
    /// Benchmark network with planted communities.
    Generate(GenerateArgs),
    /// Ranking curves of bridgeness and betweenness against G.
    Evaluate(EvaluateArgs),
    /// Per-node table of G, community, bc, bridgeness and degree.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum DelimiterArg {
    Whitespace,
    Comma,
}

impl From<DelimiterArg> for Delimiter {
    fn from(d: DelimiterArg) -> Self {
        match d {
            DelimiterArg::Whitespace => Delimiter::Whitespace,
            DelimiterArg::Comma => Delimiter::Comma,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct GraphArgs {
    /// Edge list, one `src dst [weight]` per line.
    #[arg(long, short)]
    #[serde(skip)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = DelimiterArg::Whitespace)]
    delimiter: DelimiterArg,
    /// Require and validate a third weight column. Weights do not affect the scores.
    #[arg(long)]
    weighted: bool,
}

impl GraphArgs {
    fn load(&self, prov: &mut Provenance) -> Result<LoadedGraph> {
        let bytes = prov.read_input(&self.input)?;
        let options = EdgeListOptions {
            delimiter: self.delimiter.into(),
            has_weights: self.weighted,
            ..EdgeListOptions::default()
        };
        let loaded = load_edge_list(&bytes[..], options)
            .with_context(|| format!("cannot parse {}", self.input.display()))?;
        if loaded.self_loops_dropped > 0 {
            log::warn!("dropped {} self-loops", loaded.self_loops_dropped);
        }
        if loaded.duplicates_collapsed > 0 {
            log::warn!("collapsed {} duplicate edges", loaded.duplicates_collapsed);
        }
        Ok(loaded)
    }
}

fn read_partition(path: &Path, loaded: &LoadedGraph, prov: &mut Provenance) -> Result<Partition> {
    let bytes = prov.read_input(path)?;
    load_partition(&bytes[..], &loaded.table)
        .with_context(|| format!("cannot parse partition {}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Variant {
    /// Paths with both endpoints outside the neighborhood.
    Exact,
    /// Only sources outside the neighborhood are filtered.
    SiCompat,
    /// All-pairs reference implementation, cubic time.
    Bruteforce,
}

fn compute(g: &bridgeness::Graph, variant: Variant, workers: Option<u16>) -> CentralityResult {
    let runner = match workers {
        Some(w) => Centrality::new().workers(w.into()),
        None => Centrality::new(),
    };
    match variant {
        Variant::Exact => runner.bridgeness_exact(g),
        Variant::SiCompat => runner.bridgeness_si_compat(g),
        Variant::Bruteforce => {
            if g.node_count() > BRUTEFORCE_WARN_NODES {
                log::warn!(
                    "bruteforce variant on {} nodes needs O(n^3) time and O(n^2) memory",
                    g.node_count()
                );
            }
            bridgeness_bruteforce(g)
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct CentralityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Variant::Exact)]
    variant: Variant,
    /// CSV with columns `node_id,degree,bc,bridgeness,local`.
    #[arg(long, short)]
    #[serde(skip)]
    output: PathBuf,
    /// Also write the scores as JSON.
    #[arg(long)]
    #[serde(skip)]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct ScoreRecord<'a> {
    node_id: &'a str,
    degree: usize,
    bc: f64,
    bridgeness: f64,
    local: f64,
}

fn cmd_centrality(args: &CentralityArgs, workers: Option<u16>) -> Result<()> {
    let mut prov = Provenance::new("centrality", args, None)?;
    let loaded = args.graph.load(&mut prov)?;
    let g = &loaded.graph;
    let r = compute(g, args.variant, workers);

    let records: Vec<ScoreRecord> = (0..g.node_count())
        .map(|v| ScoreRecord {
            node_id: loaded.table.id(v),
            degree: g.neighbors(v).len(),
            bc: r.bc[v],
            bridgeness: r.bridgeness[v],
            local: r.local[v],
        })
        .collect();
    let mut csv = Vec::new();
    writeln!(csv, "node_id,degree,bc,bridgeness,local")?;
    for rec in &records {
        writeln!(
            csv,
            "{},{},{},{},{}",
            rec.node_id, rec.degree, rec.bc, rec.bridgeness, rec.local
        )?;
    }
    prov.write_output(&args.output, &csv)?;
    if let Some(path) = &args.json {
        prov.write_output(path, &serde_json::to_vec_pretty(&records)?)?;
    }
    prov.save(&sidecar(&args.output))?;

    println!("nodes: {}", g.node_count());
    println!("edges: {}", g.edge_count());
    if let Some(v) = argmax(&r.bc) {
        println!("max bc: {} ({})", loaded.table.id(v), r.bc[v]);
    }
    if let Some(v) = argmax(&r.bridgeness) {
        println!(
            "max bridgeness: {} ({})",
            loaded.table.id(v),
            r.bridgeness[v]
        );
    }
    Ok(())
}

/// First index of the maximum.
fn argmax(xs: &[f64]) -> Option<usize> {
    (0..xs.len()).reduce(|best, i| if xs[i] > xs[best] { i } else { best })
}

#[derive(Debug, Args, Serialize)]
struct IndicatorArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphArgs,
    /// CSV with `node_id,community` rows.
    #[arg(long, short)]
    #[serde(skip)]
    partition: PathBuf,
    /// CSV with columns `node_id,community,G`.
    #[arg(long, short)]
    #[serde(skip)]
    output: PathBuf,
}

fn indicator_csv(loaded: &LoadedGraph, p: &Partition, g_scores: &[f64]) -> Result<Vec<u8>> {
    let mut csv = Vec::new();
    writeln!(csv, "node_id,community,G")?;
    for (v, score) in g_scores.iter().enumerate() {
        writeln!(csv, "{},{},{}", loaded.table.id(v), p.label(v), score)?;
    }
    Ok(csv)
}

fn cmd_indicator(args: &IndicatorArgs) -> Result<()> {
    let mut prov = Provenance::new("indicator", args, None)?;
    let loaded = args.graph.load(&mut prov)?;
    let p = read_partition(&args.partition, &loaded, &mut prov)?;
    let g_scores = global_indicator(&loaded.graph, &p)?.g;
    prov.write_output(&args.output, &indicator_csv(&loaded, &p, &g_scores)?)?;
    prov.result(
        "inter_community_fraction",
        inter_community_fraction(&loaded.graph, &p)?,
    )?;
    prov.save(&sidecar(&args.output))?;
    println!("communities: {}", p.community_count());
    Ok(())
}

#[derive(Debug, Args, Serialize)]
struct CommunitiesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_passes: usize,
    /// CSV with `node_id,community` rows.
    #[arg(long, short)]
    #[serde(skip)]
    output: PathBuf,
}

fn detect(loaded: &LoadedGraph, seed: u64, max_passes: usize) -> Result<(Partition, Vec<f64>)> {
    let cfg = LouvainConfig {
        max_passes,
        ..LouvainConfig::new(seed)
    };
    let out = louvain_with_history(&loaded.graph, &cfg)?;
    Ok((out.partition, out.modularity_per_pass))
}

fn cmd_communities(args: &CommunitiesArgs) -> Result<()> {
    let mut prov = Provenance::new("communities", args, Some(args.seed))?;
    let loaded = args.graph.load(&mut prov)?;
    let (p, history) = detect(&loaded, args.seed, args.max_passes)?;
    let mut csv = Vec::new();
    write_partition(&p, &loaded.table, &mut csv)?;
    prov.write_output(&args.output, &csv)?;
    prov.result("communities", p.community_count())?;
    prov.result("modularity_per_pass", &history)?;
    prov.save(&sidecar(&args.output))?;
    println!("communities: {}", p.community_count());
    println!("modularity: {}", history.last().copied().unwrap_or(0.0));
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SelectionArg {
    Node,
    Link,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    communities: usize,
    /// Target fraction of inter-community edges.
    #[arg(long)]
    mu: f64,
    #[arg(long)]
    seed: u64,
    /// Comma-separated community sizes; default is equal sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 2.5)]
    exponent: f64,
    /// Target mean degree; the lower cutoff is solved for.
    #[arg(long, default_value_t = 15.0, conflicts_with = "min_degree")]
    mean_degree: f64,
    /// Fixed lower degree cutoff instead of a target mean.
    #[arg(long)]
    min_degree: Option<f64>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = SelectionArg::Node)]
    selection: SelectionArg,
    /// Directory for `network.edges`, `communities.csv` and `provenance.json`.
    #[arg(long)]
    out_dir: PathBuf,
}

impl GenerateArgs {
    fn config(&self) -> LfrConfig {
        let mut cfg = LfrConfig::new(self.n, self.communities, self.mu, self.seed);
        if let Some(sizes) = &self.sizes {
            cfg.sizes = CommunitySizes::Explicit(sizes.clone());
        }
        cfg.degree = DegreeSpec {
            exponent: self.exponent,
            min: self.min_degree.unwrap_or(DegreeSpec::default().min),
            max: self.max_degree,
            mean: if self.min_degree.is_some() {
                None
            } else {
                Some(self.mean_degree)
            },
        };
        cfg.selection = match self.selection {
            SelectionArg::Node => SelectionRule::Node,
            SelectionArg::Link => SelectionRule::Link,
        };
        cfg
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let cfg = args.config();
    let net = generate(&cfg)?;
    let mut prov = Provenance::new("generate", &cfg, Some(cfg.seed))?;
    let table = bridgeness::NodeTable::sequential(cfg.n);

    let mut edges = Vec::new();
    write_edge_list(&net.graph, &table, Delimiter::Whitespace, &mut edges)?;
    prov.write_output(&args.out_dir.join("network.edges"), &edges)?;
    let mut csv = Vec::new();
    write_partition(&net.ground_truth, &table, &mut csv)?;
    prov.write_output(&args.out_dir.join("communities.csv"), &csv)?;
    prov.result("edges", net.graph.edge_count())?;
    prov.result("achieved_mu", net.achieved_mu)?;
    prov.result("rewired_nodes", net.rewired_nodes.len())?;
    prov.save(&args.out_dir.join("provenance.json"))?;

    println!("edges: {}", net.graph.edge_count());
    println!("achieved_mu: {}", net.achieved_mu);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Detector {
    Louvain,
}

#[derive(Debug, Args, Serialize)]
struct EvaluateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphArgs,
    /// Known partition as `node_id,community` CSV.
    #[arg(long, short)]
    #[serde(skip)]
    partition: Option<PathBuf>,
    /// Detect the partition instead of reading one.
    #[arg(long, value_enum)]
    detect: Option<Detector>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SMOOTHING_WINDOW as u32, value_parser = clap::value_parser!(u32).range(1..))]
    window: u32,
    #[arg(long, value_enum, default_value_t = Variant::Exact)]
    variant: Variant,
    #[arg(long)]
    #[serde(skip)]
    out_dir: PathBuf,
}

fn write_curve(prov: &mut Provenance, dir: &Path, stem: &str, curve: &RankingCurve) -> Result<()> {
    let mut csv = Vec::new();
    curve.write_csv(&mut csv)?;
    prov.write_output(&dir.join(format!("{stem}.csv")), &csv)?;
    let mut json = Vec::new();
    curve.write_metadata_json(&mut json)?;
    prov.write_output(&dir.join(format!("{stem}.json")), &json)?;
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs, workers: Option<u16>) -> Result<()> {
    let mut prov = Provenance::new("evaluate", args, args.seed)?;
    let loaded = args.graph.load(&mut prov)?;
    let dir = &args.out_dir;
    let p = match (&args.partition, args.detect) {
        (Some(_), Some(_)) => bail!("both --partition and --detect given; choose one"),
        (None, None) => bail!("no partition: pass --partition or --detect louvain"),
        (Some(path), None) => read_partition(path, &loaded, &mut prov)?,
        (None, Some(Detector::Louvain)) => {
            let seed = args.seed.context("--detect louvain requires --seed")?;
            let (p, history) = detect(&loaded, seed, LouvainConfig::new(seed).max_passes)?;
            let mut csv = Vec::new();
            write_partition(&p, &loaded.table, &mut csv)?;
            prov.write_output(&dir.join("communities.csv"), &csv)?;
            prov.result("modularity", history.last().copied().unwrap_or(0.0))?;
            p
        }
    };

    let g_scores = global_indicator(&loaded.graph, &p)?.g;
    prov.write_output(
        &dir.join("indicator.csv"),
        &indicator_csv(&loaded, &p, &g_scores)?,
    )?;
    let r = compute(&loaded.graph, args.variant, workers);

    let by_bri = cumulative_ratio_curve(&g_scores, &r.bridgeness)?.named("bridgeness");
    let by_bc = cumulative_ratio_curve(&g_scores, &r.bc)?.named("bc");
    let by_g = cumulative_ratio_curve(&g_scores, &g_scores)?.named("G");
    let bri_smooth = smooth(&by_bri, args.window as usize)?;
    let bc_smooth = smooth(&by_bc, args.window as usize)?;
    write_curve(&mut prov, dir, "curve_bridgeness", &by_bri)?;
    write_curve(&mut prov, dir, "curve_bc", &by_bc)?;
    write_curve(&mut prov, dir, "curve_self", &by_g)?;
    write_curve(&mut prov, dir, "curve_bridgeness_smoothed", &bri_smooth)?;
    write_curve(&mut prov, dir, "curve_bc_smoothed", &bc_smooth)?;

    let mut csv = Vec::new();
    writeln!(csv, "degree,locterm")?;
    for (k, value) in locterm_by_degree(&r, &loaded.graph) {
        writeln!(csv, "{k},{value}")?;
    }
    prov.write_output(&dir.join("locterm.csv"), &csv)?;

    let advantage = curve_advantage(&by_bri, &by_bc)?;
    let advantage_smoothed = curve_advantage(&bri_smooth, &bc_smooth)?;
    prov.result("curve_advantage", advantage)?;
    prov.result("curve_advantage_smoothed", advantage_smoothed)?;
    prov.save(&dir.join("provenance.json"))?;

    println!("curve_advantage: {advantage}");
    println!("curve_advantage_smoothed: {advantage_smoothed}");
    Ok(())
}

#[derive(Debug, Args, Serialize)]
struct ReportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphArgs,
    #[arg(long, short)]
    #[serde(skip)]
    partition: PathBuf,
    #[arg(long, value_enum, default_value_t = Variant::Exact)]
    variant: Variant,
    /// Column to sort by: node_id, G, community, bc, bridgeness or degree.
    #[arg(long, default_value = "bc")]
    sort: String,
    #[arg(long)]
    ascending: bool,
    #[arg(long, short)]
    #[serde(skip)]
    output: PathBuf,
}

fn cmd_report(args: &ReportArgs, workers: Option<u16>) -> Result<()> {
    let column: ReportColumn = args.sort.parse()?;
    let mut prov = Provenance::new("report", args, None)?;
    let loaded = args.graph.load(&mut prov)?;
    let p = read_partition(&args.partition, &loaded, &mut prov)?;
    let indicator = global_indicator(&loaded.graph, &p)?;
    let r = compute(&loaded.graph, args.variant, workers);
    let mut report = node_report(&loaded.graph, &loaded.table, &p, &r, &indicator)?;
    report.sort_by(column, !args.ascending);
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    prov.write_output(&args.output, &csv)?;
    prov.save(&sidecar(&args.output))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Centrality(a) => cmd_centrality(a, cli.workers),
        Command::Indicator(a) => cmd_indicator(a),
        Command::Communities(a) => cmd_communities(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Evaluate(a) => cmd_evaluate(a, cli.workers),
        Command::Report(a) => cmd_report(a, cli.workers),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
