//! Command-line front end: instance generation, clustering runs with
//! replayable records, epsilon sweeps and bound reports.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use privmst::analysis::{ari_excluding_singletons, partition_agreement, topology_bound, BoundReport, BoundVariant};
use privmst::datagen::{generate_circles, generate_moons, generate_planted_partition, PlantedInstance, Shape};
use privmst::io::{
    format_coordinates, format_edge_list, format_partition, format_real, read_edge_list, read_partition,
};
use privmst::mechanism::utility_sensitivity;
use privmst::pipeline::Provenance;
use privmst::rng::split_seed;
use privmst::{
    minimum_spanning_tree, ptclust, run_dbmstclu, EdgeId, NodePartition, PrivacyBudget, PtclustConfig, WeightedGraph,
};

pub const RECORD_FORMAT: &str = "privmst.run";
pub const RECORD_VERSION: u32 = 1;
pub const SWEEP_FORMAT: &str = "privmst.sweep";
pub const SWEEP_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "PRIVMST_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible parameters: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<privmst::Error> for CliError {
    fn from(e: privmst::Error) -> Self {
        use privmst::Error as E;
        match e {
            E::InvalidParameter(_) | E::Infeasible(_) | E::ExcessiveClamping { .. } | E::TooLarge { .. } => {
                CliError::Infeasible(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "privmst", version, about = "Differentially private MST clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a planted-partition instance.
    Generate(GenerateArgs),
    /// Cluster a graph and write a partition plus a run record.
    Cluster(ClusterArgs),
    /// Run the private pipeline over a grid of epsilons and seeds.
    Sweep(SweepArgs),
    /// Report the partitioning-topology probability bound.
    Bounds(BoundsArgs),
    /// Re-run a recorded clustering and check it reproduces.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Circles,
    Moons,
    Planted,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub wmin: f64,
    #[arg(long, default_value_t = 0.3)]
    pub wmax: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of clusters for `--shape planted`.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Output prefix; writes `<out>.edges`, `<out>.partition`, `<out>.coords`.
    #[arg(long, default_value = "instance")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dbmstclu,
    Ptclust,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long, value_enum, default_value = "dbmstclu")]
    pub mode: Mode,
    #[arg(long, required_if_eq("mode", "ptclust"))]
    pub epsilon: Option<f64>,
    #[arg(long, required_if_eq("mode", "ptclust"))]
    pub mu: Option<f64>,
    #[arg(long, requires = "p")]
    pub tau: Option<f64>,
    #[arg(long, requires = "tau")]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Planted partition to score against.
    #[arg(long)]
    pub planted: Option<PathBuf>,
    /// Output prefix; writes `<out>.partition` and `<out>.record.json`.
    #[arg(long, default_value = "run")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub planted: Option<PathBuf>,
    /// Comma-separated privacy budgets.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub epsilons: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub master_seed: u64,
    #[arg(long, requires = "p")]
    pub tau: Option<f64>,
    #[arg(long, requires = "tau")]
    pub p: Option<f64>,
    #[arg(long, default_value = "sweep.tsv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub planted: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub mu: f64,
    /// Writes the key=value report here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub record: PathBuf,
}

// ---------------------------------------------------------------------------
// run records

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub epsilon: Option<f64>,
    pub mu: Option<f64>,
    pub tau: Option<f64>,
    pub p: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutputs {
    pub partition_path: Option<PathBuf>,
    pub cluster_count: usize,
    pub dbcvi: f64,
    pub cut_edges: Vec<EdgeId>,
    /// 1-based cluster label per node.
    pub assignment: Vec<usize>,
    pub ari: Option<f64>,
    pub ari_excluding_singletons: Option<f64>,
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub format: String,
    pub version: u32,
    pub command: Vec<String>,
    pub edges_path: PathBuf,
    pub planted_path: Option<PathBuf>,
    pub config: RunConfig,
    pub outputs: RunOutputs,
    pub elapsed_ms: f64,
}

impl RunRecord {
    /// Equality of everything except timing and the command echo.
    pub fn same_result(&self, other: &RunRecord) -> bool {
        self.config == other.config
            && self.outputs.cluster_count == other.outputs.cluster_count
            && self.outputs.dbcvi.to_bits() == other.outputs.dbcvi.to_bits()
            && self.outputs.cut_edges == other.outputs.cut_edges
            && self.outputs.assignment == other.outputs.assignment
            && self.outputs.provenance == other.outputs.provenance
            && self.outputs.ari.map(f64::to_bits) == other.outputs.ari.map(f64::to_bits)
    }
}

/// Clustering of `g` under `config`, scored against `planted` if given.
pub fn cluster_graph(g: &WeightedGraph, config: &RunConfig, planted: Option<&NodePartition>) -> CliResult<RunOutputs> {
    let (partition, dbcvi, cut_edges, provenance) = match config.mode {
        Mode::Dbmstclu => {
            let out = run_dbmstclu(&minimum_spanning_tree(g)?)?;
            (out.partition(), out.dbcvi(), out.state.cut_edges().to_vec(), None)
        }
        Mode::Ptclust => {
            let (eps, mu) = match (config.epsilon, config.mu) {
                (Some(e), Some(m)) => (e, m),
                _ => return Err(CliError::Usage("ptclust mode needs --epsilon and --mu".into())),
            };
            let mut pc = PtclustConfig::new(PrivacyBudget::new(eps, mu)?, config.seed);
            pc.tau = config.tau;
            pc.p = config.p;
            let out = ptclust(g, &pc)?;
            let cuts = out.provenance.cut_edges.clone();
            (out.clustering.partition(), out.clustering.dbcvi(), cuts, Some(out.provenance))
        }
    };
    let (ari, ari_ns) = match planted {
        Some(truth) => (
            Some(partition_agreement(truth, &partition)?.adjusted_rand_index),
            Some(ari_excluding_singletons(truth, &partition)?),
        ),
        None => (None, None),
    };
    Ok(RunOutputs {
        partition_path: None,
        cluster_count: partition.cluster_count(),
        dbcvi,
        cut_edges,
        assignment: partition.labels().iter().map(|l| l + 1).collect(),
        ari,
        ari_excluding_singletons: ari_ns,
        provenance,
    })
}

fn load_graph(path: &Path) -> CliResult<WeightedGraph> {
    read_edge_list(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_partition(path: &Path, node_count: usize) -> CliResult<NodePartition> {
    let p = read_partition(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if p.node_count() != node_count {
        return Err(CliError::Data(format!(
            "{}: partition covers {} nodes, graph has {node_count}",
            path.display(),
            p.node_count()
        )));
    }
    Ok(p)
}

/// Runs a clustering from files and builds its record.
pub fn run_from_files(
    edges: &Path,
    planted: Option<&Path>,
    config: RunConfig,
    command: Vec<String>,
) -> CliResult<RunRecord> {
    let start = Instant::now();
    let g = load_graph(edges)?;
    let truth = planted.map(|p| load_partition(p, g.node_count())).transpose()?;
    let outputs = cluster_graph(&g, &config, truth.as_ref())?;
    Ok(RunRecord {
        format: RECORD_FORMAT.into(),
        version: RECORD_VERSION,
        command,
        edges_path: edges.to_path_buf(),
        planted_path: planted.map(Path::to_path_buf),
        config,
        outputs,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Re-runs `record` from its config and input files.
pub fn replay(record: &RunRecord) -> CliResult<RunRecord> {
    if record.format != RECORD_FORMAT || record.version != RECORD_VERSION {
        return Err(CliError::Data(format!("unsupported record {} v{}", record.format, record.version)));
    }
    let mut again = run_from_files(
        &record.edges_path,
        record.planted_path.as_deref(),
        record.config.clone(),
        record.command.clone(),
    )?;
    again.outputs.partition_path = record.outputs.partition_path.clone();
    Ok(again)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

// ---------------------------------------------------------------------------
// commands

pub fn generate_instance(args: &GenerateArgs) -> CliResult<PlantedInstance> {
    let inst = match args.shape {
        ShapeArg::Circles => generate_circles(args.seed, args.n, args.wmin, args.wmax)?,
        ShapeArg::Moons => generate_moons(args.seed, args.n, args.wmin, args.wmax)?,
        ShapeArg::Planted => {
            if args.k == 0 || args.n < 3 * args.k {
                return Err(CliError::Infeasible(format!(
                    "cannot plant {} clusters of >= 3 nodes in {}",
                    args.k, args.n
                )));
            }
            let sizes: Vec<usize> = (0..args.k).map(|i| args.n / args.k + usize::from(i < args.n % args.k)).collect();
            generate_planted_partition(args.seed, &sizes, 3, 1, args.wmin, args.wmax)?
        }
    };
    Ok(inst)
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<String> {
    let inst = generate_instance(args)?;
    let edges = with_suffix(&args.out, ".edges");
    let partition = with_suffix(&args.out, ".partition");
    let coords = with_suffix(&args.out, ".coords");
    write(&edges, &format_edge_list(&inst.graph))?;
    write(&partition, &format_partition(&inst.partition))?;
    let points = inst.positions.clone().unwrap_or_else(|| circle_layout(&inst.partition));
    write(&coords, &format_coordinates(&points))?;
    let shape = match args.shape {
        ShapeArg::Circles => Shape::Circles,
        ShapeArg::Moons => Shape::Moons,
        ShapeArg::Planted => Shape::Planted,
    };
    Ok(format!(
        "shape={shape} nodes={} edges={} clusters={}\nwrote {} {} {}\n",
        inst.graph.node_count(),
        inst.graph.edge_count(),
        inst.partition.cluster_count(),
        edges.display(),
        partition.display(),
        coords.display()
    ))
}

/// Clusters on a ring of rings, for instances without geometry.
fn circle_layout(p: &NodePartition) -> Vec<(f64, f64)> {
    let k = p.cluster_count() as f64;
    let sizes = p.sizes();
    let mut seen = vec![0usize; sizes.len()];
    p.labels()
        .iter()
        .map(|&c| {
            let centre = std::f64::consts::TAU * c as f64 / k;
            let angle = std::f64::consts::TAU * seen[c] as f64 / sizes[c] as f64;
            seen[c] += 1;
            (3.0 * centre.cos() + angle.cos(), 3.0 * centre.sin() + angle.sin())
        })
        .collect()
}

pub fn cmd_cluster(args: &ClusterArgs, command: Vec<String>) -> CliResult<(RunRecord, String)> {
    let config =
        RunConfig { mode: args.mode, epsilon: args.epsilon, mu: args.mu, tau: args.tau, p: args.p, seed: args.seed };
    let mut record = run_from_files(&args.edges, args.planted.as_deref(), config, command)?;
    let partition_path = with_suffix(&args.out, ".partition");
    let labels: Vec<usize> = record.outputs.assignment.iter().map(|l| l - 1).collect();
    write(&partition_path, &format_partition(&NodePartition::from_labels(&labels)))?;
    record.outputs.partition_path = Some(partition_path);
    let record_path = with_suffix(&args.out, ".record.json");
    let json = serde_json::to_string_pretty(&record).map_err(|e| CliError::Data(e.to_string()))?;
    write(&record_path, &json)?;
    let mut msg = format!("K={} DBCVI={}", record.outputs.cluster_count, format_real(record.outputs.dbcvi));
    if let Some(ari) = record.outputs.ari {
        msg.push_str(&format!(" ARI={}", format_real(ari)));
    }
    msg.push('\n');
    Ok((record, msg))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub seed_index: usize,
    pub seed: u64,
    pub cluster_count: usize,
    pub dbcvi: f64,
    pub clamp_count: usize,
    pub ari: Option<f64>,
    pub ari_excluding_singletons: Option<f64>,
}

/// Thread count from `PRIVMST_THREADS`, if set to a positive integer.
pub fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

/// One private run per (epsilon, seed index) cell; rows come back in grid
/// order whatever the scheduling.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    g: &WeightedGraph,
    planted: Option<&NodePartition>,
    epsilons: &[f64],
    mu: f64,
    seeds: usize,
    master_seed: u64,
    tau_p: Option<(f64, f64)>,
    threads: Option<usize>,
) -> CliResult<Vec<SweepRow>> {
    if epsilons.is_empty() {
        return Err(CliError::Usage("empty epsilon list".into()));
    }
    if seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let cells: Vec<(f64, usize)> = epsilons.iter().flat_map(|&e| (0..seeds).map(move |i| (e, i))).collect();
    let run = |&(epsilon, i): &(f64, usize)| -> CliResult<SweepRow> {
        let seed = split_seed(master_seed, i as u64);
        let config = RunConfig {
            mode: Mode::Ptclust,
            epsilon: Some(epsilon),
            mu: Some(mu),
            tau: tau_p.map(|t| t.0),
            p: tau_p.map(|t| t.1),
            seed,
        };
        let out = cluster_graph(g, &config, planted)?;
        Ok(SweepRow {
            epsilon,
            seed_index: i,
            seed,
            cluster_count: out.cluster_count,
            dbcvi: out.dbcvi,
            clamp_count: out.provenance.map_or(0, |p| p.clamp_count),
            ari: out.ari,
            ari_excluding_singletons: out.ari_excluding_singletons,
        })
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Data(e.to_string()))?;
    pool.install(|| cells.par_iter().map(run).collect())
}

fn opt_real(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), format_real)
}

pub fn format_sweep(rows: &[SweepRow], edges: &Path, mu: f64, master_seed: u64) -> String {
    let mut out = String::new();
    out.push_str(&format!("# format={SWEEP_FORMAT} version={SWEEP_VERSION}\n"));
    out.push_str(&format!("# edges={}\n# mu={}\n# master_seed={master_seed}\n", edges.display(), format_real(mu)));
    out.push_str("epsilon\tseed_index\tseed\tk\tdbcvi\tclamp_count\tari\tari_excluding_singletons\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            format_real(r.epsilon),
            r.seed_index,
            r.seed,
            r.cluster_count,
            format_real(r.dbcvi),
            r.clamp_count,
            opt_real(r.ari),
            opt_real(r.ari_excluding_singletons)
        ));
    }
    out
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<String> {
    let g = load_graph(&args.edges)?;
    let truth = args.planted.as_deref().map(|p| load_partition(p, g.node_count())).transpose()?;
    let tau_p = args.tau.zip(args.p);
    let rows = sweep(&g, truth.as_ref(), &args.epsilons, args.mu, args.seeds, args.master_seed, tau_p, thread_cap()?)?;
    write(&args.out, &format_sweep(&rows, &args.edges, args.mu, args.master_seed))?;
    Ok(format!("wrote {} rows to {}\n", rows.len(), args.out.display()))
}

/// Both bound variants for `(g, planted)` at `epsilon`, `mu`.
pub fn bound_reports(g: &WeightedGraph, planted: &NodePartition, epsilon: f64, mu: f64) -> CliResult<[BoundReport; 2]> {
    let delta_u = utility_sensitivity(&PrivacyBudget::new(epsilon, mu)?);
    Ok([
        topology_bound(g, planted, epsilon, delta_u, BoundVariant::TheoremText)?,
        topology_bound(g, planted, epsilon, delta_u, BoundVariant::ProofForm)?,
    ])
}

pub fn format_bounds(reports: &[BoundReport]) -> String {
    let first = &reports[0];
    let mut out = format!(
        "epsilon={}\ndelta_u={}\nnodes={}\nedges={}\nalpha_source={:?}\n",
        format_real(first.epsilon),
        format_real(first.delta_u),
        first.node_count,
        first.edge_count,
        first.alpha_source
    );
    for r in reports {
        let name = r.variant.name();
        out.push_str(&format!("{name}={}\n{name}.vacuous={}\n", format_real(r.bound_value), r.vacuous));
    }
    out.push_str(&format!("vacuous={}\n", reports.iter().any(|r| r.vacuous)));
    out
}

pub fn cmd_bounds(args: &BoundsArgs) -> CliResult<String> {
    let g = load_graph(&args.edges)?;
    let truth = load_partition(&args.planted, g.node_count())?;
    let text = format_bounds(&bound_reports(&g, &truth, args.epsilon, args.mu)?);
    if let Some(path) = &args.out {
        write(path, &text)?;
    }
    Ok(text)
}

pub fn cmd_replay(args: &ReplayArgs) -> CliResult<String> {
    let text = fs::read_to_string(&args.record).map_err(|e| io_err(&args.record, e))?;
    let record: RunRecord = serde_json::from_str(&text).map_err(|e| CliError::Data(e.to_string()))?;
    let again = replay(&record)?;
    if again.same_result(&record) {
        Ok("replay identical\n".into())
    } else {
        Err(CliError::Data("replay differs from record".into()))
    }
}

/// Dispatches a parsed command and returns its stdout text.
pub fn execute(cli: &Cli, argv: Vec<String>) -> CliResult<String> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Cluster(a) => cmd_cluster(a, argv).map(|(_, msg)| msg),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Replay(a) => cmd_replay(a),
    }
}
