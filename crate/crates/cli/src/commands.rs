//! Argument definitions and the execution of each subcommand.

use crate::edgelist::{self, LabeledGraph};
use crate::render::{self, PathSide, StatsReport};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use clustnet::clustering::{
    measure_value, omega_counts, triangle_counts, triple_counts, ClusteringMeasure,
};
use clustnet::construct::{havel_hakimi, randomize, taylor_connect};
use clustnet::degree::{sample_degree_sequence, DegreeSequence, DistSpec};
use clustnet::ensemble::{
    assemble_report, replica_seed, run_ensemble, run_replica, EnsembleConfig, EnsembleError,
    EnsembleReport, ReplicaError, ReplicaOutcome,
};
use clustnet::rewire::{evolve, EvolveConfig, EvolveStatus};
use clustnet::stats::{
    assortativity, full_stats, modularity_partition, path_stats, per_node_mean_distances, NetStats,
};
use clustnet::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Random networks with prescribed degree sequences and clustering.
#[derive(Debug, Parser)]
#[command(name = "clustnet", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a random graph from a degree model and rewire it toward a
    /// clustering target
    Generate(GenerateArgs),
    /// Report the structural statistics of an edge list
    Stats(StatsArgs),
    /// Compare a graph against an ensemble matched on degrees and clustering
    Nullmodel(NullmodelArgs),
    /// Histogram per-node mean path lengths of two related graphs
    Pathhist(PathhistArgs),
}

fn parse_measure(s: &str) -> Result<ClusteringMeasure, String> {
    Ok(match s {
        "triangles" => ClusteringMeasure::TriangleCount,
        "C" => ClusteringMeasure::ClusteringCoefficient,
        "T" => ClusteringMeasure::Transitivity,
        "Ctilde" => ClusteringMeasure::SvClustering,
        "Ttilde" => ClusteringMeasure::SvTransitivity,
        other => {
            return Err(format!(
                "unknown measure '{other}' (expected triangles, C, T, Ctilde, or Ttilde)"
            ))
        }
    })
}

/// Degree model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    /// Poisson-distributed degrees, conditioned on d >= 1
    Poisson,
    /// Exponentially decaying degree probabilities
    Exponential,
    /// Power-law degree probabilities
    Scalefree,
    /// Fixed degree sequence from --degrees
    File,
}

/// Rewiring knobs shared by the commands that run the chain.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Clustering measure: triangles, C, T, Ctilde, or Ttilde
    #[arg(long, value_parser = parse_measure, default_value = "Ttilde")]
    pub measure: ClusteringMeasure,
    /// Halting tolerance around the target
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// Random number generator seed
    #[arg(long, env = "CLUSTNET_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Consecutive failed proposals before the run plateaus
    /// [default: 100 per edge]
    #[arg(long)]
    pub max_failed: Option<u64>,
    /// Run the connectivity check only every k-th accepted move
    #[arg(long, default_value_t = 1)]
    pub connectivity_batch: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Degree model
    #[arg(long, value_enum)]
    pub dist: Dist,
    /// Number of nodes
    #[arg(long, required_unless_present = "degrees", conflicts_with = "degrees")]
    pub n: Option<usize>,
    /// Mean degree the model aims for
    #[arg(long)]
    pub mean: Option<f64>,
    /// Poisson rate, as an alternative to --mean
    #[arg(long, conflicts_with = "mean")]
    pub lambda: Option<f64>,
    /// Exponential decay constant, as an alternative to --mean
    #[arg(long, conflicts_with_all = ["mean", "lambda"])]
    pub kappa: Option<f64>,
    /// Power-law exponent, as an alternative to --mean
    #[arg(long, conflicts_with_all = ["mean", "lambda", "kappa"])]
    pub gamma: Option<f64>,
    /// Largest degree the model may emit [default: n-1]
    #[arg(long)]
    pub dmax: Option<usize>,
    /// Degree file for --dist file: whitespace-separated integers
    #[arg(long)]
    pub degrees: Option<PathBuf>,
    /// Clustering value to drive the measure to
    #[arg(long, allow_hyphen_values = true)]
    pub target: f64,
    #[command(flatten)]
    pub run: RunArgs,
    /// Stop after this many accepted moves
    #[arg(long)]
    pub max_accepted: Option<u64>,
    /// Accept any move that keeps the graph connected, improving or not
    #[arg(long)]
    pub permissive: bool,
    /// Record every proposal in the trace, not only accepted moves
    #[arg(long)]
    pub trace_proposals: bool,
    /// Degree-preserving shuffle budget, as a multiple of the edge count
    #[arg(long, default_value_t = 10)]
    pub randomize_factor: u64,
    /// Write the final edge list here
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the pre-rewiring (random counterpart) edge list here
    #[arg(long)]
    pub random_out: Option<PathBuf>,
    /// Write the trace CSV here
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
    /// Write the run summary JSON here (it also prints to stdout)
    #[arg(long)]
    pub summary_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Edge list to analyze
    pub input: PathBuf,
    /// Drop self-loops and duplicate edges with a warning instead of failing
    #[arg(long)]
    pub lenient: bool,
    /// Emit JSON instead of key/value text
    #[arg(long)]
    pub json: bool,
    /// Also write the report here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NullmodelArgs {
    /// Edge list of the graph to model
    pub input: PathBuf,
    /// Ensemble size
    #[arg(short = 'k', long, default_value_t = 20)]
    pub replicas: usize,
    /// Clustering measure: triangles, C, T, Ctilde, or Ttilde
    #[arg(long, value_parser = parse_measure, default_value = "Ttilde")]
    pub measure: ClusteringMeasure,
    /// Clustering target [default: the input graph's own value]
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<f64>,
    /// Halting tolerance around the target
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// Random number generator seed
    #[arg(long, env = "CLUSTNET_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Consecutive failed proposals before a replica plateaus
    /// [default: 100 per edge]
    #[arg(long)]
    pub max_failed: Option<u64>,
    /// Run the connectivity check only every k-th accepted move
    #[arg(long, default_value_t = 1)]
    pub connectivity_batch: u64,
    /// Degree-preserving shuffle budget, as a multiple of the edge count
    #[arg(long, default_value_t = 10)]
    pub randomize_factor: u64,
    /// Worker threads [default: available parallelism]
    #[arg(long, env = "CLUSTNET_WORKERS")]
    pub workers: Option<usize>,
    /// Drop self-loops and duplicate edges with a warning instead of failing
    #[arg(long)]
    pub lenient: bool,
    /// Write the comparison table here (it also prints to stdout)
    #[arg(long)]
    pub report_out: Option<PathBuf>,
    /// Write per-replica results CSV here
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathhistArgs {
    /// Baseline edge list
    pub first: PathBuf,
    /// Comparison edge list; omit it and pass --target to rewire the
    /// baseline into its own comparison graph
    pub second: Option<PathBuf>,
    /// Clustering value to rewire the baseline to (single-graph form)
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<f64>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Histogram bin width
    #[arg(long, default_value_t = 0.1)]
    pub bin_width: f64,
    /// Drop self-loops and duplicate edges with a warning instead of failing
    #[arg(long)]
    pub lenient: bool,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs one parsed invocation to completion.
pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Nullmodel(a) => cmd_nullmodel(a),
        Command::Pathhist(a) => cmd_pathhist(a),
    }
}

/// Exit code for a finished rewiring run: 0 target reached, 3 plateaued,
/// 4 target below the initial value, 5 step budget exhausted.
pub fn status_exit(status: EvolveStatus) -> ExitCode {
    ExitCode::from(match status {
        EvolveStatus::TargetReached => 0u8,
        EvolveStatus::Plateaued => 3,
        EvolveStatus::TargetBelowInitial => 4,
        EvolveStatus::BudgetExhausted => 5,
    })
}

#[derive(Debug, serde::Serialize)]
struct RunSummary {
    command: &'static str,
    status: EvolveStatus,
    measure: ClusteringMeasure,
    target: f64,
    tol: f64,
    seed: u64,
    n: usize,
    m: usize,
    initial_clust: Option<f64>,
    final_clust: f64,
    proposals: u64,
    accepted_steps: u64,
    wall_ms: u64,
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_input(path: &Path, lenient: bool) -> Result<LabeledGraph> {
    let text = read_file(path)?;
    let parsed = edgelist::parse(&text, lenient)
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.graph)
}

fn resolve_sequence(a: &GenerateArgs, rng: &mut ChaCha8Rng) -> Result<DegreeSequence> {
    if a.dist == Dist::File {
        let path = a
            .degrees
            .as_ref()
            .ok_or_else(|| anyhow!("--dist file requires --degrees <path>"))?;
        let text = read_file(path)?;
        let mut degrees = Vec::new();
        for tok in text.split_whitespace() {
            let d: usize = tok
                .parse()
                .with_context(|| format!("bad degree '{tok}' in {}", path.display()))?;
            degrees.push(d);
        }
        if degrees.is_empty() {
            bail!("degree file {} is empty", path.display());
        }
        return Ok(DegreeSequence::new(degrees));
    }

    if a.degrees.is_some() {
        bail!("--degrees only applies to --dist file");
    }
    let n = a.n.expect("clap requires --n without --degrees");
    if n < 2 {
        bail!("--n must be at least 2");
    }
    let d_max = a.dmax.unwrap_or(n - 1);
    let spec = match a.dist {
        Dist::Poisson => {
            if a.kappa.is_some() || a.gamma.is_some() {
                bail!("--kappa and --gamma do not apply to the poisson model");
            }
            let lambda = a
                .lambda
                .or(a.mean)
                .ok_or_else(|| anyhow!("the poisson model needs --mean or --lambda"))?;
            DistSpec::poisson(lambda, d_max)
        }
        Dist::Exponential => {
            if a.lambda.is_some() || a.gamma.is_some() {
                bail!("--lambda and --gamma do not apply to the exponential model");
            }
            match (a.kappa, a.mean) {
                (Some(kappa), None) => DistSpec::exponential(kappa, d_max),
                (None, Some(mean)) => DistSpec::exponential_from_mean(mean, d_max)
                    .map_err(|e| anyhow!("exponential mean {mean} is unattainable: {e}"))?,
                (None, None) => bail!("the exponential model needs --mean or --kappa"),
                (Some(_), Some(_)) => unreachable!("clap rejects --kappa with --mean"),
            }
        }
        Dist::Scalefree => {
            if a.lambda.is_some() || a.kappa.is_some() {
                bail!("--lambda and --kappa do not apply to the scalefree model");
            }
            match (a.gamma, a.mean) {
                (Some(gamma), None) => DistSpec::scale_free(gamma, d_max),
                (None, Some(mean)) => DistSpec::scale_free_from_mean(mean, d_max)
                    .map_err(|e| anyhow!("scale-free mean {mean} is unattainable: {e}"))?,
                (None, None) => bail!("the scalefree model needs --mean or --gamma"),
                (Some(_), Some(_)) => unreachable!("clap rejects --gamma with --mean"),
            }
        }
        Dist::File => unreachable!("handled above"),
    };
    sample_degree_sequence(&spec, n, rng).map_err(|e| anyhow!("sampling degrees: {e}"))
}

fn cmd_generate(a: GenerateArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(a.run.seed);
    let seq = resolve_sequence(&a, &mut rng)?;
    let mut g = havel_hakimi(&seq)
        .map_err(|e| anyhow!("the degree sequence has no simple realization: {e}"))?;
    taylor_connect(&mut g, &mut rng).map_err(|e| anyhow!("cannot connect the graph: {e}"))?;
    let swaps = a.randomize_factor * g.edge_count() as u64;
    randomize(&mut g, swaps, &mut rng)
        .map_err(|e| anyhow!("randomizing the connected graph: {e}"))?;
    if let Some(path) = &a.random_out {
        write_file(path, &edgelist::write(&LabeledGraph::numbered(g.clone())))?;
    }

    let initial_clust = measure_value(&g, a.run.measure).ok();
    let mut cfg = EvolveConfig::new(a.run.measure, a.target);
    cfg.tol = a.run.tol;
    cfg.max_failed_proposals = a.run.max_failed;
    cfg.max_accepted_steps = a.max_accepted;
    cfg.permissive = a.permissive;
    cfg.connectivity_batch = a.run.connectivity_batch;
    cfg.trace_proposals = a.trace_proposals;
    let out = evolve(g, &cfg, &mut rng).map_err(|e| anyhow!("rewiring failed: {e}"))?;

    let summary = RunSummary {
        command: "generate",
        status: out.status,
        measure: a.run.measure,
        target: a.target,
        tol: a.run.tol,
        seed: a.run.seed,
        n: out.graph.node_count(),
        m: out.graph.edge_count(),
        initial_clust,
        final_clust: out.final_clust,
        proposals: out.proposals,
        accepted_steps: out.accepted_steps,
        wall_ms: start.elapsed().as_millis() as u64,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    if let Some(path) = &a.out {
        write_file(path, &edgelist::write(&LabeledGraph::numbered(out.graph.clone())))?;
    }
    if let Some(path) = &a.trace_out {
        write_file(path, &render::trace_csv(&out.trace))?;
    }
    if let Some(path) = &a.summary_out {
        write_file(path, &format!("{json}\n"))?;
    }
    println!("{json}");
    Ok(status_exit(out.status))
}

/// Assembles the statistics report, leaving path and community fields
/// undefined where the graph does not support them.
pub fn build_stats_report(g: &Graph) -> StatsReport {
    let n = g.node_count();
    let (_, delta_g) = triangle_counts(g);
    let (tau, tau_g) = triple_counts(g);
    let (omega, omega_g) = omega_counts(g);
    let connected = g.is_connected();
    let paths = if connected { path_stats(g).ok() } else { None };
    let partition = modularity_partition(g).ok();
    let sum_d: usize = (0..n).map(|u| g.degree(u)).sum();
    let sum_d2: usize = (0..n).map(|u| g.degree(u) * g.degree(u)).sum();
    StatsReport {
        n,
        m: g.edge_count(),
        connected,
        mean_degree: sum_d as f64 / n as f64,
        mean_sq_degree: sum_d2 as f64 / n as f64,
        nodes_with_triples: tau.iter().filter(|&&t| t > 0).count(),
        nodes_with_possible_triangles: omega.iter().filter(|&&w| w > 0).count(),
        triangles: delta_g as u64,
        triples: tau_g as u64,
        possible_triangles: omega_g as u64,
        clustering: measure_value(g, ClusteringMeasure::ClusteringCoefficient).ok(),
        transitivity: measure_value(g, ClusteringMeasure::Transitivity).ok(),
        sv_clustering: measure_value(g, ClusteringMeasure::SvClustering).ok(),
        sv_transitivity: measure_value(g, ClusteringMeasure::SvTransitivity).ok(),
        assortativity: assortativity(g),
        mean_path_length: paths.as_ref().map(|p| p.mean_path_length),
        diameter: paths.as_ref().map(|p| p.diameter),
        modularity: partition.as_ref().map(|p| p.q),
        community_count: partition.as_ref().map(|p| p.community_count),
    }
}

fn cmd_stats(a: StatsArgs) -> Result<ExitCode> {
    let lg = parse_input(&a.input, a.lenient)?;
    let g = &lg.graph;
    if g.node_count() < 2 || g.edge_count() == 0 {
        bail!("graph is too small: need at least two nodes and one edge");
    }
    let report = build_stats_report(g);
    if !report.connected {
        eprintln!("warning: graph is disconnected; path statistics are unavailable");
    }
    let body = if a.json {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        render::stats_text(&report)
    };
    if let Some(path) = &a.out {
        write_file(path, &body)?;
    }
    print!("{body}");
    Ok(ExitCode::SUCCESS)
}

/// Runs the ensemble's replicas on `workers` threads. Each replica is
/// self-contained and seeded by its index, so the report is identical to
/// the sequential one whatever the worker count or scheduling.
pub fn run_ensemble_parallel(
    g: &Graph,
    cfg: &EnsembleConfig,
    workers: usize,
) -> Result<EnsembleReport, EnsembleError> {
    if workers <= 1 {
        return run_ensemble::<ChaCha8Rng>(g, cfg);
    }
    if cfg.replicas == 0 {
        return Err(EnsembleError::NoReplicas);
    }
    let empirical = full_stats(g).map_err(EnsembleError::Empirical)?;
    let seq = DegreeSequence::new(g.degree_sequence());

    type Slot = Mutex<Option<Result<(EvolveStatus, f64, NetStats), ReplicaError>>>;
    let k = cfg.replicas;
    let next = AtomicUsize::new(0);
    let slots: Vec<Slot> = (0..k).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.min(k) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= k {
                    break;
                }
                let seed = replica_seed(cfg.seed, (i + 1) as u64);
                let result = run_replica::<ChaCha8Rng>(&seq, cfg, seed);
                *slots[i].lock().expect("no panics while holding the lock") = Some(result);
            });
        }
    });

    let mut replicas = Vec::with_capacity(k);
    for (i, slot) in slots.into_iter().enumerate() {
        let index = i + 1;
        let result = slot
            .into_inner()
            .expect("no panics while holding the lock")
            .expect("every index was claimed by a worker");
        let (status, final_clust, stats) =
            result.map_err(|source| EnsembleError::Replica { index, source })?;
        replicas.push(ReplicaOutcome {
            index,
            seed: replica_seed(cfg.seed, index as u64),
            status,
            final_clust,
            stats,
        });
    }
    Ok(assemble_report(cfg, empirical, replicas))
}

fn cmd_nullmodel(a: NullmodelArgs) -> Result<ExitCode> {
    if a.replicas == 0 {
        bail!("--replicas must be at least 1");
    }
    let lg = parse_input(&a.input, a.lenient)?;
    let g = lg.graph;
    let target = match a.target {
        Some(t) => t,
        None => measure_value(&g, a.measure).map_err(|e| {
            anyhow!("measure {} is undefined on the input graph ({e}); pass --target", a.measure)
        })?,
    };
    let mut cfg = EnsembleConfig::new(a.measure, target);
    cfg.tol = a.tol;
    cfg.replicas = a.replicas;
    cfg.seed = a.seed;
    cfg.max_failed_proposals = a.max_failed;
    cfg.connectivity_batch = a.connectivity_batch;
    cfg.randomize_factor = a.randomize_factor;
    let workers = a
        .workers
        .or_else(|| std::thread::available_parallelism().ok().map(|p| p.get()))
        .unwrap_or(1)
        .max(1);
    let report = run_ensemble_parallel(&g, &cfg, workers).map_err(|e| anyhow!("{e}"))?;

    let body = render::ensemble_text(&report);
    if let Some(path) = &a.report_out {
        write_file(path, &body)?;
    }
    if let Some(path) = &a.csv_out {
        write_file(path, &render::ensemble_csv(&report))?;
    }
    print!("{body}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_pathhist(a: PathhistArgs) -> Result<ExitCode> {
    if !(a.bin_width.is_finite() && a.bin_width > 0.0) {
        bail!("--bin-width must be a positive number");
    }
    let ga = parse_input(&a.first, a.lenient)?.graph;
    let label_a = a.first.display().to_string();
    let (gb, label_b) = match &a.second {
        Some(path) => {
            if a.target.is_some() {
                bail!("--target only applies when no second edge list is given");
            }
            (parse_input(path, a.lenient)?.graph, path.display().to_string())
        }
        None => {
            let target = a
                .target
                .ok_or_else(|| anyhow!("pass a second edge list, or --target to rewire the baseline"))?;
            let mut cfg = EvolveConfig::new(a.run.measure, target);
            cfg.tol = a.run.tol;
            cfg.max_failed_proposals = a.run.max_failed;
            cfg.connectivity_batch = a.run.connectivity_batch;
            let mut rng = ChaCha8Rng::seed_from_u64(a.run.seed);
            let out = evolve(ga.clone(), &cfg, &mut rng)
                .map_err(|e| anyhow!("rewiring the baseline failed: {e}"))?;
            eprintln!(
                "rewired baseline: status {}, {} {} after {} proposals",
                out.status,
                a.run.measure,
                render::fmt_num(out.final_clust),
                out.proposals
            );
            (out.graph, format!("rewired to {} {}", a.run.measure, render::fmt_num(target)))
        }
    };

    let means_a =
        per_node_mean_distances(&ga).map_err(|e| anyhow!("{label_a}: {e}"))?;
    let stats_a = path_stats(&ga).map_err(|e| anyhow!("{label_a}: {e}"))?;
    let means_b =
        per_node_mean_distances(&gb).map_err(|e| anyhow!("{label_b}: {e}"))?;
    let stats_b = path_stats(&gb).map_err(|e| anyhow!("{label_b}: {e}"))?;

    let csv = render::pathhist_csv(
        &PathSide { label: &label_a, node_means: &means_a, stats: &stats_a },
        &PathSide { label: &label_b, node_means: &means_b, stats: &stats_b },
        a.bin_width,
    );
    if let Some(path) = &a.out {
        write_file(path, &csv)?;
    } else {
        print!("{csv}");
    }
    Ok(ExitCode::SUCCESS)
}
