//! Null-model replica ensembles.
//!
//! Given an empirical graph, the ensemble draws replicas that match its
//! degree sequence exactly and its clustering approximately: each replica
//! realizes the sequence, is randomized, and is then evolved to the
//! clustering target. Comparing the remaining statistics of the replicas
//! against the empirical values shows which features of the original are
//! explained by degrees and clustering alone and which are not.
//!
//! Replica `i` derives its generator from `seed ^ i` (1-based), so the
//! ensemble is reproducible as a whole and each replica individually.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};

use crate::clustering::ClusteringMeasure;
use crate::construct::{self, ConnectError, ConstructError, RandomizeError};
use crate::degree::DegreeSequence;
use crate::graph::Graph;
use crate::rewire::{evolve, EvolveConfig, EvolveError, EvolveStatus, DEFAULT_TOLERANCE};
use crate::stats::{full_stats, NetStats, StatsError};

/// Relative deviation above which [`flagged_rows`] reports a statistic.
pub const DEFAULT_FLAG_THRESHOLD: f64 = 0.05;

/// Configuration of a replica ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    /// Clustering measure replicas are driven on.
    pub measure: ClusteringMeasure,
    /// Clustering value replicas are driven to.
    pub target: f64,
    /// Halting tolerance around the target.
    pub tol: f64,
    /// Number of replicas.
    pub replicas: usize,
    /// Base seed; replica `i` uses `seed ^ i`.
    pub seed: u64,
    /// Per-replica budget of consecutive failed proposals
    /// (`None`: the default of the rewiring chain).
    pub max_failed_proposals: Option<u64>,
    /// Connectivity-check batching for the rewiring chain.
    pub connectivity_batch: u64,
    /// Double-edge swap attempts per edge when randomizing a replica
    /// before it is evolved.
    pub randomize_factor: u64,
}

impl EnsembleConfig {
    /// An ensemble of 20 replicas with default chain settings.
    pub fn new(measure: ClusteringMeasure, target: f64) -> Self {
        EnsembleConfig {
            measure,
            target,
            tol: DEFAULT_TOLERANCE,
            replicas: 20,
            seed: 0,
            max_failed_proposals: None,
            connectivity_batch: 1,
            randomize_factor: 10,
        }
    }
}

/// Why a single replica failed outright (distinct from plateauing, which
/// yields a usable graph short of the target).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplicaError {
    /// The degree sequence could not be realized.
    Construct(ConstructError),
    /// The realization could not be connected.
    Connect(ConnectError),
    /// The realization could not be randomized.
    Randomize(RandomizeError),
    /// The rewiring run could not start.
    Evolve(EvolveError),
    /// Statistics of the finished replica were unavailable.
    Stats(StatsError),
}

impl fmt::Display for ReplicaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplicaError::Construct(e) => e.fmt(f),
            ReplicaError::Connect(e) => e.fmt(f),
            ReplicaError::Randomize(e) => e.fmt(f),
            ReplicaError::Evolve(e) => e.fmt(f),
            ReplicaError::Stats(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for ReplicaError {}

/// Why the ensemble as a whole failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleError {
    /// Statistics of the empirical graph were unavailable.
    Empirical(StatsError),
    /// A replica failed.
    Replica {
        /// 1-based index of the failing replica.
        index: usize,
        /// What went wrong.
        source: ReplicaError,
    },
    /// `replicas` was zero.
    NoReplicas,
}

impl fmt::Display for EnsembleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleError::Empirical(e) => write!(f, "empirical graph: {e}"),
            EnsembleError::Replica { index, source } => write!(f, "replica {index}: {source}"),
            EnsembleError::NoReplicas => f.write_str("ensemble needs at least one replica"),
        }
    }
}

impl core::error::Error for EnsembleError {}

/// One finished replica.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaOutcome {
    /// 1-based index within the ensemble.
    pub index: usize,
    /// Seed its generator was built from.
    pub seed: u64,
    /// How its rewiring run stopped. Anything other than
    /// [`EvolveStatus::TargetReached`] means the replica sits off target
    /// and its statistics should be read with that in mind.
    pub status: EvolveStatus,
    /// Clustering value it ended at.
    pub final_clust: f64,
    /// Its summary statistics.
    pub stats: NetStats,
}

/// One statistic aggregated across the ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatRow {
    /// Statistic name, matching the field names of [`NetStats`].
    pub name: &'static str,
    /// Empirical value, when defined.
    pub empirical: Option<f64>,
    /// Mean over the replicas where the statistic is defined.
    pub mean: Option<f64>,
    /// Population standard deviation over those replicas.
    pub std_dev: Option<f64>,
    /// `mean - empirical`; absent for statistics the degree sequence
    /// fixes exactly, and when either side is undefined.
    pub deviation: Option<f64>,
    /// Replicas where the statistic is defined.
    pub defined_replicas: usize,
}

/// An ensemble comparison: the empirical graph against its replicas.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    /// Measure the replicas were driven on.
    pub measure: ClusteringMeasure,
    /// Value they were driven to.
    pub target: f64,
    /// Statistics of the empirical graph.
    pub empirical: NetStats,
    /// Every replica, in index order.
    pub replicas: Vec<ReplicaOutcome>,
    /// Aggregated statistics.
    pub rows: Vec<StatRow>,
    /// Replicas that stopped short of the target.
    pub off_target: usize,
}

/// Generator seed for replica `index` (1-based) of an ensemble.
pub fn replica_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

/// Builds, randomizes, and evolves one replica of `seq`, returning its
/// statistics and how its rewiring run stopped.
pub fn run_replica<R: Rng + SeedableRng>(
    seq: &DegreeSequence,
    cfg: &EnsembleConfig,
    replica_seed: u64,
) -> Result<(EvolveStatus, f64, NetStats), ReplicaError> {
    let mut rng = R::seed_from_u64(replica_seed);
    let mut g = construct::havel_hakimi(seq).map_err(ReplicaError::Construct)?;
    construct::taylor_connect(&mut g, &mut rng).map_err(ReplicaError::Connect)?;
    let swaps = cfg.randomize_factor * g.edge_count() as u64;
    construct::randomize(&mut g, swaps, &mut rng).map_err(ReplicaError::Randomize)?;
    let mut evolve_cfg = EvolveConfig::new(cfg.measure, cfg.target);
    evolve_cfg.tol = cfg.tol;
    evolve_cfg.max_failed_proposals = cfg.max_failed_proposals;
    evolve_cfg.connectivity_batch = cfg.connectivity_batch;
    let out = evolve(g, &evolve_cfg, &mut rng).map_err(ReplicaError::Evolve)?;
    let stats = full_stats(&out.graph).map_err(ReplicaError::Stats)?;
    Ok((out.status, out.final_clust, stats))
}

/// Runs the whole ensemble sequentially and aggregates it. The outcome
/// depends only on the empirical graph and the configuration.
pub fn run_ensemble<R: Rng + SeedableRng>(
    empirical: &Graph,
    cfg: &EnsembleConfig,
) -> Result<EnsembleReport, EnsembleError> {
    if cfg.replicas == 0 {
        return Err(EnsembleError::NoReplicas);
    }
    let empirical_stats = full_stats(empirical).map_err(EnsembleError::Empirical)?;
    let seq = DegreeSequence::new(empirical.degree_sequence());
    let mut replicas = Vec::with_capacity(cfg.replicas);
    for index in 1..=cfg.replicas {
        let seed = replica_seed(cfg.seed, index as u64);
        let (status, final_clust, stats) = run_replica::<R>(&seq, cfg, seed)
            .map_err(|source| EnsembleError::Replica { index, source })?;
        replicas.push(ReplicaOutcome { index, seed, status, final_clust, stats });
    }
    Ok(assemble_report(cfg, empirical_stats, replicas))
}

/// Statistics whose replica values are compared against the empirical
/// graph, with an extractor and whether the degree sequence fixes the
/// value exactly (those rows never carry a deviation).
type FieldSpec = (&'static str, fn(&NetStats) -> Option<f64>, bool);

const FIELDS: [FieldSpec; 14] = [
    ("n", |s| Some(s.n as f64), true),
    ("m", |s| Some(s.m as f64), true),
    ("mean_degree", |s| Some(s.mean_degree), true),
    ("mean_sq_degree", |s| Some(s.mean_sq_degree), true),
    ("triangles", |s| Some(s.triangles as f64), false),
    ("clustering", |s| s.clustering, false),
    ("transitivity", |s| s.transitivity, false),
    ("sv_clustering", |s| s.sv_clustering, false),
    ("sv_transitivity", |s| s.sv_transitivity, false),
    ("assortativity", |s| s.assortativity, false),
    ("mean_path_length", |s| Some(s.mean_path_length), false),
    ("diameter", |s| Some(s.diameter as f64), false),
    ("modularity", |s| Some(s.modularity), false),
    ("community_count", |s| Some(s.community_count as f64), false),
];

/// Aggregates finished replicas against the empirical statistics. Exposed
/// separately from [`run_ensemble`] so callers that schedule replicas
/// themselves (in parallel, say) produce the identical report by handing
/// the outcomes over in index order.
pub fn assemble_report(
    cfg: &EnsembleConfig,
    empirical: NetStats,
    replicas: Vec<ReplicaOutcome>,
) -> EnsembleReport {
    let rows = FIELDS
        .iter()
        .map(|&(name, get, exact)| {
            let values: Vec<f64> = replicas.iter().filter_map(|r| get(&r.stats)).collect();
            let emp = get(&empirical);
            let (mean, std_dev) = if values.is_empty() {
                (None, None)
            } else {
                let k = values.len() as f64;
                let mean = values.iter().sum::<f64>() / k;
                let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k;
                (Some(mean), Some(libm::sqrt(var)))
            };
            let deviation = match (exact, emp, mean) {
                (false, Some(e), Some(m)) => Some(m - e),
                _ => None,
            };
            StatRow {
                name,
                empirical: emp,
                mean,
                std_dev,
                deviation,
                defined_replicas: values.len(),
            }
        })
        .collect();
    let off_target = replicas
        .iter()
        .filter(|r| r.status != EvolveStatus::TargetReached)
        .count();
    EnsembleReport {
        measure: cfg.measure,
        target: cfg.target,
        empirical,
        replicas,
        rows,
        off_target,
    }
}

/// Rows whose replica mean deviates from the empirical value by more than
/// `threshold`, relative to the empirical magnitude; returns
/// `(name, relative deviation)` pairs in row order.
pub fn flagged_rows(report: &EnsembleReport, threshold: f64) -> Vec<(&'static str, f64)> {
    report
        .rows
        .iter()
        .filter_map(|row| {
            let dev = row.deviation?;
            let emp = row.empirical?;
            let rel = dev.abs() / emp.abs().max(1e-12);
            (rel > threshold).then_some((row.name, rel))
        })
        .collect()
}
