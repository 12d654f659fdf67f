//! Whole-graph summary statistics.
//!
//! Everything a null-model comparison consumes: degree moments, the
//! clustering measures, degree assortativity, shortest-path statistics,
//! and a greedy agglomerative modularity partition. Assortativity is
//! assembled from exact integer sums so equal graphs always produce
//! bit-equal values; only the final division is floating point.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::mem;

use crate::clustering::{self, measure_value, ClusteringMeasure};
use crate::graph::{Graph, NodeId};

/// Why a statistic could not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsError {
    /// Path statistics need a connected graph.
    Disconnected,
    /// The graph has too few nodes or edges for the statistic.
    TooSmall,
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::Disconnected => f.write_str("graph is not connected"),
            StatsError::TooSmall => f.write_str("graph is too small for this statistic"),
        }
    }
}

impl core::error::Error for StatsError {}

/// Pearson correlation of the degrees at the two ends of an edge, or
/// `None` when the endpoint degrees have no variance (then the
/// correlation is undefined).
pub fn assortativity(g: &Graph) -> Option<f64> {
    let m = g.edge_count() as i128;
    if m == 0 {
        return None;
    }
    let mut sq: i128 = 0;
    let mut cube: i128 = 0;
    for u in 0..g.node_count() {
        let d = g.degree(u) as i128;
        sq += d * d;
        cube += d * d * d;
    }
    let mut cross: i128 = 0;
    for (u, v) in g.edges() {
        cross += g.degree(u) as i128 * g.degree(v) as i128;
    }
    let num = 4 * m * cross - sq * sq;
    let den = 2 * m * cube - sq * sq;
    if den == 0 {
        return None;
    }
    Some(num as f64 / den as f64)
}

/// Shortest-path structure of a connected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PathStats {
    /// Largest distance between any pair.
    pub diameter: usize,
    /// Mean distance over unordered distinct pairs.
    pub mean_path_length: f64,
    /// `histogram[d]` counts unordered pairs at distance `d`
    /// (`histogram[0]` is always 0).
    pub histogram: Vec<u64>,
}

/// Computes distances between all pairs by a search from every source.
/// Fails on disconnected graphs (some distances would be infinite) and on
/// graphs with fewer than two nodes (no pairs to average).
pub fn path_stats(g: &Graph) -> Result<PathStats, StatsError> {
    let n = g.node_count();
    if n < 2 {
        return Err(StatsError::TooSmall);
    }
    let mut dist: Vec<i64> = vec![-1; n];
    let mut queue: Vec<NodeId> = Vec::with_capacity(n);
    let mut histogram: Vec<u64> = Vec::new();
    for source in 0..n {
        dist.iter_mut().for_each(|d| *d = -1);
        dist[source] = 0;
        queue.clear();
        queue.push(source);
        let mut head = 0;
        let mut reached = 1usize;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &v in g.neighbors(u) {
                if dist[v] < 0 {
                    dist[v] = dist[u] + 1;
                    queue.push(v);
                    reached += 1;
                    if v > source {
                        let d = dist[v] as usize;
                        if histogram.len() <= d {
                            histogram.resize(d + 1, 0);
                        }
                        histogram[d] += 1;
                    }
                }
            }
        }
        if reached < n {
            return Err(StatsError::Disconnected);
        }
    }
    let pairs: u64 = histogram.iter().sum();
    let total: u64 = histogram
        .iter()
        .enumerate()
        .map(|(d, &c)| d as u64 * c)
        .sum();
    Ok(PathStats {
        diameter: histogram.len() - 1,
        mean_path_length: total as f64 / pairs as f64,
        histogram,
    })
}

/// Mean distance from each node to every other node. Fails on
/// disconnected graphs and on graphs with fewer than two nodes.
pub fn per_node_mean_distances(g: &Graph) -> Result<Vec<f64>, StatsError> {
    let n = g.node_count();
    if n < 2 {
        return Err(StatsError::TooSmall);
    }
    let mut dist: Vec<i64> = vec![-1; n];
    let mut queue: Vec<NodeId> = Vec::with_capacity(n);
    let mut means = Vec::with_capacity(n);
    for source in 0..n {
        dist.iter_mut().for_each(|d| *d = -1);
        dist[source] = 0;
        queue.clear();
        queue.push(source);
        let mut head = 0;
        let mut total: u64 = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &v in g.neighbors(u) {
                if dist[v] < 0 {
                    dist[v] = dist[u] + 1;
                    queue.push(v);
                    total += dist[v] as u64;
                }
            }
        }
        if queue.len() < n {
            return Err(StatsError::Disconnected);
        }
        means.push(total as f64 / (n - 1) as f64);
    }
    Ok(means)
}

/// A node partition and its modularity score.
#[derive(Debug, Clone, PartialEq)]
pub struct Modularity {
    /// Modularity of the partition.
    pub q: f64,
    /// Community index per node, numbered by first appearance.
    pub labels: Vec<usize>,
    /// Number of communities.
    pub community_count: usize,
}

/// Modularity of an arbitrary partition: the fraction of edges inside
/// communities minus the fraction expected from degrees alone.
pub fn modularity_of(g: &Graph, labels: &[usize]) -> Result<f64, StatsError> {
    let m = g.edge_count();
    if m == 0 || labels.len() != g.node_count() {
        return Err(StatsError::TooSmall);
    }
    let k = labels.iter().copied().max().unwrap_or(0) + 1;
    let mut internal = vec![0u64; k];
    let mut degree_sum = vec![0u64; k];
    for u in 0..g.node_count() {
        degree_sum[labels[u]] += g.degree(u) as u64;
    }
    for (u, v) in g.edges() {
        if labels[u] == labels[v] {
            internal[labels[u]] += 1;
        }
    }
    let m = m as f64;
    Ok((0..k)
        .map(|c| {
            let frac = internal[c] as f64 / m;
            let a = degree_sum[c] as f64 / (2.0 * m);
            frac - a * a
        })
        .sum())
}

/// Greedily partitions the graph by merging, at each step, the connected
/// pair of communities whose merge raises modularity the most, until no
/// merge helps. Ties go to the smallest community pair, so the result is
/// deterministic. The reported score is recomputed from the final
/// partition, not accumulated.
pub fn modularity_partition(g: &Graph) -> Result<Modularity, StatsError> {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Err(StatsError::TooSmall);
    }
    let m = g.edge_count() as f64;
    let mut adj: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); n];
    for (u, v) in g.edges() {
        *adj[u].entry(v).or_insert(0) += 1;
        *adj[v].entry(u).or_insert(0) += 1;
    }
    let mut deg: Vec<u64> = (0..n).map(|u| g.degree(u) as u64).collect();
    let mut alive: Vec<bool> = (0..n).map(|u| g.degree(u) > 0).collect();
    let mut parent: Vec<usize> = (0..n).collect();

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for c in 0..n {
            if !alive[c] {
                continue;
            }
            for (&d, &w) in adj[c].range(c + 1..) {
                let dq = w as f64 / m - (deg[c] as f64 * deg[d] as f64) / (2.0 * m * m);
                if best.is_none_or(|(bq, _, _)| dq > bq) {
                    best = Some((dq, c, d));
                }
            }
        }
        let Some((dq, c, d)) = best else { break };
        if dq <= 0.0 {
            break;
        }
        let row = mem::take(&mut adj[d]);
        for (other, w) in row {
            if other == c {
                continue;
            }
            adj[other].remove(&d);
            *adj[other].entry(c).or_insert(0) += w;
            *adj[c].entry(other).or_insert(0) += w;
        }
        adj[c].remove(&d);
        deg[c] += deg[d];
        alive[d] = false;
        parent[d] = c;
    }

    let mut labels = vec![usize::MAX; n];
    let mut count = 0;
    for u in 0..n {
        let mut root = u;
        while parent[root] != root {
            root = parent[root];
        }
        if labels[root] == usize::MAX {
            labels[root] = count;
            count += 1;
        }
        labels[u] = labels[root];
    }
    let q = modularity_of(g, &labels)?;
    Ok(Modularity { q, labels, community_count: count })
}

/// Every summary statistic of a connected graph in one bundle.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NetStats {
    /// Node count.
    pub n: usize,
    /// Edge count.
    pub m: usize,
    /// Mean degree.
    pub mean_degree: f64,
    /// Mean squared degree.
    pub mean_sq_degree: f64,
    /// Total triangle count.
    pub triangles: u64,
    /// Mean ratio of triangles to triples per node, where defined.
    pub clustering: Option<f64>,
    /// Triangle count over triple count, scaled to `[0, 1]`.
    pub transitivity: Option<f64>,
    /// Mean ratio of triangles to achievable triangles per node.
    pub sv_clustering: Option<f64>,
    /// Triangle count over achievable triangles.
    pub sv_transitivity: Option<f64>,
    /// Degree correlation across edges.
    pub assortativity: Option<f64>,
    /// Mean shortest-path length over pairs.
    pub mean_path_length: f64,
    /// Largest shortest-path length.
    pub diameter: usize,
    /// Modularity of the greedy partition.
    pub modularity: f64,
    /// Communities in the greedy partition.
    pub community_count: usize,
}

/// Computes [`NetStats`] for a connected graph with at least one edge.
pub fn full_stats(g: &Graph) -> Result<NetStats, StatsError> {
    let n = g.node_count();
    if n < 2 || g.edge_count() == 0 {
        return Err(StatsError::TooSmall);
    }
    let paths = path_stats(g)?;
    let partition = modularity_partition(g)?;
    let (_, triangles) = clustering::triangle_counts(g);
    let sum_d: usize = (0..n).map(|u| g.degree(u)).sum();
    let sum_d2: usize = (0..n).map(|u| g.degree(u) * g.degree(u)).sum();
    Ok(NetStats {
        n,
        m: g.edge_count(),
        mean_degree: sum_d as f64 / n as f64,
        mean_sq_degree: sum_d2 as f64 / n as f64,
        triangles: triangles as u64,
        clustering: measure_value(g, ClusteringMeasure::ClusteringCoefficient).ok(),
        transitivity: measure_value(g, ClusteringMeasure::Transitivity).ok(),
        sv_clustering: measure_value(g, ClusteringMeasure::SvClustering).ok(),
        sv_transitivity: measure_value(g, ClusteringMeasure::SvTransitivity).ok(),
        assortativity: assortativity(g),
        mean_path_length: paths.mean_path_length,
        diameter: paths.diameter,
        modularity: partition.q,
        community_count: partition.community_count,
    })
}
