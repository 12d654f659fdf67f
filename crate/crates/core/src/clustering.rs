//! Clustering measures and their incremental building blocks.
//!
//! Everything is integer-based until the final division: per-node triangle
//! counts `delta(i)`, connected triples `tau(i) = d(d-1)/2`, and the
//! degree-limited possible-triangle counts `omega(i)` of Soffer and
//! Vasquez, which discount neighbors that lack the degree to close a
//! triangle. Five scalar measures are derived from them:
//!
//! * raw triangle count `delta(G)`,
//! * clustering coefficient `C` (mean of `delta/tau` over nodes with
//!   degree at least 2),
//! * transitivity `T = 3 delta(G) / tau(G)`,
//! * degree-limited clustering `C~` (mean of `delta/omega` over nodes with
//!   `omega > 0`),
//! * degree-limited transitivity `T~ = sum delta(i) / sum omega(i)`.
//!
//! `C~` and `T~` normalize by what the degree sequence actually permits, so
//! a graph that realizes every possible triangle scores 1 even when plain
//! `C` or `T` cannot reach 1 for that degree sequence.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Graph, NodeId};
use crate::rewire::{Move, MoveError};

/// Why a clustering measure has no value on a given graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureError {
    /// No node has degree at least 2, so there are no connected triples:
    /// `C` and `T` are undefined.
    NoTriples,
    /// The degree structure admits no triangle at any node (`omega(G) = 0`):
    /// `C~` and `T~` are undefined.
    NoPossibleTriangles,
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::NoTriples => {
                write!(f, "no connected triples: clustering coefficient and transitivity undefined")
            }
            MeasureError::NoPossibleTriangles => {
                write!(f, "degrees admit no triangles: degree-limited measures undefined")
            }
        }
    }
}

impl core::error::Error for MeasureError {}

/// The clustering measure a rewiring run drives toward its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum ClusteringMeasure {
    /// Total triangle count `delta(G)`.
    #[cfg_attr(feature = "serde", serde(rename = "triangles"))]
    TriangleCount,
    /// Mean local clustering `C`.
    #[cfg_attr(feature = "serde", serde(rename = "C"))]
    ClusteringCoefficient,
    /// Global transitivity `T`.
    #[cfg_attr(feature = "serde", serde(rename = "T"))]
    Transitivity,
    /// Degree-limited local clustering `C~`.
    #[cfg_attr(feature = "serde", serde(rename = "Ctilde"))]
    SvClustering,
    /// Degree-limited transitivity `T~`.
    #[cfg_attr(feature = "serde", serde(rename = "Ttilde"))]
    SvTransitivity,
}

impl fmt::Display for ClusteringMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ClusteringMeasure::TriangleCount => "triangles",
            ClusteringMeasure::ClusteringCoefficient => "C",
            ClusteringMeasure::Transitivity => "T",
            ClusteringMeasure::SvClustering => "Ctilde",
            ClusteringMeasure::SvTransitivity => "Ttilde",
        };
        f.write_str(name)
    }
}

/// Number of common neighbors of two adjacency lists.
///
/// Iterates the smaller list and binary-searches the larger one, so skewed
/// degree pairs cost `O(d_min log d_max)`.
pub(crate) fn common_neighbor_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter(|w| large.binary_search(w).is_ok())
        .count()
}

/// Calls `f` for every common neighbor of two adjacency lists.
pub(crate) fn for_each_common_neighbor(a: &[NodeId], b: &[NodeId], mut f: impl FnMut(NodeId)) {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    for &w in small {
        if large.binary_search(&w).is_ok() {
            f(w);
        }
    }
}

/// Per-node triangle counts `delta(i)` and the total `delta(G)`.
///
/// Each triangle contributes 1 to each of its three corners and 1 to the
/// total.
pub fn triangle_counts(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut delta = alloc::vec![0usize; n];
    let mut total = 0;
    for (u, v) in g.edges() {
        // Every common neighbor w of an edge (u, v) closes the triangle
        // (u, v, w); crediting w here credits each corner exactly once
        // over the triangle's three edges.
        for_each_common_neighbor(g.neighbors(u), g.neighbors(v), |w| {
            delta[w] += 1;
            total += 1;
        });
    }
    debug_assert_eq!(total % 3, 0);
    (delta, total / 3)
}

/// Per-node connected-triple counts `tau(i) = d(d-1)/2` and the total
/// `tau(G)`.
pub fn triple_counts(g: &Graph) -> (Vec<usize>, usize) {
    let mut total = 0;
    let tau = (0..g.node_count())
        .map(|u| {
            let d = g.degree(u);
            let t = d * d.saturating_sub(1) / 2;
            total += t;
            t
        })
        .collect();
    (tau, total)
}

/// Possible triangles at `u` given the degrees of its neighborhood.
///
/// A neighbor with degree `d_j` can close at most `d_j - 1` triangles at
/// `u`, and no neighbor can close more than `d_u - 1`; each triangle uses
/// two such slots. The count never exceeds `tau(u)`.
pub fn omega_of_node(g: &Graph, u: NodeId) -> usize {
    let d = g.degree(u);
    if d < 2 {
        return 0;
    }
    let cap = d - 1;
    let slots: usize = g
        .neighbors(u)
        .iter()
        .map(|&j| (g.degree(j) - 1).min(cap))
        .sum();
    (slots / 2).min(d * (d - 1) / 2)
}

/// Per-node possible-triangle counts `omega(i)` and the total `omega(G)`.
pub fn omega_counts(g: &Graph) -> (Vec<usize>, usize) {
    let mut total = 0;
    let omega = (0..g.node_count())
        .map(|u| {
            let w = omega_of_node(g, u);
            total += w;
            w
        })
        .collect();
    (omega, total)
}

/// Clustering coefficient `C`: mean of `delta(i)/tau(i)` over the nodes
/// with degree at least 2.
pub fn clustering_coefficient(g: &Graph) -> Result<f64, MeasureError> {
    let (delta, _) = triangle_counts(g);
    let (tau, _) = triple_counts(g);
    let mut eligible = 0usize;
    let mut sum = 0.0;
    for (d, t) in delta.iter().zip(&tau) {
        if *t > 0 {
            eligible += 1;
            sum += *d as f64 / *t as f64;
        }
    }
    if eligible == 0 {
        return Err(MeasureError::NoTriples);
    }
    Ok(sum / eligible as f64)
}

/// Transitivity `T = 3 delta(G) / tau(G)`: the fraction of connected
/// triples that close into triangles.
pub fn transitivity(g: &Graph) -> Result<f64, MeasureError> {
    let (_, delta_g) = triangle_counts(g);
    let (_, tau_g) = triple_counts(g);
    if tau_g == 0 {
        return Err(MeasureError::NoTriples);
    }
    Ok(3.0 * delta_g as f64 / tau_g as f64)
}

/// Degree-limited clustering `C~`: mean of `delta(i)/omega(i)` over the
/// nodes with `omega(i) > 0`.
pub fn sv_clustering(g: &Graph) -> Result<f64, MeasureError> {
    let (delta, _) = triangle_counts(g);
    let (omega, _) = omega_counts(g);
    let mut eligible = 0usize;
    let mut sum = 0.0;
    for (d, w) in delta.iter().zip(&omega) {
        if *w > 0 {
            eligible += 1;
            sum += *d as f64 / *w as f64;
        }
    }
    if eligible == 0 {
        return Err(MeasureError::NoPossibleTriangles);
    }
    Ok(sum / eligible as f64)
}

/// Degree-limited transitivity `T~ = sum delta(i) / sum omega(i)`.
pub fn sv_transitivity(g: &Graph) -> Result<f64, MeasureError> {
    let (_, delta_g) = triangle_counts(g);
    let (_, omega_g) = omega_counts(g);
    if omega_g == 0 {
        return Err(MeasureError::NoPossibleTriangles);
    }
    Ok(3.0 * delta_g as f64 / omega_g as f64)
}

/// Evaluates `measure` on `g`. [`ClusteringMeasure::TriangleCount`] yields
/// `delta(G)` as a float.
pub fn measure_value(g: &Graph, measure: ClusteringMeasure) -> Result<f64, MeasureError> {
    match measure {
        ClusteringMeasure::TriangleCount => Ok(triangle_counts(g).1 as f64),
        ClusteringMeasure::ClusteringCoefficient => clustering_coefficient(g),
        ClusteringMeasure::Transitivity => transitivity(g),
        ClusteringMeasure::SvClustering => sv_clustering(g),
        ClusteringMeasure::SvTransitivity => sv_transitivity(g),
    }
}

/// Change in the total triangle count `delta(G)` if `m` were applied to
/// `g`, computed from the neighborhoods of the five nodes involved; the
/// graph is not touched and nothing is recounted globally.
///
/// The two inserted edges can only gain triangles (inserting `(y1, y2)`
/// always gains at least the triangle through `x`), the two removed edges
/// can only lose them, and no triangle contains both inserted edges, so
/// the four contributions add up independently:
///
/// * gains of `(y1, y2)`: common neighbors of `y1` and `y2`, minus the
///   removed slots where `z1` or `z2` was the witness;
/// * gains of `(z1, z2)`: common neighbors of `z1` and `z2`, minus the
///   removed slots where `y1` or `y2` was the witness;
/// * losses of `(y1, z1)` and `(y2, z2)`: their common neighbors before
///   the move.
pub fn rewire_triangle_delta(g: &Graph, m: &Move) -> Result<i64, MoveError> {
    m.validate(g)?;
    let n_y1 = g.neighbors(m.y1);
    let n_y2 = g.neighbors(m.y2);
    let n_z1 = g.neighbors(m.z1);
    let n_z2 = g.neighbors(m.z2);

    let loss1 = common_neighbor_count(n_y1, n_z1);
    let loss2 = common_neighbor_count(n_y2, n_z2);
    let mut gain1 = common_neighbor_count(n_y1, n_y2);
    if g.has_edge(m.y2, m.z1) {
        gain1 -= 1;
    }
    if g.has_edge(m.y1, m.z2) {
        gain1 -= 1;
    }
    let mut gain2 = common_neighbor_count(n_z1, n_z2);
    if g.has_edge(m.z2, m.y1) {
        gain2 -= 1;
    }
    if g.has_edge(m.z1, m.y2) {
        gain2 -= 1;
    }
    Ok(gain1 as i64 + gain2 as i64 - loss1 as i64 - loss2 as i64)
}
