//! Building a simple connected realization of a degree sequence.
//!
//! [`havel_hakimi`] deterministically realizes a graphical sequence,
//! usually as a disconnected graph. [`taylor_connect`] merges components
//! with degree-preserving edge rewirings, and [`randomize`] shuffles the
//! result with double-edge swaps into an unbiased draw from the connected
//! realizations of the sequence. The pipeline never changes any degree.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;
use core::mem;

use rand::Rng;

use crate::degree::DegreeSequence;
use crate::graph::{BfsScratch, Graph, NodeId};

/// Why no realization was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructError {
    /// No simple graph realizes the sequence.
    NotGraphical,
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::NotGraphical => f.write_str("degree sequence is not graphical"),
        }
    }
}

impl core::error::Error for ConstructError {}

/// Why a graph could not be made connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectError {
    /// A node of degree zero can never join a connected graph.
    MinDegreeZero {
        /// The isolated node.
        node: NodeId,
    },
    /// Fewer edges than any spanning tree needs.
    TooFewEdges {
        /// Edges present.
        edges: usize,
        /// Edges a spanning tree requires.
        needed: usize,
    },
}

impl fmt::Display for ConnectError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectError::MinDegreeZero { node } => {
                write!(f, "node {node} is isolated; the graph cannot be connected")
            }
            ConnectError::TooFewEdges { edges, needed } => {
                write!(f, "{edges} edges cannot span the graph; at least {needed} are needed")
            }
        }
    }
}

impl core::error::Error for ConnectError {}

/// Why the graph could not be randomized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomizeError {
    /// The input must already be connected; swaps preserve but never
    /// restore connectivity.
    Disconnected,
}

impl fmt::Display for RandomizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RandomizeError::Disconnected => f.write_str("randomize requires a connected graph"),
        }
    }
}

impl core::error::Error for RandomizeError {}

/// Builds one realization of a graphical sequence deterministically: the
/// node with the largest remaining degree is connected to the next-largest
/// remainders, lower ids breaking ties, until all stubs are used.
pub fn havel_hakimi(seq: &DegreeSequence) -> Result<Graph, ConstructError> {
    if !seq.is_graphical() {
        return Err(ConstructError::NotGraphical);
    }
    let degrees = seq.as_slice();
    let mut g = Graph::new(degrees.len());
    // Ordered by residual degree; among equals, Reverse(id) puts the
    // smallest id last, so `last()` is always (max residual, min id).
    let mut pool: BTreeSet<(usize, Reverse<NodeId>)> = degrees
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d > 0)
        .map(|(i, &d)| (d, Reverse(i)))
        .collect();
    let mut picked: Vec<(usize, Reverse<NodeId>)> = Vec::new();
    while let Some(&hub_entry @ (need, Reverse(hub))) = pool.last() {
        pool.remove(&hub_entry);
        picked.clear();
        picked.extend(pool.iter().rev().take(need).copied());
        debug_assert_eq!(picked.len(), need, "graphical sequence ran out of stubs");
        for &entry @ (res, Reverse(target)) in &picked {
            pool.remove(&entry);
            g.add_edge(hub, target).expect("hub edges are always fresh");
            if res > 1 {
                pool.insert((res - 1, Reverse(target)));
            }
        }
    }
    debug_assert_eq!(g.degree_sequence(), degrees);
    Ok(g)
}

fn random_oriented_edge<R: Rng + ?Sized>(
    edges: &[(NodeId, NodeId)],
    rng: &mut R,
) -> (usize, NodeId, NodeId) {
    let idx = rng.random_range(0..edges.len());
    let (u, v) = edges[idx];
    if rng.random::<bool>() {
        (idx, v, u)
    } else {
        (idx, u, v)
    }
}

/// Makes the graph connected by rewiring edge pairs across components:
/// `(i, j)` and `(k, l)` from different components become `(i, k)` and
/// `(j, l)`, joining the two without touching any degree. Fails up front
/// when no degree-preserving rewiring can ever connect the graph.
pub fn taylor_connect<R: Rng + ?Sized>(g: &mut Graph, rng: &mut R) -> Result<(), ConnectError> {
    let mut scratch = BfsScratch::new();
    if scratch.is_connected(g) {
        return Ok(());
    }
    if let Some(node) = (0..g.node_count()).find(|&u| g.degree(u) == 0) {
        return Err(ConnectError::MinDegreeZero { node });
    }
    let needed = g.node_count() - 1;
    if g.edge_count() < needed {
        return Err(ConnectError::TooFewEdges { edges: g.edge_count(), needed });
    }
    loop {
        let (labels, ncomp) = scratch.components(g);
        if ncomp <= 1 {
            return Ok(());
        }
        let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
        let (_, i, j) = random_oriented_edge(&edges, rng);
        let cross: Vec<(NodeId, NodeId)> = edges
            .iter()
            .copied()
            .filter(|&(u, _)| labels[u] != labels[i])
            .collect();
        debug_assert!(!cross.is_empty(), "every component of a min-degree-1 graph has an edge");
        let (_, k, l) = random_oriented_edge(&cross, rng);
        // Across components the new edges cannot already exist.
        g.remove_edge(i, j).expect("edge was just listed");
        g.remove_edge(k, l).expect("edge was just listed");
        g.add_edge(i, k).expect("endpoints lie in different components");
        g.add_edge(j, l).expect("endpoints lie in different components");
    }
}

/// Shuffles a connected graph in place with `steps` double-edge swap
/// attempts: two edges with four distinct endpoints are re-paired at
/// random, and a swap is rejected when it would duplicate an edge or
/// disconnect the graph. Returns the number of accepted swaps.
///
/// A budget of `10 * edge_count` attempts is a practical default for
/// washing out the construction order.
pub fn randomize<R: Rng + ?Sized>(
    g: &mut Graph,
    steps: u64,
    rng: &mut R,
) -> Result<u64, RandomizeError> {
    let mut scratch = BfsScratch::new();
    if !scratch.is_connected(g) {
        return Err(RandomizeError::Disconnected);
    }
    if g.edge_count() < 2 {
        return Ok(0);
    }
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let mut accepted = 0u64;
    for _ in 0..steps {
        let a = rng.random_range(0..edges.len());
        let b = rng.random_range(0..edges.len());
        if a == b {
            continue;
        }
        let (u1, v1) = edges[a];
        let (mut u2, mut v2) = edges[b];
        if rng.random::<bool>() {
            mem::swap(&mut u2, &mut v2);
        }
        if u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2 {
            continue;
        }
        if g.has_edge(u1, u2) || g.has_edge(v1, v2) {
            continue;
        }
        g.remove_edge(u1, v1).expect("edge list mirrors the graph");
        g.remove_edge(u2, v2).expect("edge list mirrors the graph");
        g.add_edge(u1, u2).expect("checked absent");
        g.add_edge(v1, v2).expect("checked absent");
        if scratch.is_connected(g) {
            edges[a] = (u1, u2);
            edges[b] = (v1, v2);
            accepted += 1;
        } else {
            g.remove_edge(u1, u2).expect("just added");
            g.remove_edge(v1, v2).expect("just added");
            g.add_edge(u1, v1).expect("restoring");
            g.add_edge(u2, v2).expect("restoring");
        }
    }
    Ok(accepted)
}
