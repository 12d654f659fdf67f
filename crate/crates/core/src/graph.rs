//! Undirected simple graphs on dense integer node ids.
//!
//! Adjacency is stored as one sorted neighbor list per node: membership
//! tests are `O(log d)`, neighbor iteration is deterministic, a uniform
//! random neighbor is a single index lookup, and insert/remove are `O(d)`
//! shifts, which is cheap at the degrees this crate works with. Degrees
//! are the list lengths, so the degree sequence cannot drift out of sync
//! with the edge set.

use alloc::vec::Vec;
use core::fmt;

/// Dense node index in `0..node_count`, stable for the lifetime of the
/// graph that issued it.
pub type NodeId = usize;

/// Error raised by edge mutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphError {
    /// A node index at or beyond `node_count`.
    NodeOutOfRange {
        /// The offending index.
        node: NodeId,
        /// Number of nodes in the graph.
        node_count: usize,
    },
    /// Self-loops are not representable.
    SelfLoop {
        /// The node that was named twice.
        node: NodeId,
    },
    /// The edge to insert is already present.
    DuplicateEdge {
        /// One endpoint.
        u: NodeId,
        /// The other endpoint.
        v: NodeId,
    },
    /// The edge to remove is not present.
    MissingEdge {
        /// One endpoint.
        u: NodeId,
        /// The other endpoint.
        v: NodeId,
    },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphError::NodeOutOfRange { node, node_count } => {
                write!(f, "node {node} out of range for graph with {node_count} nodes")
            }
            GraphError::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            GraphError::DuplicateEdge { u, v } => write!(f, "edge ({u}, {v}) already present"),
            GraphError::MissingEdge { u, v } => write!(f, "edge ({u}, {v}) not present"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Undirected simple graph: no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Creates a graph with `node_count` nodes and no edges.
    pub fn new(node_count: usize) -> Self {
        Graph {
            adj: alloc::vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Creates a graph from an edge list. Fails on the first self-loop,
    /// duplicate edge, or out-of-range endpoint.
    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::new(node_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Degree of `u`.
    ///
    /// # Panics
    /// Panics if `u` is out of range.
    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u].len()
    }

    /// Neighbors of `u` in ascending order.
    ///
    /// # Panics
    /// Panics if `u` is out of range.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u]
    }

    /// Whether the edge `(u, v)` is present.
    ///
    /// # Panics
    /// Panics if `u` is out of range.
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    fn check_pair(&self, u: NodeId, v: NodeId) -> Result<(), GraphError> {
        let n = self.node_count();
        if u >= n {
            return Err(GraphError::NodeOutOfRange { node: u, node_count: n });
        }
        if v >= n {
            return Err(GraphError::NodeOutOfRange { node: v, node_count: n });
        }
        if u == v {
            return Err(GraphError::SelfLoop { node: u });
        }
        Ok(())
    }

    /// Inserts the edge `(u, v)`.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        let pos_u = match self.adj[u].binary_search(&v) {
            Ok(_) => return Err(GraphError::DuplicateEdge { u, v }),
            Err(pos) => pos,
        };
        // Symmetry: v's list cannot contain u if u's list lacked v.
        let pos_v = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[u].insert(pos_u, v);
        self.adj[v].insert(pos_v, u);
        self.edge_count += 1;
        debug_assert!(self.has_edge(u, v) && self.has_edge(v, u));
        Ok(())
    }

    /// Removes the edge `(u, v)`.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        let pos_u = match self.adj[u].binary_search(&v) {
            Ok(pos) => pos,
            Err(_) => return Err(GraphError::MissingEdge { u, v }),
        };
        let pos_v = self.adj[v].binary_search(&u).expect("adjacency symmetry");
        self.adj[u].remove(pos_u);
        self.adj[v].remove(pos_v);
        self.edge_count -= 1;
        debug_assert!(!self.has_edge(u, v) && !self.has_edge(v, u));
        Ok(())
    }

    /// Iterates every edge once as `(u, v)` with `u < v`, ordered by `u`
    /// and then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Per-node degrees in node order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Whether the graph has a single connected component. Graphs with at
    /// most one node count as connected.
    ///
    /// Allocates fresh scratch space; use [`BfsScratch`] to amortize the
    /// allocation over many queries.
    pub fn is_connected(&self) -> bool {
        BfsScratch::new().is_connected(self)
    }
}

/// Reusable breadth-first search scratch space.
///
/// Connectivity is queried for every candidate move in the rewiring loop;
/// keeping the visit marks and the queue between calls avoids an `O(N)`
/// allocation per query. Marks are epoch-stamped so resetting them is
/// `O(1)`.
#[derive(Debug, Clone, Default)]
pub struct BfsScratch {
    mark: Vec<u32>,
    epoch: u32,
    queue: Vec<NodeId>,
}

impl BfsScratch {
    /// Creates empty scratch space; buffers grow on first use.
    pub fn new() -> Self {
        Self::default()
    }

    fn begin(&mut self, n: usize) {
        if self.mark.len() < n {
            self.mark.resize(n, 0);
        }
        if self.epoch == u32::MAX {
            self.mark.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.queue.clear();
    }

    /// Whether `g` has a single connected component (vacuously true for
    /// graphs with at most one node).
    pub fn is_connected(&mut self, g: &Graph) -> bool {
        let n = g.node_count();
        if n <= 1 {
            return true;
        }
        self.begin(n);
        self.mark[0] = self.epoch;
        self.queue.push(0);
        let mut head = 0;
        let mut seen = 1;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            for &v in g.neighbors(u) {
                if self.mark[v] != self.epoch {
                    self.mark[v] = self.epoch;
                    self.queue.push(v);
                    seen += 1;
                }
            }
        }
        seen == n
    }

    /// Labels connected components with dense ids in order of discovery
    /// from node 0 upward, returning the per-node labels and the number of
    /// components.
    pub fn components(&mut self, g: &Graph) -> (Vec<usize>, usize) {
        let n = g.node_count();
        let mut label = alloc::vec![usize::MAX; n];
        let mut count = 0;
        self.begin(n);
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            self.queue.clear();
            self.queue.push(start);
            let mut head = 0;
            while head < self.queue.len() {
                let u = self.queue[head];
                head += 1;
                for &v in g.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        self.queue.push(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }
}
