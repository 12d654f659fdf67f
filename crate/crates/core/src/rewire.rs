//! Degree-preserving rewiring chain that drives clustering to a target.
//!
//! One move rewires the neighborhood of a hub node `x`: two of its
//! neighbors `y1, y2` (both of degree > 1) donate their edges to outer
//! nodes `z1, z2`, the edges `(y1, z1)` and `(y2, z2)` are removed, and
//! `(y1, y2)` and `(z1, z2)` are inserted. Degrees are untouched, the
//! triangle `(x, y1, y2)` is always created, and the chain accepts a move
//! only if it adds triangles net of the ones it destroys, the chosen
//! clustering measure strictly increases, and the graph stays simple and
//! connected. Permissive mode drops both improvement requirements and
//! keeps only the connectivity constraint, turning the hill climb into a
//! random walk over realizations.
//!
//! [`evolve`] runs the chain until the measure is within tolerance of the
//! target, the target is found to lie below the starting value, too many
//! consecutive proposals fail, or an acceptance budget is exhausted.
//! [`Chain`] exposes the same machinery one step at a time for callers
//! that want to instrument a run.
//!
//! Acceptance never recounts triangles globally: per-node triangle and
//! possible-triangle counts are maintained incrementally from the
//! neighborhoods the move touches, and moves are applied to the live
//! graph and inverted on rejection instead of cloning it.

use alloc::vec::Vec;
use core::fmt;
use core::mem;

use rand::Rng;

use crate::clustering::{
    self, for_each_common_neighbor, measure_value, omega_of_node, ClusteringMeasure, MeasureError,
};
use crate::graph::{BfsScratch, Graph, NodeId};

/// Default halting tolerance around the target value.
pub const DEFAULT_TOLERANCE: f64 = 0.01;

/// Default budget of consecutive failed proposals per edge; a run on a
/// graph with `M` edges gives up after `100 * M` rejections in a row.
pub const DEFAULT_FAILED_PROPOSALS_PER_EDGE: u64 = 100;

/// How many times a proposal redraws after a dead-end selection (a hub
/// whose eligible neighbors or outer nodes run out) before reporting
/// failure for this attempt.
pub const PROPOSE_RETRY_LIMIT: usize = 64;

/// One candidate rewiring, identified by the five nodes involved.
///
/// Applying the move removes `(y1, z1)` and `(y2, z2)` and inserts
/// `(y1, y2)` and `(z1, z2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    /// Hub node; `y1` and `y2` are among its neighbors.
    pub x: NodeId,
    /// First donor neighbor of `x`; loses `z1`, gains `y2`.
    pub y1: NodeId,
    /// Second donor neighbor of `x`; loses `z2`, gains `y1`.
    pub y2: NodeId,
    /// Outer neighbor of `y1`; loses `y1`, gains `z2`.
    pub z1: NodeId,
    /// Outer neighbor of `y2`; loses `y2`, gains `z1`.
    pub z2: NodeId,
}

/// Why a [`Move`] is not applicable to a given graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveError {
    /// A node index at or beyond the node count.
    NodeOutOfRange {
        /// The offending index.
        node: NodeId,
    },
    /// Two roles that must be distinct name the same node.
    NodesCoincide,
    /// `x`, `y1` and `y2` must all have degree > 1.
    DegreeTooLow {
        /// The node with degree < 2.
        node: NodeId,
    },
    /// `y1` and `y2` must be neighbors of `x`.
    NotNeighborOfHub {
        /// The node that is not adjacent to `x`.
        y: NodeId,
    },
    /// An edge the move removes is not present.
    EdgeToRemoveMissing {
        /// One endpoint.
        u: NodeId,
        /// The other endpoint.
        v: NodeId,
    },
    /// An edge the move inserts is already present.
    EdgeToAddPresent {
        /// One endpoint.
        u: NodeId,
        /// The other endpoint.
        v: NodeId,
    },
}

impl fmt::Display for MoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MoveError::NodeOutOfRange { node } => write!(f, "move names node {node} out of range"),
            MoveError::NodesCoincide => write!(f, "move roles name coinciding nodes"),
            MoveError::DegreeTooLow { node } => {
                write!(f, "node {node} needs degree > 1 for its role")
            }
            MoveError::NotNeighborOfHub { y } => write!(f, "node {y} is not a neighbor of the hub"),
            MoveError::EdgeToRemoveMissing { u, v } => {
                write!(f, "edge ({u}, {v}) to remove is not present")
            }
            MoveError::EdgeToAddPresent { u, v } => {
                write!(f, "edge ({u}, {v}) to insert is already present")
            }
        }
    }
}

impl core::error::Error for MoveError {}

impl Move {
    /// Checks that the move is applicable to `g`: all roles distinct where
    /// required, `x`, `y1`, `y2` of degree > 1, `y1, y2` neighbors of `x`,
    /// the edges to remove present, and the edges to insert absent.
    pub fn validate(&self, g: &Graph) -> Result<(), MoveError> {
        let n = g.node_count();
        for node in [self.x, self.y1, self.y2, self.z1, self.z2] {
            if node >= n {
                return Err(MoveError::NodeOutOfRange { node });
            }
        }
        let distinct = self.y1 != self.y2
            && self.z1 != self.x
            && self.z1 != self.z2
            && self.z1 != self.y2
            && self.z2 != self.x
            && self.z2 != self.y1;
        if !distinct {
            return Err(MoveError::NodesCoincide);
        }
        for node in [self.x, self.y1, self.y2] {
            if g.degree(node) < 2 {
                return Err(MoveError::DegreeTooLow { node });
            }
        }
        for y in [self.y1, self.y2] {
            if !g.has_edge(self.x, y) {
                return Err(MoveError::NotNeighborOfHub { y });
            }
        }
        for (u, v) in [(self.y1, self.z1), (self.y2, self.z2)] {
            if !g.has_edge(u, v) {
                return Err(MoveError::EdgeToRemoveMissing { u, v });
            }
        }
        for (u, v) in [(self.y1, self.y2), (self.z1, self.z2)] {
            if g.has_edge(u, v) {
                return Err(MoveError::EdgeToAddPresent { u, v });
            }
        }
        Ok(())
    }
}

/// Applies `m` to `g` after validating it.
pub fn apply_move(g: &mut Graph, m: &Move) -> Result<(), MoveError> {
    m.validate(g)?;
    apply_unchecked(g, m);
    Ok(())
}

/// Inverts a previously applied `m` on `g`, restoring the original edges.
pub fn undo_move(g: &mut Graph, m: &Move) -> Result<(), MoveError> {
    for (u, v) in [(m.y1, m.y2), (m.z1, m.z2)] {
        if !g.has_edge(u, v) {
            return Err(MoveError::EdgeToRemoveMissing { u, v });
        }
    }
    for (u, v) in [(m.y1, m.z1), (m.y2, m.z2)] {
        if g.has_edge(u, v) {
            return Err(MoveError::EdgeToAddPresent { u, v });
        }
    }
    undo_unchecked(g, m);
    Ok(())
}

fn apply_unchecked(g: &mut Graph, m: &Move) {
    g.remove_edge(m.y1, m.z1).expect("validated move");
    g.remove_edge(m.y2, m.z2).expect("validated move");
    g.add_edge(m.y1, m.y2).expect("validated move");
    g.add_edge(m.z1, m.z2).expect("validated move");
}

fn undo_unchecked(g: &mut Graph, m: &Move) {
    g.remove_edge(m.y1, m.y2).expect("applied move");
    g.remove_edge(m.z1, m.z2).expect("applied move");
    g.add_edge(m.y1, m.z1).expect("applied move");
    g.add_edge(m.y2, m.z2).expect("applied move");
}

/// Why no proposal was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProposeError {
    /// No hub with two eligible neighbors exists, so no move can ever be
    /// proposed on this graph (degrees do not change under rewiring).
    NoEligiblePair,
    /// Every redraw within [`PROPOSE_RETRY_LIMIT`] dead-ended; the caller
    /// may simply try again.
    RetryExhausted,
}

impl fmt::Display for ProposeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProposeError::NoEligiblePair => {
                write!(f, "no node has two neighbors of degree > 1; no rewiring move exists")
            }
            ProposeError::RetryExhausted => {
                write!(f, "no valid selection found within the retry limit")
            }
        }
    }
}

impl core::error::Error for ProposeError {}

fn eligible_hubs(g: &Graph) -> Vec<NodeId> {
    (0..g.node_count()).filter(|&u| g.degree(u) > 1).collect()
}

fn any_feasible_pair(g: &Graph, hubs: &[NodeId]) -> bool {
    hubs.iter().any(|&x| {
        g.neighbors(x)
            .iter()
            .filter(|&&y| g.degree(y) > 1)
            .nth(1)
            .is_some()
    })
}

/// Draws a move: a uniform hub `x` of degree > 1, two distinct uniform
/// neighbors `y1, y2` of degree > 1, a uniform `z1` from `y1`'s other
/// neighbors and a uniform `z2` from `y2`'s, avoiding the hub and each
/// other. Dead-end draws restart from the hub selection.
///
/// Whether the edges the move would insert already exist is deliberately
/// not checked here; that rejection is the acceptance step's job.
pub fn propose_move<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Move, ProposeError> {
    let hubs = eligible_hubs(g);
    if !any_feasible_pair(g, &hubs) {
        return Err(ProposeError::NoEligiblePair);
    }
    propose_from(g, &hubs, &mut Vec::new(), &mut Vec::new(), rng)
}

fn propose_from<R: Rng + ?Sized>(
    g: &Graph,
    hubs: &[NodeId],
    ybuf: &mut Vec<NodeId>,
    zbuf: &mut Vec<NodeId>,
    rng: &mut R,
) -> Result<Move, ProposeError> {
    for _ in 0..PROPOSE_RETRY_LIMIT {
        let x = hubs[rng.random_range(0..hubs.len())];
        ybuf.clear();
        ybuf.extend(g.neighbors(x).iter().copied().filter(|&y| g.degree(y) > 1));
        if ybuf.len() < 2 {
            continue;
        }
        let i = rng.random_range(0..ybuf.len());
        let mut j = rng.random_range(0..ybuf.len() - 1);
        if j >= i {
            j += 1;
        }
        let (y1, y2) = (ybuf[i], ybuf[j]);

        zbuf.clear();
        zbuf.extend(
            g.neighbors(y1)
                .iter()
                .copied()
                .filter(|&z| z != x && z != y2),
        );
        if zbuf.is_empty() {
            continue;
        }
        let z1 = zbuf[rng.random_range(0..zbuf.len())];

        zbuf.clear();
        zbuf.extend(
            g.neighbors(y2)
                .iter()
                .copied()
                .filter(|&z| z != x && z != z1 && z != y1),
        );
        if zbuf.is_empty() {
            continue;
        }
        let z2 = zbuf[rng.random_range(0..zbuf.len())];

        return Ok(Move { x, y1, y2, z1, z2 });
    }
    Err(ProposeError::RetryExhausted)
}

/// Pure measure-level acceptance rule: a move is kept only if the graph
/// stays connected and, outside permissive mode, the measure strictly
/// increases. [`Chain::step_with`] additionally requires a positive net
/// triangle delta before this comparison applies.
pub fn accept_rule(
    clust_before: f64,
    clust_after: f64,
    keeps_connected: bool,
    permissive: bool,
) -> bool {
    keeps_connected && (permissive || clust_after > clust_before)
}

/// What a single evaluation of a candidate move found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveEval {
    /// Measure value the move would produce.
    pub clust_after: f64,
    /// Exact change in the total triangle count.
    pub triangle_delta: i64,
    /// Whether the rewired graph stays connected.
    pub keeps_connected: bool,
}

/// Why [`evaluate_move`] produced no evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluateError {
    /// The move does not apply to this graph.
    Move(MoveError),
    /// The measure is undefined on the rewired graph.
    Measure(MeasureError),
}

impl fmt::Display for EvaluateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvaluateError::Move(e) => e.fmt(f),
            EvaluateError::Measure(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for EvaluateError {}

impl From<MoveError> for EvaluateError {
    fn from(e: MoveError) -> Self {
        EvaluateError::Move(e)
    }
}

/// Evaluates a candidate move without leaving a mark: the move is applied,
/// measured, checked for connectivity, and inverted, so `g` is returned to
/// its exact prior state. The triangle delta is computed locally from the
/// touched neighborhoods, never by a global recount.
pub fn evaluate_move(
    g: &mut Graph,
    m: &Move,
    measure: ClusteringMeasure,
) -> Result<MoveEval, EvaluateError> {
    let triangle_delta = clustering::rewire_triangle_delta(g, m)?;
    apply_unchecked(g, m);
    let clust_after = measure_value(g, measure);
    let keeps_connected = g.is_connected();
    undo_unchecked(g, m);
    Ok(MoveEval {
        clust_after: clust_after.map_err(EvaluateError::Measure)?,
        triangle_delta,
        keeps_connected,
    })
}

/// Why a rewiring run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EvolveStatus {
    /// The measure is within tolerance of the target.
    TargetReached,
    /// The budget of consecutive failed proposals ran out.
    Plateaued,
    /// The starting value already exceeds the target; the chain only moves
    /// upward, so the input is returned unchanged.
    TargetBelowInitial,
    /// The accepted-step budget ran out.
    BudgetExhausted,
}

impl fmt::Display for EvolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EvolveStatus::TargetReached => "target_reached",
            EvolveStatus::Plateaued => "plateaued",
            EvolveStatus::TargetBelowInitial => "target_below_initial",
            EvolveStatus::BudgetExhausted => "budget_exhausted",
        };
        f.write_str(s)
    }
}

/// Configuration of a rewiring run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    /// Measure that defines "clustering" for this run.
    pub measure: ClusteringMeasure,
    /// Value to drive the measure to.
    pub target: f64,
    /// Halting tolerance: the run stops once `|clust - target| < tol`.
    pub tol: f64,
    /// Consecutive failed proposals after which the run plateaus.
    /// `None` uses [`DEFAULT_FAILED_PROPOSALS_PER_EDGE`] per edge.
    pub max_failed_proposals: Option<u64>,
    /// Accepted moves after which the run stops; `None` means unbounded.
    pub max_accepted_steps: Option<u64>,
    /// Accept any move that keeps the graph connected, improving or not.
    pub permissive: bool,
    /// Run the connectivity search only on every k-th accepted move,
    /// rolling back to the last verified state when it fails. 1 checks
    /// every accepted move.
    pub connectivity_batch: u64,
    /// Record a trace point for every proposal instead of only accepted
    /// moves plus the endpoints.
    pub trace_proposals: bool,
}

impl EvolveConfig {
    /// Configuration with default tolerance, budgets, and policies.
    pub fn new(measure: ClusteringMeasure, target: f64) -> Self {
        EvolveConfig {
            measure,
            target,
            tol: DEFAULT_TOLERANCE,
            max_failed_proposals: None,
            max_accepted_steps: None,
            permissive: false,
            connectivity_batch: 1,
            trace_proposals: false,
        }
    }
}

/// Whether the connectivity search runs for the next accepted move, given
/// how many accepted moves are pending since the last verified state.
pub fn connectivity_check_policy(cfg: &EvolveConfig, accepted_unverified: u64) -> bool {
    cfg.connectivity_batch <= 1 || (accepted_unverified + 1).is_multiple_of(cfg.connectivity_batch)
}

/// One record of a run's progress.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Number of proposals made when the point was recorded.
    pub step: u64,
    /// Total triangle count.
    pub delta_g: u64,
    /// Total possible-triangle count.
    pub omega_g: u64,
    /// Value of the run's measure.
    pub clust: f64,
    /// Whether the point records an accepted move (endpoints and rejected
    /// proposals carry `false`).
    pub accepted: bool,
}

/// Result of a completed rewiring run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveOutcome {
    /// The final graph; always simple and connected.
    pub graph: Graph,
    /// Progress trace: an initial point, accepted moves (every proposal
    /// with [`EvolveConfig::trace_proposals`]), and a final point. Empty
    /// when the run returned immediately.
    pub trace: Vec<TracePoint>,
    /// Why the run stopped.
    pub status: EvolveStatus,
    /// Total proposals drawn.
    pub proposals: u64,
    /// Accepted moves surviving in the final graph.
    pub accepted_steps: u64,
    /// Final value of the measure.
    pub final_clust: f64,
}

/// Why a run could not start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolveError {
    /// The measure has no value on the input graph.
    UndefinedMeasure(MeasureError),
    /// The input graph is not connected; the chain preserves connectivity,
    /// so it requires it up front.
    Disconnected,
    /// No rewiring move exists on this graph and none can ever appear,
    /// because eligibility depends only on the (preserved) degrees.
    NoFeasibleMove,
    /// A configuration field is out of range.
    InvalidConfig(&'static str),
}

impl fmt::Display for EvolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvolveError::UndefinedMeasure(e) => write!(f, "measure undefined on input: {e}"),
            EvolveError::Disconnected => write!(f, "input graph is not connected"),
            EvolveError::NoFeasibleMove => {
                write!(f, "no rewiring move is feasible on this graph")
            }
            EvolveError::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
        }
    }
}

impl core::error::Error for EvolveError {}

impl From<MeasureError> for EvolveError {
    fn from(e: MeasureError) -> Self {
        EvolveError::UndefinedMeasure(e)
    }
}

/// Outcome of a single chain step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// The move was applied and the state updated.
    Accepted,
    /// The move was inverted; the state is unchanged.
    Rejected(RejectReason),
    /// No candidate was drawn within the retry limit; nothing changed.
    ProposalFailed,
}

/// Why a candidate move was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// An edge the move would insert already exists.
    TargetEdgePresent,
    /// The move does not satisfy the structural requirements.
    InvalidMove,
    /// The move would not add triangles, or the measure would not
    /// strictly increase.
    NotImproving,
    /// The rewired graph would be disconnected.
    Disconnects,
    /// The measure would become undefined.
    MeasureUndefined,
}

#[derive(Debug, Clone, Copy)]
struct Touched {
    node: NodeId,
    d_delta: i64,
    new_omega: Option<usize>,
}

/// The rewiring Markov chain with incrementally maintained clustering
/// state.
///
/// Per-node triangle counts, possible-triangle counts, and the ratio sums
/// behind the mean-based measures are updated from the neighborhoods each
/// move touches. [`Chain::audit_exact`] recomputes everything from scratch
/// and compares, which [`evolve`] does in debug builds every 100 accepted
/// moves.
#[derive(Debug, Clone)]
pub struct Chain {
    g: Graph,
    measure: ClusteringMeasure,
    tau: Vec<usize>,
    tau_g: usize,
    n2: usize,
    delta: Vec<usize>,
    delta_g: usize,
    omega: Vec<usize>,
    omega_g: usize,
    n_omega: usize,
    sum_ratio: f64,
    hubs: Vec<NodeId>,
    feasible: bool,
    bfs: BfsScratch,
    ybuf: Vec<NodeId>,
    zbuf: Vec<NodeId>,
    witness: [Vec<NodeId>; 4],
    touched: Vec<Touched>,
    journal: Vec<Move>,
}

fn clust_value(
    measure: ClusteringMeasure,
    delta_g: usize,
    tau_g: usize,
    n2: usize,
    omega_g: usize,
    n_omega: usize,
    sum_ratio: f64,
) -> f64 {
    match measure {
        ClusteringMeasure::TriangleCount => delta_g as f64,
        ClusteringMeasure::Transitivity => 3.0 * delta_g as f64 / tau_g as f64,
        ClusteringMeasure::ClusteringCoefficient => sum_ratio / n2 as f64,
        ClusteringMeasure::SvClustering => sum_ratio / n_omega as f64,
        ClusteringMeasure::SvTransitivity => 3.0 * delta_g as f64 / omega_g as f64,
    }
}

impl Chain {
    /// Builds the chain state for `g`. Fails if `g` is disconnected or the
    /// measure is undefined on it.
    pub fn new(g: Graph, measure: ClusteringMeasure) -> Result<Self, EvolveError> {
        let mut bfs = BfsScratch::new();
        if !bfs.is_connected(&g) {
            return Err(EvolveError::Disconnected);
        }
        let (tau, tau_g) = clustering::triple_counts(&g);
        let n2 = tau.iter().filter(|&&t| t > 0).count();
        let hubs = eligible_hubs(&g);
        let feasible = any_feasible_pair(&g, &hubs);
        let mut chain = Chain {
            g,
            measure,
            tau,
            tau_g,
            n2,
            delta: Vec::new(),
            delta_g: 0,
            omega: Vec::new(),
            omega_g: 0,
            n_omega: 0,
            sum_ratio: 0.0,
            hubs,
            feasible,
            bfs,
            ybuf: Vec::new(),
            zbuf: Vec::new(),
            witness: Default::default(),
            touched: Vec::new(),
            journal: Vec::new(),
        };
        chain.recompute_dynamic_state();
        match measure {
            ClusteringMeasure::ClusteringCoefficient | ClusteringMeasure::Transitivity => {
                if chain.n2 == 0 {
                    return Err(MeasureError::NoTriples.into());
                }
            }
            ClusteringMeasure::SvClustering | ClusteringMeasure::SvTransitivity => {
                if chain.omega_g == 0 {
                    return Err(MeasureError::NoPossibleTriangles.into());
                }
            }
            ClusteringMeasure::TriangleCount => {}
        }
        Ok(chain)
    }

    fn recompute_dynamic_state(&mut self) {
        let (delta, delta_g) = clustering::triangle_counts(&self.g);
        let (omega, omega_g) = clustering::omega_counts(&self.g);
        self.n_omega = omega.iter().filter(|&&w| w > 0).count();
        self.sum_ratio = match self.measure {
            ClusteringMeasure::ClusteringCoefficient => delta
                .iter()
                .zip(&self.tau)
                .filter(|(_, &t)| t > 0)
                .map(|(&d, &t)| d as f64 / t as f64)
                .sum(),
            ClusteringMeasure::SvClustering => delta
                .iter()
                .zip(&omega)
                .filter(|(_, &w)| w > 0)
                .map(|(&d, &w)| d as f64 / w as f64)
                .sum(),
            _ => 0.0,
        };
        self.delta = delta;
        self.delta_g = delta_g;
        self.omega = omega;
        self.omega_g = omega_g;
    }

    /// The current graph.
    pub fn graph(&self) -> &Graph {
        &self.g
    }

    /// Consumes the chain, returning the graph.
    pub fn into_graph(self) -> Graph {
        self.g
    }

    /// The measure this chain drives.
    pub fn measure(&self) -> ClusteringMeasure {
        self.measure
    }

    /// Current value of the measure.
    pub fn clust(&self) -> f64 {
        clust_value(
            self.measure,
            self.delta_g,
            self.tau_g,
            self.n2,
            self.omega_g,
            self.n_omega,
            self.sum_ratio,
        )
    }

    /// Current total triangle count.
    pub fn triangle_total(&self) -> usize {
        self.delta_g
    }

    /// Current total possible-triangle count.
    pub fn omega_total(&self) -> usize {
        self.omega_g
    }

    /// Whether any move can ever be proposed on this graph.
    pub fn has_feasible_move(&self) -> bool {
        self.feasible
    }

    /// Accepted moves not yet covered by a connectivity search.
    pub fn unverified_moves(&self) -> usize {
        self.journal.len()
    }

    /// Draws a candidate move; see [`propose_move`].
    pub fn propose<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Move, ProposeError> {
        if !self.feasible {
            return Err(ProposeError::NoEligiblePair);
        }
        propose_from(&self.g, &self.hubs, &mut self.ybuf, &mut self.zbuf, rng)
    }

    /// Proposes and decides one move. With `check_connectivity` false the
    /// connectivity search is skipped and an accepted move is recorded as
    /// unverified, to be covered by a later [`Chain::verify_or_rollback`].
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        permissive: bool,
        check_connectivity: bool,
    ) -> StepOutcome {
        match self.propose(rng) {
            Ok(m) => self.step_with(&m, permissive, check_connectivity),
            Err(_) => StepOutcome::ProposalFailed,
        }
    }

    /// Decides the given candidate move instead of drawing one.
    pub fn step_with(&mut self, m: &Move, permissive: bool, check_connectivity: bool) -> StepOutcome {
        match m.validate(&self.g) {
            Ok(()) => {}
            Err(MoveError::EdgeToAddPresent { .. }) => {
                return StepOutcome::Rejected(RejectReason::TargetEdgePresent)
            }
            Err(_) => return StepOutcome::Rejected(RejectReason::InvalidMove),
        }

        let clust_before = self.clust();
        let mut witness = mem::take(&mut self.witness);
        let [wl1, wl2, wg1, wg2] = &mut witness;

        // Witnesses of lost triangles live on the removed edges' common
        // neighborhoods in the current graph; gains are read off the new
        // edges' common neighborhoods after applying the move.
        collect_common(&self.g, m.y1, m.z1, wl1);
        collect_common(&self.g, m.y2, m.z2, wl2);
        apply_unchecked(&mut self.g, m);
        collect_common(&self.g, m.y1, m.y2, wg1);
        collect_common(&self.g, m.z1, m.z2, wg2);

        let (gain1, gain2) = (wg1.len() as i64, wg2.len() as i64);
        let (loss1, loss2) = (wl1.len() as i64, wl2.len() as i64);
        let triangle_delta = gain1 + gain2 - loss1 - loss2;

        let mut touched = mem::take(&mut self.touched);
        touched.clear();
        for (node, d_delta) in [
            (m.y1, gain1 - loss1),
            (m.y2, gain1 - loss2),
            (m.z1, gain2 - loss1),
            (m.z2, gain2 - loss2),
        ] {
            touched.push(Touched {
                node,
                d_delta,
                new_omega: Some(omega_of_node(&self.g, node)),
            });
        }
        for (list, sign) in [(&*wg1, 1), (&*wg2, 1), (&*wl1, -1), (&*wl2, -1)] {
            for &w in list {
                touched.push(Touched { node: w, d_delta: sign, new_omega: None });
            }
        }
        touched.sort_unstable_by_key(|t| t.node);
        let mut out = 0;
        for i in 0..touched.len() {
            if out > 0 && touched[out - 1].node == touched[i].node {
                touched[out - 1].d_delta += touched[i].d_delta;
                if touched[i].new_omega.is_some() {
                    touched[out - 1].new_omega = touched[i].new_omega;
                }
            } else {
                touched[out] = touched[i];
                out += 1;
            }
        }
        touched.truncate(out);
        debug_assert_eq!(
            touched.iter().map(|t| t.d_delta).sum::<i64>(),
            3 * triangle_delta
        );

        // Candidate totals and, for the mean-based measures, the change in
        // the ratio sum and in the eligible-node count.
        let delta_g_new = (self.delta_g as i64 + triangle_delta) as usize;
        let mut omega_g_new = self.omega_g as i64;
        let mut n_omega_new = self.n_omega as i64;
        let mut ratio_delta = 0.0;
        for t in &touched {
            let w_old = self.omega[t.node];
            let w_new = t.new_omega.unwrap_or(w_old);
            omega_g_new += w_new as i64 - w_old as i64;
            n_omega_new += (w_new > 0) as i64 - (w_old > 0) as i64;
            match self.measure {
                ClusteringMeasure::ClusteringCoefficient => {
                    if self.tau[t.node] > 0 {
                        ratio_delta += t.d_delta as f64 / self.tau[t.node] as f64;
                    }
                }
                ClusteringMeasure::SvClustering => {
                    let d_old = self.delta[t.node];
                    let d_new = (d_old as i64 + t.d_delta) as usize;
                    if w_old > 0 {
                        ratio_delta -= d_old as f64 / w_old as f64;
                    }
                    if w_new > 0 {
                        ratio_delta += d_new as f64 / w_new as f64;
                    }
                }
                _ => {}
            }
        }
        let omega_g_new = omega_g_new as usize;
        let n_omega_new = n_omega_new as usize;

        let undefined = match self.measure {
            ClusteringMeasure::SvTransitivity => omega_g_new == 0,
            ClusteringMeasure::SvClustering => n_omega_new == 0,
            _ => false,
        };
        let restore = |chain: &mut Chain, witness: [Vec<NodeId>; 4], touched: Vec<Touched>| {
            undo_unchecked(&mut chain.g, m);
            chain.witness = witness;
            chain.touched = touched;
        };
        if undefined {
            restore(self, witness, touched);
            return StepOutcome::Rejected(RejectReason::MeasureUndefined);
        }

        let clust_after = clust_value(
            self.measure,
            delta_g_new,
            self.tau_g,
            self.n2,
            omega_g_new,
            n_omega_new,
            self.sum_ratio + ratio_delta,
        );

        if !permissive {
            // Every transition must add triangles net of losses; a measure
            // improving only because its denominator shrank (omega dropping
            // under degree-capped neighborhoods) does not qualify. For the
            // fixed-denominator measures the integer test is also the whole
            // comparison, immune to float rounding.
            let improving = triangle_delta > 0
                && match self.measure {
                    ClusteringMeasure::TriangleCount | ClusteringMeasure::Transitivity => true,
                    _ => clust_after > clust_before,
                };
            if !improving {
                restore(self, witness, touched);
                return StepOutcome::Rejected(RejectReason::NotImproving);
            }
        }

        if check_connectivity && !self.bfs.is_connected(&self.g) {
            restore(self, witness, touched);
            return StepOutcome::Rejected(RejectReason::Disconnects);
        }

        for t in &touched {
            self.delta[t.node] = (self.delta[t.node] as i64 + t.d_delta) as usize;
            if let Some(w) = t.new_omega {
                self.omega[t.node] = w;
            }
        }
        self.delta_g = delta_g_new;
        self.omega_g = omega_g_new;
        self.n_omega = n_omega_new;
        self.sum_ratio += ratio_delta;
        if check_connectivity {
            self.journal.clear();
        } else {
            self.journal.push(*m);
        }
        self.witness = witness;
        self.touched = touched;
        StepOutcome::Accepted
    }

    /// Runs the connectivity search over the pending unverified moves.
    /// On success the current state becomes the verified checkpoint; on
    /// failure every pending move is inverted, the state is rebuilt, and
    /// `false` is returned.
    pub fn verify_or_rollback(&mut self) -> bool {
        if self.journal.is_empty() {
            return true;
        }
        if self.bfs.is_connected(&self.g) {
            self.journal.clear();
            return true;
        }
        while let Some(m) = self.journal.pop() {
            undo_unchecked(&mut self.g, &m);
        }
        self.recompute_dynamic_state();
        debug_assert!(self.bfs.is_connected(&self.g), "checkpoint state was verified connected");
        false
    }

    /// Recomputes every maintained quantity from the graph and compares:
    /// integer counts must match exactly, ratio sums to within `1e-9`.
    pub fn audit_exact(&self) -> bool {
        let (delta, delta_g) = clustering::triangle_counts(&self.g);
        let (omega, omega_g) = clustering::omega_counts(&self.g);
        let n_omega = omega.iter().filter(|&&w| w > 0).count();
        let sum_ratio: f64 = match self.measure {
            ClusteringMeasure::ClusteringCoefficient => delta
                .iter()
                .zip(&self.tau)
                .filter(|(_, &t)| t > 0)
                .map(|(&d, &t)| d as f64 / t as f64)
                .sum(),
            ClusteringMeasure::SvClustering => delta
                .iter()
                .zip(&omega)
                .filter(|(_, &w)| w > 0)
                .map(|(&d, &w)| d as f64 / w as f64)
                .sum(),
            _ => 0.0,
        };
        delta == self.delta
            && delta_g == self.delta_g
            && omega == self.omega
            && omega_g == self.omega_g
            && n_omega == self.n_omega
            && (sum_ratio - self.sum_ratio).abs() <= 1e-9 * (1.0 + sum_ratio.abs())
    }
}

fn collect_common(g: &Graph, u: NodeId, v: NodeId, out: &mut Vec<NodeId>) {
    out.clear();
    for_each_common_neighbor(g.neighbors(u), g.neighbors(v), |w| out.push(w));
}

/// Runs the rewiring chain on `g` until it halts.
///
/// Halting statuses, in the order they are checked:
///
/// * [`EvolveStatus::TargetReached`] as soon as the measure is within
///   `cfg.tol` of `cfg.target` (also immediately, with an empty trace);
/// * [`EvolveStatus::TargetBelowInitial`] immediately when the starting
///   value already exceeds the target by at least the tolerance;
/// * [`EvolveStatus::BudgetExhausted`] when `cfg.max_accepted_steps`
///   accepted moves stand;
/// * [`EvolveStatus::Plateaued`] after `cfg.max_failed_proposals`
///   consecutive rejections.
///
/// The returned graph is always simple and connected, and carries the
/// exact degree sequence of the input. Identical inputs, configuration,
/// and generator state reproduce identical outcomes.
pub fn evolve<R: Rng + ?Sized>(
    g: Graph,
    cfg: &EvolveConfig,
    rng: &mut R,
) -> Result<EvolveOutcome, EvolveError> {
    if !cfg.target.is_finite() {
        return Err(EvolveError::InvalidConfig("target must be finite"));
    }
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return Err(EvolveError::InvalidConfig("tol must be positive and finite"));
    }
    if cfg.connectivity_batch == 0 {
        return Err(EvolveError::InvalidConfig("connectivity_batch must be at least 1"));
    }

    let mut chain = Chain::new(g, cfg.measure)?;
    let c0 = chain.clust();
    let immediate = |chain: Chain, status| {
        Ok(EvolveOutcome {
            graph: chain.into_graph(),
            trace: Vec::new(),
            status,
            proposals: 0,
            accepted_steps: 0,
            final_clust: c0,
        })
    };
    if (c0 - cfg.target).abs() < cfg.tol {
        return immediate(chain, EvolveStatus::TargetReached);
    }
    if c0 > cfg.target {
        return immediate(chain, EvolveStatus::TargetBelowInitial);
    }
    if !chain.has_feasible_move() {
        return Err(EvolveError::NoFeasibleMove);
    }

    let max_failed = cfg
        .max_failed_proposals
        .unwrap_or(DEFAULT_FAILED_PROPOSALS_PER_EDGE * chain.graph().edge_count() as u64);

    let mut trace = alloc::vec![TracePoint {
        step: 0,
        delta_g: chain.triangle_total() as u64,
        omega_g: chain.omega_total() as u64,
        clust: c0,
        accepted: false,
    }];
    let mut proposals: u64 = 0;
    let mut accepted: u64 = 0;
    let mut consecutive_failed: u64 = 0;
    // Rollback bookkeeping: where the trace and counters stood at the last
    // verified state. Failures since that state accumulate separately so a
    // rollback can restore them; otherwise a repeatedly re-accepted and
    // re-rolled-back move would reset the failure counter forever and the
    // run would never plateau.
    let mut verified_trace_len = trace.len();
    let mut verified_accepted: u64 = 0;
    let mut failed_since_checkpoint: u64 = 0;

    let status = 'run: loop {
        let check = connectivity_check_policy(cfg, chain.unverified_moves() as u64);
        proposals += 1;
        let outcome = chain.step(rng, cfg.permissive, check);

        let point = |chain: &Chain, accepted_point: bool| TracePoint {
            step: proposals,
            delta_g: chain.triangle_total() as u64,
            omega_g: chain.omega_total() as u64,
            clust: chain.clust(),
            accepted: accepted_point,
        };

        match outcome {
            StepOutcome::Accepted => {
                accepted += 1;
                consecutive_failed = 0;
                trace.push(point(&chain, true));
                if chain.unverified_moves() == 0 {
                    verified_trace_len = trace.len();
                    verified_accepted = accepted;
                    failed_since_checkpoint = 0;
                }
                let at_target = (chain.clust() - cfg.target).abs() < cfg.tol;
                let at_cap = cfg.max_accepted_steps.is_some_and(|cap| accepted >= cap);
                if at_target || at_cap {
                    if chain.verify_or_rollback() {
                        break 'run if at_target {
                            EvolveStatus::TargetReached
                        } else {
                            EvolveStatus::BudgetExhausted
                        };
                    }
                    let rolled = accepted - verified_accepted;
                    trace.truncate(verified_trace_len);
                    accepted = verified_accepted;
                    failed_since_checkpoint += rolled;
                    consecutive_failed = failed_since_checkpoint;
                }
                if accepted > 0 && accepted.is_multiple_of(100) {
                    debug_assert!(chain.audit_exact(), "incremental state diverged from recount");
                }
            }
            StepOutcome::Rejected(_) | StepOutcome::ProposalFailed => {
                consecutive_failed += 1;
                failed_since_checkpoint += 1;
                if cfg.trace_proposals {
                    trace.push(point(&chain, false));
                }
            }
        }

        if consecutive_failed >= max_failed {
            if !chain.verify_or_rollback() {
                trace.truncate(verified_trace_len);
                accepted = verified_accepted;
            }
            break 'run EvolveStatus::Plateaued;
        }
    };

    let final_clust = chain.clust();
    trace.push(TracePoint {
        step: proposals,
        delta_g: chain.triangle_total() as u64,
        omega_g: chain.omega_total() as u64,
        clust: final_clust,
        accepted: false,
    });
    Ok(EvolveOutcome {
        graph: chain.into_graph(),
        trace,
        status,
        proposals,
        accepted_steps: accepted,
        final_clust,
    })
}
