//! Property tests: structural invariants that must hold for arbitrary
//! inputs, each checked against an independent brute-force route where
//! one exists.

use clustnet::clustering::{measure_value, omega_counts, triangle_counts, triple_counts, ClusteringMeasure};
use clustnet::construct::{havel_hakimi, randomize, taylor_connect};
use clustnet::degree::{sample_degree_sequence, DegreeSequence, DistSpec};
use clustnet::graph::Graph;
use clustnet::rewire::{apply_move, propose_move, undo_move, evolve, EvolveConfig, EvolveStatus};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (3usize..10).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn brute_triangles(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut per = vec![0usize; n];
    let mut total = 0;
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                if g.has_edge(u, v) && g.has_edge(v, w) && g.has_edge(u, w) {
                    per[u] += 1;
                    per[v] += 1;
                    per[w] += 1;
                    total += 1;
                }
            }
        }
    }
    (per, total)
}

fn pipeline_graph(seed: u64, n: usize, mean: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq = sample_degree_sequence(&DistSpec::poisson(mean, 12), n, &mut rng).unwrap();
    let mut g = havel_hakimi(&seq).unwrap();
    taylor_connect(&mut g, &mut rng).unwrap();
    let budget = 4 * g.edge_count() as u64;
    randomize(&mut g, budget, &mut rng).unwrap();
    g
}

proptest! {
    /// The inequality-based graphicality test and the constructive
    /// realization must agree on every degree vector, graphical or not.
    #[test]
    fn graphicality_decision_matches_realization(degrees in prop::collection::vec(0usize..10, 0..40)) {
        let seq = DegreeSequence::from(degrees.clone());
        match havel_hakimi(&seq) {
            Ok(g) => {
                prop_assert!(seq.is_graphical());
                prop_assert_eq!(g.degree_sequence(), degrees);
            }
            Err(_) => prop_assert!(!seq.is_graphical()),
        }
    }

    /// Neighborhood-intersection triangle counting must match exhaustive
    /// triple enumeration, and the per-node counts must respect
    /// triangles <= possible triangles <= triples.
    #[test]
    fn counts_match_brute_force_and_ordering(g in arb_graph()) {
        let (per, total) = triangle_counts(&g);
        let (brute_per, brute_total) = brute_triangles(&g);
        prop_assert_eq!(&per, &brute_per);
        prop_assert_eq!(total, brute_total);

        let (tau, _) = triple_counts(&g);
        let (omega, _) = omega_counts(&g);
        for u in 0..g.node_count() {
            prop_assert!(per[u] <= omega[u]);
            prop_assert!(omega[u] <= tau[u]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Applying a proposed move and undoing it must restore the graph
    /// exactly, whatever the proposal.
    #[test]
    fn apply_then_undo_is_identity(seed in any::<u64>()) {
        let mut g = pipeline_graph(seed, 40, 3.5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..30 {
            let Ok(m) = propose_move(&g, &mut rng) else { break };
            let before = g.clone();
            if apply_move(&mut g, &m).is_ok() {
                undo_move(&mut g, &m).unwrap();
            }
            prop_assert_eq!(&g, &before);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Whatever a run does, it must never change a degree, disconnect the
    /// graph, or report a measure value the final graph does not have.
    #[test]
    fn evolve_preserves_invariants(
        seed in any::<u64>(),
        target in 0.05f64..0.5,
        which in 0usize..5,
    ) {
        let measures = [
            ClusteringMeasure::ClusteringCoefficient,
            ClusteringMeasure::Transitivity,
            ClusteringMeasure::SvClustering,
            ClusteringMeasure::SvTransitivity,
            ClusteringMeasure::TriangleCount,
        ];
        let measure = measures[which];
        let g = pipeline_graph(seed, 50, 3.5);
        let degrees = g.degree_sequence();
        let target = if let ClusteringMeasure::TriangleCount = measure {
            (target * 100.0).round()
        } else {
            target
        };
        let mut cfg = EvolveConfig::new(measure, target);
        cfg.max_failed_proposals = Some(5_000);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let out = evolve(g, &cfg, &mut rng).unwrap();

        prop_assert_eq!(out.graph.degree_sequence(), degrees);
        prop_assert!(out.graph.is_connected());
        let scratch = measure_value(&out.graph, measure).unwrap();
        prop_assert!((scratch - out.final_clust).abs() <= 1e-9);
        if out.status == EvolveStatus::TargetReached {
            prop_assert!((out.final_clust - cfg.target).abs() < cfg.tol);
        }
    }

    /// Degree-preserving shuffling must keep the degree multiset, the
    /// simplicity of the graph, and connectivity.
    #[test]
    fn randomize_preserves_structure(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq = sample_degree_sequence(&DistSpec::exponential_from_mean(4.0, 12).unwrap(), 40, &mut rng).unwrap();
        let mut g = havel_hakimi(&seq).unwrap();
        taylor_connect(&mut g, &mut rng).unwrap();
        let degrees = g.degree_sequence();
        let budget = 6 * g.edge_count() as u64;
        randomize(&mut g, budget, &mut rng).unwrap();
        prop_assert_eq!(g.degree_sequence(), degrees);
        prop_assert!(g.is_connected());
        for u in 0..g.node_count() {
            prop_assert!(!g.has_edge(u, u));
        }
    }
}
