//! Acceptance criteria for the whole pipeline, one test per criterion.
//!
//! Each test prints one summary line (visible with `--nocapture`) and
//! asserts the criterion's thresholds, which are pinned in the code
//! below. The expensive shared fixture is 15 seeded runs per degree
//! model at N=500, mean degree 5, rewired to T-tilde 0.5.

use clustnet::clustering::{
    measure_value, omega_counts, rewire_triangle_delta, triangle_counts, triple_counts,
    ClusteringMeasure,
};
use clustnet::construct::{havel_hakimi, randomize, taylor_connect};
use clustnet::degree::{sample_degree_sequence, DegreeSequence, DistSpec};
use clustnet::graph::Graph;
use clustnet::rewire::{evolve, Chain, EvolveConfig, EvolveOutcome, EvolveStatus, StepOutcome};
use clustnet::stats::{assortativity, modularity_of, modularity_partition, path_stats};
use clustnet::MeasureError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::sync::OnceLock;

const N: usize = 500;
const MEAN_DEGREE: f64 = 5.0;
const RUNS: usize = 15;
const TARGET: f64 = 0.5;
const TOL: f64 = 0.01;

struct Run {
    seq: Vec<usize>,
    random: Graph,
    out: EvolveOutcome,
}

struct Fixture {
    poisson: Vec<Run>,
    exponential: Vec<Run>,
}

fn dist_spec(name: &str) -> DistSpec {
    match name {
        "poisson" => DistSpec::poisson(MEAN_DEGREE, N - 1),
        "exponential" => DistSpec::exponential_from_mean(MEAN_DEGREE, N - 1).unwrap(),
        "scalefree" => DistSpec::scale_free_from_mean(MEAN_DEGREE, N - 1).unwrap(),
        other => panic!("unknown distribution {other}"),
    }
}

/// Sample, realize, connect, and shuffle a random graph of `spec`.
fn random_graph(spec: &DistSpec, rng: &mut ChaCha8Rng) -> (Vec<usize>, Graph) {
    let seq = sample_degree_sequence(spec, N, rng).unwrap();
    let mut g = havel_hakimi(&seq).unwrap();
    taylor_connect(&mut g, rng).unwrap();
    let budget = 10 * g.edge_count() as u64;
    randomize(&mut g, budget, rng).unwrap();
    (seq.as_slice().to_vec(), g)
}

fn build_run(spec: &DistSpec, seed: u64) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (seq, random) = random_graph(spec, &mut rng);
    let cfg = EvolveConfig::new(ClusteringMeasure::SvTransitivity, TARGET);
    let out = evolve(random.clone(), &cfg, &mut rng).unwrap();
    Run { seq, random, out }
}

fn fixture() -> &'static Fixture {
    static FIXTURE: OnceLock<Fixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let poisson_spec = dist_spec("poisson");
        let exponential_spec = dist_spec("exponential");
        Fixture {
            poisson: (0..RUNS as u64).map(|i| build_run(&poisson_spec, 1000 + i)).collect(),
            exponential: (0..RUNS as u64)
                .map(|i| build_run(&exponential_spec, 2000 + i))
                .collect(),
        }
    })
}

fn both_models() -> [(&'static str, &'static [Run]); 2] {
    let f = fixture();
    [("poisson", &f.poisson[..]), ("exponential", &f.exponential[..])]
}

/// Criterion 1: rewiring toward the target never changes a single degree.
#[test]
fn c01_degree_preservation_is_exact() {
    let mut checked = 0;
    for (name, runs) in both_models() {
        for (i, run) in runs.iter().enumerate() {
            assert_eq!(run.random.degree_sequence(), run.seq, "{name} run {i}: random start");
            assert_eq!(run.out.graph.degree_sequence(), run.seq, "{name} run {i}: rewired");
            checked += 1;
        }
    }
    println!("c01 degree preservation: PASS ({checked} runs, zero deviations)");
}

/// Criterion 2: targets 0.1 through 0.5 are reached within 0.01 in at
/// least 14 of 15 seeded runs per model.
#[test]
fn c02_targets_are_attained() {
    for (name, runs) in both_models() {
        for target_tenths in 1..=5u64 {
            let target = target_tenths as f64 / 10.0;
            let mut reached = 0;
            for (i, run) in runs.iter().enumerate() {
                let out = if target == TARGET {
                    run.out.clone()
                } else {
                    let cfg = EvolveConfig::new(ClusteringMeasure::SvTransitivity, target);
                    let mut rng = ChaCha8Rng::seed_from_u64(7919 * target_tenths + i as u64);
                    evolve(run.random.clone(), &cfg, &mut rng).unwrap()
                };
                if out.status == EvolveStatus::TargetReached
                    && (out.final_clust - target).abs() < TOL
                {
                    reached += 1;
                }
            }
            println!("c02 {name} target {target}: {reached}/{RUNS} reached");
            assert!(reached >= 14, "{name} target {target}: only {reached}/{RUNS}");
        }
    }
    println!("c02 target attainment: PASS");
}

/// Criterion 3: a target of 1.0 cannot be reached while staying
/// connected; the run plateaus below it within the proposal budget.
#[test]
fn c03_impossible_target_plateaus() {
    let run = &fixture().poisson[0];
    let cfg = EvolveConfig::new(ClusteringMeasure::SvTransitivity, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let out = evolve(run.random.clone(), &cfg, &mut rng).unwrap();
    assert_eq!(out.status, EvolveStatus::Plateaued);
    assert!(out.final_clust < 1.0);
    assert!(out.graph.is_connected());
    println!(
        "c03 high-target plateau: PASS (stalled at {:.4} after {} proposals)",
        out.final_clust, out.proposals
    );
}

/// Criterion 4: on scale-free graphs a target below the start returns
/// immediately, and the attainment rate for an above-start target is
/// recorded without failing the suite.
#[test]
fn c04_scale_free_behavior() {
    let spec = dist_spec("scalefree");
    let mut reached = 0;
    let mut statuses = Vec::new();
    for i in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + i);
        let (_, g) = random_graph(&spec, &mut rng);
        let initial = measure_value(&g, ClusteringMeasure::SvTransitivity).unwrap();

        let below = EvolveConfig::new(ClusteringMeasure::SvTransitivity, initial - 0.02);
        let out = evolve(g.clone(), &below, &mut rng).unwrap();
        assert_eq!(out.status, EvolveStatus::TargetBelowInitial, "run {i}");
        assert_eq!(out.proposals, 0, "immediate return draws no proposals");
        assert_eq!(out.graph, g, "immediate return leaves the graph alone");

        let mut above = EvolveConfig::new(ClusteringMeasure::SvTransitivity, initial + 0.1);
        above.max_failed_proposals = Some(20_000);
        let out = evolve(g, &above, &mut rng).unwrap();
        assert!(
            matches!(out.status, EvolveStatus::TargetReached | EvolveStatus::Plateaued),
            "run {i}: {:?}",
            out.status
        );
        if out.status == EvolveStatus::TargetReached {
            reached += 1;
        }
        statuses.push((out.status, initial, out.final_clust));
    }
    println!(
        "c04 scale-free: PASS (below-start immediate in 5/5; start+0.1 reached in {reached}/5: {statuses:?})"
    );
}

/// Criterion 5: the 5-node star has 6 triples, 0 achievable triangles,
/// and undefined degree-limited measures.
#[test]
fn c05_star_counts_are_exact() {
    let star = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    assert_eq!(triple_counts(&star).1, 6);
    assert_eq!(omega_counts(&star).1, 0);
    assert_eq!(
        measure_value(&star, ClusteringMeasure::SvTransitivity),
        Err(MeasureError::NoPossibleTriangles)
    );
    assert_eq!(
        measure_value(&star, ClusteringMeasure::SvClustering),
        Err(MeasureError::NoPossibleTriangles)
    );
    println!("c05 star metrics: PASS (tau=6, omega=0, Ttilde/Ctilde undefined)");
}

/// Criterion 6: a connected 4-regular graph on 10 nodes cannot evolve to
/// clustering 1, while two disjoint complete graphs on 5 nodes score
/// exactly 1 on every measure.
#[test]
fn c06_regular_ceiling_and_split_cliques() {
    let mut circulant = Graph::new(10);
    for i in 0..10 {
        circulant.add_edge(i, (i + 1) % 10).unwrap();
        circulant.add_edge(i, (i + 2) % 10).unwrap();
    }
    assert!(circulant.is_connected());
    assert!(circulant.degree_sequence().iter().all(|&d| d == 4));
    for measure in [ClusteringMeasure::SvClustering, ClusteringMeasure::SvTransitivity] {
        let cfg = EvolveConfig::new(measure, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let out = evolve(circulant.clone(), &cfg, &mut rng).unwrap();
        assert_eq!(out.status, EvolveStatus::Plateaued, "{measure}");
        assert!(out.final_clust < 1.0, "{measure} stuck at {}", out.final_clust);
        assert!(out.graph.is_connected());
    }

    let mut split = Graph::new(10);
    for base in [0, 5] {
        for u in base..base + 5 {
            for v in u + 1..base + 5 {
                split.add_edge(u, v).unwrap();
            }
        }
    }
    for measure in [
        ClusteringMeasure::ClusteringCoefficient,
        ClusteringMeasure::Transitivity,
        ClusteringMeasure::SvClustering,
        ClusteringMeasure::SvTransitivity,
    ] {
        assert_eq!(measure_value(&split, measure), Ok(1.0), "{measure}");
    }
    println!("c06 regular ceiling and split cliques: PASS");
}

/// Criterion 7: rewiring to T-tilde 0.5 lengthens paths; the global
/// means land in the published bands and the clustered graph's mean
/// exceeds its random counterpart's in at least 14 of 15 pairs.
#[test]
fn c07_path_length_shift() {
    let bands = [("poisson", 4.05, 0.3, 4.39, 0.4), ("exponential", 3.95, 0.3, 4.14, 0.4)];
    let mut misses = Vec::new();
    for ((name, runs), (band_name, rand_mid, rand_tol, clust_mid, clust_tol)) in
        both_models().into_iter().zip(bands)
    {
        assert_eq!(name, band_name);
        let mut rand_mean = 0.0;
        let mut clust_mean = 0.0;
        let mut shifted = 0;
        for run in runs {
            let r = path_stats(&run.random).unwrap().mean_path_length;
            let c = path_stats(&run.out.graph).unwrap().mean_path_length;
            if c > r {
                shifted += 1;
            }
            rand_mean += r / RUNS as f64;
            clust_mean += c / RUNS as f64;
        }
        println!(
            "c07 {name}: random {rand_mean:.3} (band {rand_mid}±{rand_tol}), \
             clustered {clust_mean:.3} (band {clust_mid}±{clust_tol}), longer in {shifted}/{RUNS}"
        );
        if (rand_mean - rand_mid).abs() > rand_tol {
            misses.push(format!("{name} random mean {rand_mean:.3} outside {rand_mid}±{rand_tol}"));
        }
        if (clust_mean - clust_mid).abs() > clust_tol {
            misses.push(format!(
                "{name} clustered mean {clust_mean:.3} outside {clust_mid}±{clust_tol}"
            ));
        }
        if shifted < 14 {
            misses.push(format!("{name} clustered longer in only {shifted}/{RUNS}"));
        }
    }
    if misses.is_empty() {
        println!("c07 path-length shift: PASS");
    } else {
        println!("c07 path-length shift: FAIL ({})", misses.join("; "));
    }
    assert!(misses.is_empty(), "{}", misses.join("; "));
}

/// Criterion 8: the degree-correlation coefficient moves by at most 0.1
/// on average between the random start and the rewired result.
#[test]
fn c08_assortativity_is_preserved() {
    let runs = &fixture().poisson;
    let diffs: Vec<f64> = runs
        .iter()
        .map(|run| {
            let before = assortativity(&run.random).unwrap();
            let after = assortativity(&run.out.graph).unwrap();
            after - before
        })
        .collect();
    let mean_diff = diffs.iter().sum::<f64>() / diffs.len() as f64;
    println!("c08 assortativity shift: mean {mean_diff:.4} over {RUNS} runs");
    assert!(mean_diff.abs() <= 0.1, "mean shift {mean_diff}");
    println!("c08 degree-correlation preservation: PASS");
}

/// Walks a chain for a proposal budget, sampling the assortativity
/// every 25 accepted moves; returns (final clust, r samples).
fn sampled_walk(
    g: Graph,
    measure: ClusteringMeasure,
    target: f64,
    permissive: bool,
    proposal_budget: u64,
    seed: u64,
) -> (f64, Vec<f64>) {
    let mut chain = Chain::new(g, measure).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = vec![assortativity(chain.graph()).unwrap()];
    let mut accepted = 0u64;
    for _ in 0..proposal_budget {
        if chain.step(&mut rng, permissive, true) == StepOutcome::Accepted {
            accepted += 1;
            if accepted.is_multiple_of(25) {
                samples.push(assortativity(chain.graph()).unwrap());
            }
            if (chain.clust() - target).abs() < TOL && !permissive {
                break;
            }
        }
    }
    samples.push(assortativity(chain.graph()).unwrap());
    (chain.clust(), samples)
}

/// Criterion 9: under an equal proposal budget, accepting every
/// connectivity-preserving move ends farther from the target than
/// hill-climbing in every trial, while moving the degree correlation
/// over a wider range.
#[test]
fn c09_permissive_mode_fails() {
    let target = 0.45;
    for trial in 0..3 {
        let run = &fixture().poisson[trial];
        let cfg = EvolveConfig::new(ClusteringMeasure::Transitivity, target);
        let mut rng = ChaCha8Rng::seed_from_u64(500 + trial as u64);
        let hill = evolve(run.random.clone(), &cfg, &mut rng).unwrap();
        assert_eq!(hill.status, EvolveStatus::TargetReached, "trial {trial}");
        let budget = hill.proposals;

        let (_, hill_samples) = sampled_walk(
            run.random.clone(),
            ClusteringMeasure::Transitivity,
            target,
            false,
            budget,
            600 + trial as u64,
        );
        let (perm_final, perm_samples) = sampled_walk(
            run.random.clone(),
            ClusteringMeasure::Transitivity,
            target,
            true,
            budget,
            600 + trial as u64,
        );

        let hill_err = (hill.final_clust - target).abs();
        let perm_err = (perm_final - target).abs();
        let range = |xs: &[f64]| {
            let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        let hill_range = range(&hill_samples);
        let perm_range = range(&perm_samples);
        println!(
            "c09 trial {trial}: |T-target| hill {hill_err:.4} vs permissive {perm_err:.4}; \
             r range hill {hill_range:.4} vs permissive {perm_range:.4} (budget {budget})"
        );
        assert!(hill_err < perm_err, "trial {trial}: permissive got closer");
        assert!(perm_range > hill_range, "trial {trial}: permissive r range not wider");
    }
    println!("c09 permissive-mode failure: PASS");
}

/// Criterion 10: across each fixture run the achievable-triangle total
/// drifts proportionally less than the triangle total grows, and the
/// triangle total at least doubles.
#[test]
fn c10_omega_stays_stable_while_triangles_grow() {
    let mut worst_drift: f64 = 0.0;
    let mut least_growth = f64::INFINITY;
    for (name, runs) in both_models() {
        for (i, run) in runs.iter().enumerate() {
            let first = run.out.trace.first().unwrap();
            let last = run.out.trace.last().unwrap();
            let omega_drift =
                (last.omega_g as f64 - first.omega_g as f64).abs() / first.omega_g as f64;
            let triangle_growth =
                (last.delta_g as f64 - first.delta_g as f64) / first.delta_g as f64;
            assert!(
                omega_drift < triangle_growth,
                "{name} run {i}: omega drift {omega_drift} vs growth {triangle_growth}"
            );
            assert!(
                triangle_growth >= 1.0,
                "{name} run {i}: triangles grew only {triangle_growth}"
            );
            worst_drift = worst_drift.max(omega_drift);
            least_growth = least_growth.min(triangle_growth);
        }
    }
    println!(
        "c10 omega stability: PASS (worst omega drift {worst_drift:.4}, least triangle growth {least_growth:.2})"
    );
}

/// Criterion 11a: the local triangle delta predicts the recount after
/// applying the move, exactly, for 500 random accepted moves.
#[test]
fn c11a_delta_oracle_matches_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (_, g) = {
        let spec = DistSpec::poisson(5.0, 199);
        let seq = sample_degree_sequence(&spec, 200, &mut rng).unwrap();
        let mut g = havel_hakimi(&seq).unwrap();
        taylor_connect(&mut g, &mut rng).unwrap();
        let budget = 10 * g.edge_count() as u64;
        randomize(&mut g, budget, &mut rng).unwrap();
        (seq, g)
    };
    let mut chain = Chain::new(g, ClusteringMeasure::TriangleCount).unwrap();
    let mut accepted = 0;
    let mut proposals = 0u64;
    while accepted < 500 {
        proposals += 1;
        assert!(proposals < 100_000, "walk starved of applicable moves");
        let Ok(m) = chain.propose(&mut rng) else { continue };
        let before = triangle_counts(chain.graph()).1 as i64;
        let predicted = rewire_triangle_delta(chain.graph(), &m);
        if chain.step_with(&m, true, true) == StepOutcome::Accepted {
            accepted += 1;
            let after = triangle_counts(chain.graph()).1 as i64;
            assert_eq!(after - before, predicted.unwrap(), "move {accepted}");
        }
    }
    println!("c11a delta oracle: PASS (500 moves, exact)");
}

/// Criterion 11b: the inequality-based realizability test agrees with
/// exhaustive graph enumeration for every degree sequence with up to 7
/// nodes.
#[test]
fn c11b_realizability_matches_enumeration() {
    for n in 1..=7usize {
        let pairs = n * (n - 1) / 2;
        let mut realizable: HashSet<Vec<usize>> = HashSet::new();
        for mask in 0u32..(1 << pairs) {
            let mut degrees = vec![0usize; n];
            let mut bit = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask & (1 << bit) != 0 {
                        degrees[u] += 1;
                        degrees[v] += 1;
                    }
                    bit += 1;
                }
            }
            degrees.sort_unstable_by(|a, b| b.cmp(a));
            realizable.insert(degrees);
        }

        // Every non-increasing degree vector over 0..n, checked both ways.
        let mut stack = vec![Vec::<usize>::new()];
        let mut checked = 0u64;
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                let claim = DegreeSequence::new(prefix.clone()).is_graphical();
                let truth = realizable.contains(&prefix);
                assert_eq!(claim, truth, "n={n}, degrees {prefix:?}");
                checked += 1;
                continue;
            }
            let cap = prefix.last().copied().unwrap_or(n - 1);
            for d in 0..=cap {
                let mut next = prefix.clone();
                next.push(d);
                stack.push(next);
            }
        }
        assert!(checked > 0);
    }
    println!("c11b realizability oracle: PASS (all degree sequences, n <= 7)");
}

/// Criterion 11c: the chain's incremental bookkeeping equals a full
/// recomputation at checkpoints; integer totals exactly, ratio measures
/// to 1e-9.
#[test]
fn c11c_incremental_bookkeeping_matches_recount() {
    for measure in [ClusteringMeasure::SvClustering, ClusteringMeasure::SvTransitivity] {
        let mut rng = ChaCha8Rng::seed_from_u64(88);
        let spec = DistSpec::poisson(5.0, 199);
        let seq = sample_degree_sequence(&spec, 200, &mut rng).unwrap();
        let mut g = havel_hakimi(&seq).unwrap();
        taylor_connect(&mut g, &mut rng).unwrap();
        let budget = 10 * g.edge_count() as u64;
        randomize(&mut g, budget, &mut rng).unwrap();

        let mut chain = Chain::new(g, measure).unwrap();
        let mut accepted = 0;
        let mut checkpoints = 0;
        while accepted < 300 {
            if chain.step(&mut rng, true, true) == StepOutcome::Accepted {
                accepted += 1;
                if accepted % 25 == 0 {
                    let g = chain.graph();
                    assert_eq!(chain.triangle_total(), triangle_counts(g).1);
                    assert_eq!(chain.omega_total(), omega_counts(g).1);
                    let scratch = measure_value(g, measure).unwrap();
                    assert!(
                        (chain.clust() - scratch).abs() <= 1e-9,
                        "{measure}: {} vs {scratch}",
                        chain.clust()
                    );
                    assert!(chain.audit_exact());
                    checkpoints += 1;
                }
            }
        }
        assert_eq!(checkpoints, 12);
    }
    println!("c11c incremental bookkeeping: PASS (checkpoints exact / <= 1e-9)");
}

/// Criterion 11d: the greedy community search reports exactly the score
/// a direct evaluation assigns its returned partition.
#[test]
fn c11d_modularity_score_matches_direct_evaluation() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = DistSpec::poisson(4.0, 29);
        let seq = sample_degree_sequence(&spec, 30, &mut rng).unwrap();
        let mut g = havel_hakimi(&seq).unwrap();
        taylor_connect(&mut g, &mut rng).unwrap();
        let partition = modularity_partition(&g).unwrap();
        let direct = modularity_of(&g, &partition.labels).unwrap();
        assert!(
            (partition.q - direct).abs() <= 1e-12,
            "seed {seed}: {} vs {direct}",
            partition.q
        );
    }
    println!("c11d modularity oracle: PASS (20 graphs, <= 1e-12)");
}

/// Criterion 12: a fixed seed reproduces every output file byte for
/// byte, wall time aside.
#[test]
fn c12_cli_outputs_are_reproducible() {
    let bin = env!("CARGO_BIN_EXE_clustnet");
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();

    for round in 0..2 {
        let out = std::process::Command::new(bin)
            .env_remove("CLUSTNET_SEED")
            .env_remove("CLUSTNET_WORKERS")
            .args([
                "generate", "--dist", "poisson", "--mean", "5", "--n", "200",
                "--target", "0.4", "--seed", "31",
                "--out", &path(&format!("g{round}.edges")),
                "--trace-out", &path(&format!("t{round}.csv")),
                "--summary-out", &path(&format!("s{round}.json")),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let nm = std::process::Command::new(bin)
            .env_remove("CLUSTNET_SEED")
            .env_remove("CLUSTNET_WORKERS")
            .args([
                "nullmodel", &path(&format!("g{round}.edges")), "-k", "3",
                "--seed", "9", "--workers", &format!("{}", round + 1),
                "--report-out", &path(&format!("r{round}.txt")),
                "--csv-out", &path(&format!("c{round}.csv")),
            ])
            .output()
            .unwrap();
        assert_eq!(nm.status.code(), Some(0), "{}", String::from_utf8_lossy(&nm.stderr));
    }

    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("g0.edges"), read("g1.edges"));
    assert_eq!(read("t0.csv"), read("t1.csv"));
    assert_eq!(read("r0.txt"), read("r1.txt"));
    assert_eq!(read("c0.csv"), read("c1.csv"));

    let summary = |name: &str| {
        let mut v: serde_json::Value =
            serde_json::from_str(&String::from_utf8(read(name)).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("wall_ms").unwrap();
        v
    };
    assert_eq!(summary("s0.json"), summary("s1.json"));
    println!("c12 reproducibility: PASS (graph, trace, report, and replica files identical)");
}
