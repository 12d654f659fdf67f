//! End-to-end runs of the `clustnet` binary: formats, exit codes, and
//! reproducibility.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_clustnet"));
    c.env_remove("CLUSTNET_SEED").env_remove("CLUSTNET_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn summary_without_wall(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("wall_ms").expect("wall_ms present");
    v
}

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }
    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
    fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

#[test]
fn generate_writes_all_outputs_and_round_trips() {
    let dir = Dir::new();
    let out = run(&[
        "generate", "--dist", "poisson", "--mean", "5", "--n", "150",
        "--measure", "Ttilde", "--target", "0.35", "--seed", "9",
        "--out", &dir.arg("g.edges"), "--random-out", &dir.arg("r.edges"),
        "--trace-out", &dir.arg("trace.csv"), "--summary-out", &dir.arg("summary.json"),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["status"], "target_reached");
    assert_eq!(summary["measure"], "Ttilde");
    assert_eq!(summary["n"], 150);
    let final_clust = summary["final_clust"].as_f64().unwrap();
    assert!((final_clust - 0.35).abs() < 0.01);

    let trace = fs::read_to_string(dir.path("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("step,delta_G,omega_G,clust,accepted"));
    let first = lines.next().unwrap();
    assert!(first.starts_with("0,"));
    assert!(first.ends_with(",0"));
    assert!(trace.lines().skip(1).all(|l| l.ends_with(",0") || l.ends_with(",1")));

    // The two edge lists describe graphs over the same degree sequence.
    let stats_g = run(&["stats", &dir.arg("g.edges"), "--json"]);
    let stats_r = run(&["stats", &dir.arg("r.edges"), "--json"]);
    assert_eq!(code(&stats_g), 0);
    assert_eq!(code(&stats_r), 0);
    let sg: serde_json::Value = serde_json::from_str(&stdout(&stats_g)).unwrap();
    let sr: serde_json::Value = serde_json::from_str(&stdout(&stats_r)).unwrap();
    assert_eq!(sg["n"], sr["n"]);
    assert_eq!(sg["m"], sr["m"]);
    assert_eq!(sg["mean_degree"], sr["mean_degree"]);
    assert_eq!(sg["mean_sq_degree"], sr["mean_sq_degree"]);
    assert_eq!(sg["connected"], true);
    assert!((sg["sv_transitivity"].as_f64().unwrap() - final_clust).abs() < 1e-9);
}

#[test]
fn fixed_seed_is_byte_reproducible() {
    let a = Dir::new();
    let b = Dir::new();
    for dir in [&a, &b] {
        let out = run(&[
            "generate", "--dist", "exponential", "--mean", "4", "--n", "120",
            "--target", "0.3", "--seed", "21",
            "--out", &dir.arg("g.edges"), "--trace-out", &dir.arg("t.csv"),
            "--summary-out", &dir.arg("s.json"),
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    }
    let bytes = |d: &Dir, f: &str| fs::read(d.path(f)).unwrap();
    assert_eq!(bytes(&a, "g.edges"), bytes(&b, "g.edges"));
    assert_eq!(bytes(&a, "t.csv"), bytes(&b, "t.csv"));
    assert_eq!(
        summary_without_wall(&a.path("s.json")),
        summary_without_wall(&b.path("s.json"))
    );
}

#[test]
fn seed_env_var_matches_the_flag() {
    let flagged = Dir::new();
    let out = run(&[
        "generate", "--dist", "poisson", "--mean", "4", "--n", "100",
        "--target", "0.25", "--seed", "5", "--out", &flagged.arg("g.edges"),
    ]);
    assert_eq!(code(&out), 0);

    let via_env = Dir::new();
    let out = bin()
        .args([
            "generate", "--dist", "poisson", "--mean", "4", "--n", "100",
            "--target", "0.25", "--out", &via_env.arg("g.edges"),
        ])
        .env("CLUSTNET_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read(flagged.path("g.edges")).unwrap(),
        fs::read(via_env.path("g.edges")).unwrap()
    );
}

#[test]
fn exit_codes_distinguish_halting_statuses() {
    // Unreachable target within a small proposal budget: plateau.
    let out = run(&[
        "generate", "--dist", "poisson", "--mean", "4", "--n", "80",
        "--target", "0.99", "--seed", "2", "--max-failed", "300",
    ]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["status"], "plateaued");

    // A randomized start has nonzero clustering, so target 0 is below it.
    let out = run(&[
        "generate", "--dist", "poisson", "--mean", "5", "--n", "150",
        "--target", "0.0", "--seed", "2",
    ]);
    assert_eq!(code(&out), 4);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["status"], "target_below_initial");
    assert_eq!(summary["proposals"], 0);

    // Tiny accepted-step budget on a far target.
    let out = run(&[
        "generate", "--dist", "poisson", "--mean", "5", "--n", "150",
        "--target", "0.5", "--seed", "2", "--max-accepted", "3",
    ]);
    assert_eq!(code(&out), 5);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["status"], "budget_exhausted");
    assert_eq!(summary["accepted_steps"], 3);
}

#[test]
fn degree_file_pipeline_reports_undefined_measure() {
    let dir = Dir::new();
    fs::write(dir.path("star.deg"), "4 1 1 1 1\n").unwrap();
    let out = run(&[
        "generate", "--dist", "file", "--degrees", &dir.arg("star.deg"),
        "--measure", "Ttilde", "--target", "0.5",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("undefined"), "stderr: {}", stderr(&out));

    fs::write(dir.path("bad.deg"), "3 3 3 1\n").unwrap();
    let out = run(&[
        "generate", "--dist", "file", "--degrees", &dir.arg("bad.deg"),
        "--target", "0.5",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("realization"), "stderr: {}", stderr(&out));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run(&["generate", "--dist", "poisson", "--n", "50"]);
    assert_eq!(code(&out), 2);
    let out = run(&["generate", "--dist", "poisson", "--mean", "4", "--n", "50",
        "--target", "0.3", "--measure", "bogus"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown measure"));
}

#[test]
fn stats_reports_star_and_triangle_exactly() {
    let dir = Dir::new();
    fs::write(dir.path("star.edges"), "hub a\nhub b\nhub c\nhub d\n").unwrap();
    let out = run(&["stats", &dir.arg("star.edges")]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("triples                        6"));
    assert!(text.contains("possible_triangles             0"));
    assert!(text.contains("sv_transitivity_Ttilde         undefined"));
    assert!(text.contains("sv_clustering_Ctilde           undefined"));

    fs::write(dir.path("tri.edges"), "x y\ny z\nx z\n").unwrap();
    let out = run(&["stats", &dir.arg("tri.edges"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["triangles"], 1);
    assert_eq!(v["triples"], 3);
    assert_eq!(v["clustering"], 1.0);
    assert_eq!(v["transitivity"], 1.0);
    assert_eq!(v["sv_clustering"], 1.0);
    assert_eq!(v["sv_transitivity"], 1.0);
}

#[test]
fn parse_errors_name_the_line_and_lenient_downgrades() {
    let dir = Dir::new();
    fs::write(dir.path("dup.edges"), "a b\nb c\na b\n").unwrap();
    let out = run(&["stats", &dir.arg("dup.edges")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));

    let out = run(&["stats", &dir.arg("dup.edges"), "--lenient"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("line 3"));
    let text = stdout(&out);
    assert!(text.contains("edges                          2"));
}

#[test]
fn disconnected_stats_warn_but_still_report() {
    let dir = Dir::new();
    fs::write(dir.path("split.edges"), "a b\nb c\na c\nx y\ny z\nx z\n").unwrap();
    let out = run(&["stats", &dir.arg("split.edges")]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("disconnected"));
    let text = stdout(&out);
    assert!(text.contains("mean_path_length               undefined"));
    assert!(text.contains("clustering_C                   1"));
}

#[test]
fn nullmodel_is_identical_across_worker_counts() {
    let dir = Dir::new();
    let gen = run(&[
        "generate", "--dist", "poisson", "--mean", "4", "--n", "90",
        "--target", "0.25", "--seed", "13", "--out", &dir.arg("g.edges"),
    ]);
    assert_eq!(code(&gen), 0);

    let mut reports = Vec::new();
    for workers in ["1", "3"] {
        let out = run(&[
            "nullmodel", &dir.arg("g.edges"), "-k", "4", "--seed", "17",
            "--workers", workers,
            "--report-out", &dir.arg(&format!("report-{workers}.txt")),
            "--csv-out", &dir.arg(&format!("replicas-{workers}.csv")),
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
        reports.push((
            fs::read(dir.path(&format!("report-{workers}.txt"))).unwrap(),
            fs::read(dir.path(&format!("replicas-{workers}.csv"))).unwrap(),
            stdout(&out),
        ));
    }
    assert_eq!(reports[0], reports[1]);

    let csv = String::from_utf8(reports[0].1.clone()).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().nth(1).unwrap().starts_with("1,"));
}

#[test]
fn nullmodel_rejects_disconnected_input_before_work() {
    let dir = Dir::new();
    fs::write(dir.path("split.edges"), "a b\nb c\na c\nx y\ny z\nx z\n").unwrap();
    let out = run(&["nullmodel", &dir.arg("split.edges"), "-k", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not connected") || stderr(&out).contains("disconnected"),
        "stderr: {}", stderr(&out));
}

#[test]
fn pathhist_of_a_graph_against_itself_is_symmetric() {
    let dir = Dir::new();
    fs::write(dir.path("p6.edges"), "0 1\n1 2\n2 3\n3 4\n4 5\n").unwrap();
    let out = run(&[
        "pathhist", &dir.arg("p6.edges"), &dir.arg("p6.edges"), "--bin-width", "0.5",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut data = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("bin_lo") {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[2], cells[3], "line: {line}");
        data.push((cells[2].parse::<usize>().unwrap(), cells[3].parse::<usize>().unwrap()));
    }
    let total: usize = data.iter().map(|(a, _)| a).sum();
    assert_eq!(total, 6);
}

#[test]
fn pathhist_generates_a_counterpart_when_given_a_target() {
    let dir = Dir::new();
    let gen = run(&[
        "generate", "--dist", "poisson", "--mean", "5", "--n", "150",
        "--target", "0.35", "--seed", "3", "--random-out", &dir.arg("r.edges"),
    ]);
    assert_eq!(code(&gen), 0);
    let out = run(&[
        "pathhist", &dir.arg("r.edges"), "--target", "0.35", "--seed", "3",
        "--out", &dir.arg("hist.csv"),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let csv = fs::read_to_string(dir.path("hist.csv")).unwrap();
    let means: Vec<f64> = csv
        .lines()
        .take(2)
        .map(|l| {
            l.split("mean_path_length=")
                .nth(1)
                .unwrap()
                .split_whitespace()
                .next()
                .unwrap()
                .parse()
                .unwrap()
        })
        .collect();
    assert!(means[1] > means[0], "clustered {} vs random {}", means[1], means[0]);
}
