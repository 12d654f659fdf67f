//! Text renderings of run results: trace CSV, statistics reports,
//! ensemble tables, and path-length histograms.

use clustnet::ensemble::EnsembleReport;
use clustnet::rewire::TracePoint;
use clustnet::stats::PathStats;
use std::fmt::Write as _;

/// Trace of a rewiring run as CSV. Column order is part of the format.
pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("step,delta_G,omega_G,clust,accepted\n");
    for p in trace {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.step,
            p.delta_g,
            p.omega_g,
            p.clust,
            u8::from(p.accepted)
        );
    }
    out
}

/// Number formatting for the human-readable tables: up to six decimals,
/// trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" { "0".to_string() } else { trimmed.to_string() }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_string(), fmt_num)
}

/// Structural statistics of one graph, with the measures that can be
/// undefined kept optional.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StatsReport {
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    pub mean_degree: f64,
    pub mean_sq_degree: f64,
    pub nodes_with_triples: usize,
    pub nodes_with_possible_triangles: usize,
    pub triangles: u64,
    pub triples: u64,
    pub possible_triangles: u64,
    pub clustering: Option<f64>,
    pub transitivity: Option<f64>,
    pub sv_clustering: Option<f64>,
    pub sv_transitivity: Option<f64>,
    pub assortativity: Option<f64>,
    pub mean_path_length: Option<f64>,
    pub diameter: Option<usize>,
    pub modularity: Option<f64>,
    pub community_count: Option<usize>,
}

/// The key/value text form of a statistics report.
pub fn stats_text(r: &StatsReport) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<30} {v}");
    };
    line("nodes", r.n.to_string());
    line("edges", r.m.to_string());
    line("connected", r.connected.to_string());
    line("mean_degree", fmt_num(r.mean_degree));
    line("mean_sq_degree", fmt_num(r.mean_sq_degree));
    line("nodes_with_triples", r.nodes_with_triples.to_string());
    line(
        "nodes_with_possible_triangles",
        r.nodes_with_possible_triangles.to_string(),
    );
    line("triangles", r.triangles.to_string());
    line("triples", r.triples.to_string());
    line("possible_triangles", r.possible_triangles.to_string());
    line("clustering_C", fmt_opt(r.clustering));
    line("transitivity_T", fmt_opt(r.transitivity));
    line("sv_clustering_Ctilde", fmt_opt(r.sv_clustering));
    line("sv_transitivity_Ttilde", fmt_opt(r.sv_transitivity));
    line("assortativity_r", fmt_opt(r.assortativity));
    line("mean_path_length", fmt_opt(r.mean_path_length));
    line(
        "diameter",
        r.diameter.map_or_else(|| "undefined".to_string(), |d| d.to_string()),
    );
    line("modularity_Q", fmt_opt(r.modularity));
    line(
        "communities",
        r.community_count
            .map_or_else(|| "undefined".to_string(), |c| c.to_string()),
    );
    out
}

/// The ensemble comparison as a table: one statistic per row, the
/// replica mean with its spread bracketed, and the deviation from the
/// empirical value (degree-fixed rows carry none).
pub fn ensemble_text(report: &EnsembleReport) -> String {
    let replicas = report.replicas.len();
    let mut out = format!(
        "null model: measure {} target {} over {} replicas, {} off target\n",
        report.measure,
        fmt_num(report.target),
        replicas,
        report.off_target
    );
    let _ = writeln!(
        out,
        "{:<18} {:>14} {:>26} {:>12}",
        "statistic", "empirical", "replicas mean [std]", "deviation"
    );
    for row in &report.rows {
        let mean = match (row.mean, row.std_dev) {
            (Some(m), Some(s)) => format!("{} [{}]", fmt_num(m), fmt_num(s)),
            _ => "undefined".to_string(),
        };
        let dev = row.deviation.map_or_else(
            || if row.empirical.is_some() && row.mean.is_some() { "fixed" } else { "-" }.to_string(),
            fmt_num,
        );
        let mut name = row.name.to_string();
        if row.defined_replicas < replicas {
            let _ = write!(name, " ({}/{replicas})", row.defined_replicas);
        }
        let _ = writeln!(out, "{name:<18} {:>14} {mean:>26} {dev:>12}", fmt_opt(row.empirical));
    }
    out
}

/// Per-replica results as CSV; undefined statistics are empty cells.
pub fn ensemble_csv(report: &EnsembleReport) -> String {
    let mut out = String::from(
        "index,seed,status,final_clust,n,m,mean_degree,mean_sq_degree,triangles,\
         clustering,transitivity,sv_clustering,sv_transitivity,assortativity,\
         mean_path_length,diameter,modularity,community_count\n",
    );
    let cell = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in &report.replicas {
        let s = &r.stats;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.index,
            r.seed,
            r.status,
            r.final_clust,
            s.n,
            s.m,
            s.mean_degree,
            s.mean_sq_degree,
            s.triangles,
            cell(s.clustering),
            cell(s.transitivity),
            cell(s.sv_clustering),
            cell(s.sv_transitivity),
            cell(s.assortativity),
            s.mean_path_length,
            s.diameter,
            s.modularity,
            s.community_count,
        );
    }
    out
}

/// One side of a path-length comparison.
pub struct PathSide<'a> {
    /// Where the graph came from, for the comment header.
    pub label: &'a str,
    /// Mean distance from each node to all others.
    pub node_means: &'a [f64],
    /// Aggregate path statistics of the same graph.
    pub stats: &'a PathStats,
}

/// Histograms of per-node mean path lengths for two graphs, binned at
/// `bin_width`, as plot-ready CSV with the global means in `#` comments.
pub fn pathhist_csv(a: &PathSide, b: &PathSide, bin_width: f64) -> String {
    let bin_of = |x: f64| (x / bin_width).floor() as i64;
    let range = |means: &[f64]| {
        let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (bin_of(lo), bin_of(hi))
    };
    let (alo, ahi) = range(a.node_means);
    let (blo, bhi) = range(b.node_means);
    let (lo, hi) = (alo.min(blo), ahi.max(bhi));

    let count = |means: &[f64], bin: i64| means.iter().filter(|&&x| bin_of(x) == bin).count();

    let mut out = String::new();
    for side in [a, b] {
        let _ = writeln!(
            out,
            "# {}: nodes={} mean_path_length={} diameter={}",
            side.label,
            side.node_means.len(),
            side.stats.mean_path_length,
            side.stats.diameter
        );
    }
    out.push_str("bin_lo,bin_hi,count_a,count_b\n");
    for bin in lo..=hi {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_num(bin as f64 * bin_width),
            fmt_num((bin + 1) as f64 * bin_width),
            count(a.node_means, bin),
            count(b.node_means, bin)
        );
    }
    out
}
