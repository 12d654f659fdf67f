//! Plain-text edge list format: one edge per line as two whitespace
//! separated labels, `#` lines ignored.
//!
//! Parsing is strict by default: a self-loop or a repeated edge is an
//! error naming the offending line. Lenient mode downgrades both to
//! warnings and drops the line. Nodes exist through their edges, so a
//! graph with isolated nodes does not survive a round trip; everything
//! this tool produces has minimum degree one.

use clustnet::{Graph, NodeId};
use std::collections::HashMap;
use std::fmt;

/// A graph together with the node labels it was read or built with.
/// Node `i` of `graph` carries `labels[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

impl LabeledGraph {
    /// Labels every node of `graph` with its decimal index.
    pub fn numbered(graph: Graph) -> Self {
        let labels = (0..graph.node_count()).map(|u| u.to_string()).collect();
        LabeledGraph { graph, labels }
    }
}

/// Why an edge list failed to parse. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// A non-comment line with other than two tokens.
    TokenCount { line: usize, found: usize },
    /// Both endpoints carry the same label.
    SelfLoop { line: usize, label: String },
    /// The edge already appeared on an earlier line.
    DuplicateEdge { line: usize, a: String, b: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::TokenCount { line, found } => {
                write!(f, "line {line}: expected two node labels, found {found} tokens")
            }
            ParseError::SelfLoop { line, label } => {
                write!(f, "line {line}: self-loop at node '{label}'")
            }
            ParseError::DuplicateEdge { line, a, b } => {
                write!(f, "line {line}: duplicate edge '{a}' '{b}'")
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// A parsed edge list and the warnings lenient mode collected.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub graph: LabeledGraph,
    pub warnings: Vec<String>,
}

fn intern<'t>(
    ids: &mut HashMap<&'t str, NodeId>,
    labels: &mut Vec<String>,
    label: &'t str,
) -> NodeId {
    if let Some(&id) = ids.get(label) {
        return id;
    }
    let id = labels.len();
    labels.push(label.to_string());
    ids.insert(label, id);
    id
}

/// Parses edge list text. Labels become node ids in order of first
/// appearance. With `lenient`, self-loops and duplicate edges are
/// dropped and reported in `warnings` instead of failing.
pub fn parse(text: &str, lenient: bool) -> Result<Parsed, ParseError> {
    let mut ids: HashMap<&str, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(NodeId, NodeId, usize)> = Vec::new();
    let mut warnings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            let found = trimmed.split_whitespace().count();
            return Err(ParseError::TokenCount { line, found });
        };
        if a == b {
            let err = ParseError::SelfLoop { line, label: a.to_string() };
            if lenient {
                warnings.push(err.to_string());
                continue;
            }
            return Err(err);
        }
        let u = intern(&mut ids, &mut labels, a);
        let v = intern(&mut ids, &mut labels, b);
        edges.push((u, v, line));
    }

    let mut graph = Graph::new(labels.len());
    for (u, v, line) in edges {
        if graph.has_edge(u, v) {
            let err = ParseError::DuplicateEdge {
                line,
                a: labels[u].clone(),
                b: labels[v].clone(),
            };
            if lenient {
                warnings.push(err.to_string());
                continue;
            }
            return Err(err);
        }
        graph.add_edge(u, v).expect("endpoints in range and distinct");
    }

    Ok(Parsed {
        graph: LabeledGraph { graph, labels },
        warnings,
    })
}

/// Renders the edge list: one line per edge, endpoints in ascending
/// label order, lines sorted, trailing newline. The output is a pure
/// function of the labeled graph, so equal graphs serialize identically.
pub fn write(lg: &LabeledGraph) -> String {
    let mut lines: Vec<String> = lg
        .graph
        .edges()
        .map(|(u, v)| {
            let (a, b) = (&lg.labels[u], &lg.labels[v]);
            if a <= b {
                format!("{a} {b}")
            } else {
                format!("{b} {a}")
            }
        })
        .collect();
    lines.sort_unstable();
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_labels_in_first_appearance_order() {
        let parsed = parse("b a\n# comment\n\n  a c\nc d\n", false).unwrap();
        assert_eq!(parsed.graph.labels, ["b", "a", "c", "d"]);
        assert_eq!(parsed.graph.graph.edge_count(), 3);
        assert!(parsed.graph.graph.has_edge(0, 1));
        assert!(parsed.graph.graph.has_edge(1, 2));
        assert!(parsed.graph.graph.has_edge(2, 3));
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn rejects_malformed_lines_naming_the_line() {
        assert_eq!(
            parse("a b\nc\n", false),
            Err(ParseError::TokenCount { line: 2, found: 1 })
        );
        assert_eq!(
            parse("a b c\n", false),
            Err(ParseError::TokenCount { line: 1, found: 3 })
        );
    }

    #[test]
    fn rejects_self_loops_and_duplicates_strictly() {
        assert_eq!(
            parse("a b\nc c\n", false),
            Err(ParseError::SelfLoop { line: 2, label: "c".into() })
        );
        assert_eq!(
            parse("a b\nb a\n", false),
            Err(ParseError::DuplicateEdge { line: 2, a: "b".into(), b: "a".into() })
        );
    }

    #[test]
    fn lenient_mode_downgrades_to_warnings() {
        let parsed = parse("a b\nc c\nb a\nb c\n", true).unwrap();
        assert_eq!(parsed.warnings.len(), 2);
        assert!(parsed.warnings[0].contains("line 2"));
        assert!(parsed.warnings[1].contains("line 3"));
        assert_eq!(parsed.graph.graph.edge_count(), 2);
    }

    #[test]
    fn malformed_lines_stay_errors_even_leniently() {
        assert_eq!(
            parse("a b extra tokens\n", true),
            Err(ParseError::TokenCount { line: 1, found: 4 })
        );
    }

    #[test]
    fn writer_orders_endpoints_and_lines() {
        let parsed = parse("z y\nb a\ny a\n", false).unwrap();
        assert_eq!(write(&parsed.graph), "a b\na y\ny z\n");
    }

    #[test]
    fn write_then_parse_round_trips() {
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]).unwrap();
        let lg = LabeledGraph::numbered(g);
        let text = write(&lg);
        let back = parse(&text, false).unwrap();
        assert!(back.warnings.is_empty());
        assert_eq!(write(&back.graph), text);
        let mut degrees = back.graph.graph.degree_sequence();
        degrees.sort_unstable();
        assert_eq!(degrees, [1, 2, 2, 2, 3]);
    }
}
