//! Plain-text graph, partition and coordinate files.
//!
//! Edge lists hold one `u v w` record per line with 0-based node ids;
//! partitions hold `node_id cluster_label` with labels `1..=K`; coordinates
//! hold `node_id x y`. Lines starting with `#` are comments. Reals are
//! written with 17 significant digits so that a write/read cycle is exact.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{NodePartition, WeightedGraph};

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn field<T: std::str::FromStr>(fields: &[&str], idx: usize, line: usize) -> Result<T> {
    let raw = fields.get(idx).ok_or_else(|| Error::Parse { line, msg: format!("missing field {}", idx + 1) })?;
    raw.parse().map_err(|_| Error::Parse { line, msg: format!("cannot parse {raw:?}") })
}

/// Parses an edge list; the node count is one past the largest id seen,
/// unless `node_count` is given.
pub fn parse_edge_list(text: &str, node_count: Option<usize>) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    for (line, fields) in records(text) {
        if fields.len() != 3 {
            return Err(Error::Parse { line, msg: format!("expected 3 fields, got {}", fields.len()) });
        }
        let u: usize = field(&fields, 0, line)?;
        let v: usize = field(&fields, 1, line)?;
        let w: f64 = field(&fields, 2, line)?;
        edges.push((u, v, w));
    }
    let seen = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
    let n = node_count.unwrap_or(seen).max(seen);
    WeightedGraph::from_edges(n, &edges)
}

pub fn format_edge_list(g: &WeightedGraph) -> String {
    let mut out = format!("# nodes {} edges {}\n", g.node_count(), g.edge_count());
    for (e, &(u, v)) in g.topology().edges().iter().enumerate() {
        let _ = writeln!(out, "{u} {v} {}", format_real(g.weight(e)));
    }
    out
}

pub fn parse_partition(text: &str) -> Result<NodePartition> {
    let mut rows: Vec<(usize, usize)> = Vec::new();
    for (line, fields) in records(text) {
        if fields.len() != 2 {
            return Err(Error::Parse { line, msg: format!("expected 2 fields, got {}", fields.len()) });
        }
        rows.push((field(&fields, 0, line)?, field(&fields, 1, line)?));
    }
    let n = rows.len();
    let mut labels = vec![None; n];
    for (i, &(node, label)) in rows.iter().enumerate() {
        let slot = labels.get_mut(node).ok_or(Error::NodeOutOfRange { node, count: n })?;
        if slot.replace(label).is_some() {
            return Err(Error::Parse { line: i + 1, msg: format!("node {node} assigned twice") });
        }
    }
    let labels: Vec<usize> = labels.into_iter().map(|l| l.expect("every slot filled")).collect();
    Ok(NodePartition::from_labels(&labels))
}

pub fn format_partition(p: &NodePartition) -> String {
    let mut out = format!("# nodes {} clusters {}\n", p.node_count(), p.cluster_count());
    for (node, &label) in p.labels().iter().enumerate() {
        let _ = writeln!(out, "{node} {}", label + 1);
    }
    out
}

pub fn parse_coordinates(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    for (line, fields) in records(text) {
        let node: usize = field(&fields, 0, line)?;
        if node != rows.len() {
            return Err(Error::Parse { line, msg: format!("expected node {}, got {node}", rows.len()) });
        }
        rows.push((field(&fields, 1, line)?, field(&fields, 2, line)?));
    }
    Ok(rows)
}

pub fn format_coordinates(points: &[(f64, f64)]) -> String {
    let mut out = String::from("# node x y\n");
    for (node, &(x, y)) in points.iter().enumerate() {
        let _ = writeln!(out, "{node} {} {}", format_real(x), format_real(y));
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<WeightedGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?, None)
}

pub fn read_partition(path: &Path) -> Result<NodePartition> {
    parse_partition(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = parse_edge_list("# header\n\n0 1 0.5\n1 2 0.25\n", None).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert_eq!(g.weight(1), 0.25);
    }

    #[test]
    fn malformed_lines_report_line_number() {
        let err = parse_edge_list("0 1 0.5\n1 x 0.2\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_partition("0 1\n0 2\n").is_err());
    }

    #[test]
    fn partition_labels_are_one_based_on_disk() {
        let p = NodePartition::from_labels(&[0, 0, 1]);
        let text = format_partition(&p);
        assert!(text.ends_with("0 1\n1 1\n2 2\n"));
        assert_eq!(parse_partition(&text).unwrap(), p);
    }

    proptest! {
        #[test]
        fn edge_list_round_trip_is_exact(ws in proptest::collection::vec(1e-9f64..1.0, 1..20)) {
            let edges: Vec<_> = ws.iter().enumerate().map(|(i, &w)| (i, i + 1, w)).collect();
            let g = WeightedGraph::from_edges(ws.len() + 1, &edges).unwrap();
            let back = parse_edge_list(&format_edge_list(&g), None).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
