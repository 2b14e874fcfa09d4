//! Text formats: edge lists and `node_id,community` partition files.
//!
//! Edge-list lines are `src dst [weight]`, separated by whitespace or by a
//! comma. A line holding a single identifier declares a node without edges,
//! which is how isolated nodes survive an export/reload cycle.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeTable, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    #[default]
    Whitespace,
    Comma,
}

impl Delimiter {
    fn split(self, line: &str) -> Vec<&str> {
        match self {
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Delimiter::Whitespace => " ",
            Delimiter::Comma => ",",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EdgeListOptions {
    pub delimiter: Delimiter,
    /// Read a third column as a positive edge weight.
    pub has_weights: bool,
    /// Ignore lines starting with `#`.
    pub skip_comments: bool,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self {
            delimiter: Delimiter::Whitespace,
            has_weights: false,
            skip_comments: true,
        }
    }
}

/// A parsed edge list together with what was dropped while reading it.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub table: NodeTable,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

fn data_lines<R: BufRead>(
    reader: R,
    skip_comments: bool,
) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(move |(i, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(line) => {
                let trimmed = line.trim();
                if trimmed.is_empty() || (skip_comments && trimmed.starts_with('#')) {
                    None
                } else {
                    Some(Ok((i + 1, trimmed.to_owned())))
                }
            }
        })
}

pub fn load_edge_list<R: BufRead>(reader: R, options: EdgeListOptions) -> Result<LoadedGraph> {
    let mut table = NodeTable::new();
    let mut builder = GraphBuilder::new(0);

    for item in data_lines(reader, options.skip_comments) {
        let (line_no, line) = item?;
        let fields = options.delimiter.split(&line);
        if fields.iter().any(|f| f.is_empty()) {
            return Err(Error::Parse {
                line: line_no,
                message: "empty field".into(),
            });
        }
        match fields.as_slice() {
            [id] => {
                let v = table.intern(id);
                builder.ensure_node(v);
            }
            [src, dst, rest @ ..] if rest.len() <= 1 => {
                let weight = match (options.has_weights, rest.first()) {
                    (true, Some(raw)) => {
                        let w: f64 = raw.parse().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("invalid weight {raw:?}"),
                        })?;
                        if !w.is_finite() || w <= 0.0 {
                            return Err(Error::InvalidWeight {
                                line: line_no,
                                weight: w,
                            });
                        }
                        w
                    }
                    (true, None) => {
                        return Err(Error::Parse {
                            line: line_no,
                            message: "missing weight column".into(),
                        })
                    }
                    (false, _) => 1.0,
                };
                let u = table.intern(src);
                let v = table.intern(dst);
                builder.ensure_node(u.max(v));
                builder.add_edge(u, v, weight)?;
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `src dst [weight]`, got {} fields", fields.len()),
                })
            }
        }
    }

    let self_loops_dropped = builder.self_loops_dropped();
    let duplicates_collapsed = builder.duplicates_collapsed();
    if self_loops_dropped > 0 {
        log::warn!("dropped {self_loops_dropped} self-loop(s)");
    }
    Ok(LoadedGraph {
        graph: builder.build(options.has_weights),
        table,
        self_loops_dropped,
        duplicates_collapsed,
    })
}

/// Reads `node_id,community` lines. Every node of `table` must be assigned;
/// labels are relabeled densely in node-index order.
pub fn load_partition<R: BufRead>(reader: R, table: &NodeTable) -> Result<Partition> {
    let mut assigned: Vec<Option<String>> = vec![None; table.len()];
    let mut first = true;

    for item in data_lines(reader, true) {
        let (line_no, line) = item?;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let is_header = first
            && fields
                .first()
                .is_some_and(|f| f.eq_ignore_ascii_case("node_id"));
        first = false;
        if is_header {
            continue;
        }
        let [id, label] = fields.as_slice() else {
            return Err(Error::Parse {
                line: line_no,
                message: "expected `node_id,community`".into(),
            });
        };
        let v = table.get(id).ok_or_else(|| Error::UnknownNode {
            line: line_no,
            id: (*id).to_owned(),
        })?;
        match &assigned[v] {
            Some(existing) if existing != label => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("node {id:?} already assigned to {existing:?}"),
                })
            }
            _ => assigned[v] = Some((*label).to_owned()),
        }
    }

    let missing: Vec<String> = assigned
        .iter()
        .enumerate()
        .filter(|(_, label)| label.is_none())
        .map(|(v, _)| table.id(v).to_owned())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingNodes(missing));
    }
    let labels: Vec<String> = assigned.into_iter().map(Option::unwrap).collect();
    Ok(Partition::from_labels(&labels))
}

/// Writes one line per edge, then one single-identifier line per isolated node.
pub fn write_edge_list<W: Write>(
    g: &Graph,
    table: &NodeTable,
    delimiter: Delimiter,
    mut out: W,
) -> Result<()> {
    let sep = delimiter.as_str();
    match g.weights() {
        Some(weights) => {
            for (&(u, v), w) in g.edges().iter().zip(weights) {
                writeln!(out, "{}{sep}{}{sep}{w}", table.id(u), table.id(v))?;
            }
        }
        None => {
            for &(u, v) in g.edges() {
                writeln!(out, "{}{sep}{}", table.id(u), table.id(v))?;
            }
        }
    }
    for v in (0..g.node_count()).filter(|&v| g.neighbors(v).is_empty()) {
        writeln!(out, "{}", table.id(v))?;
    }
    Ok(())
}

pub fn write_partition<W: Write>(p: &Partition, table: &NodeTable, mut out: W) -> Result<()> {
    writeln!(out, "node_id,community")?;
    for (v, &label) in p.labels().iter().enumerate() {
        writeln!(out, "{},{label}", table.id(v))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> LoadedGraph {
        load_edge_list(text.as_bytes(), EdgeListOptions::default()).unwrap()
    }

    #[test]
    fn simple_edge_list() {
        let loaded = load("a b\nb c");
        assert_eq!(loaded.graph.node_count(), 3);
        assert_eq!(loaded.graph.edge_count(), 2);
        assert_eq!(loaded.table.get("c"), Some(2));
    }

    #[test]
    fn duplicates_and_self_loops() {
        let loaded = load("a b\nb a\na a");
        assert_eq!(loaded.graph.node_count(), 2);
        assert_eq!(loaded.graph.edge_count(), 1);
        assert_eq!(loaded.self_loops_dropped, 1);
        assert_eq!(loaded.duplicates_collapsed, 1);
    }

    #[test]
    fn comments_and_comma_delimiter() {
        let opts = EdgeListOptions {
            delimiter: Delimiter::Comma,
            has_weights: true,
            skip_comments: true,
        };
        let loaded =
            load_edge_list("# header\na, b, 2.5\n\nb,c,1\nb,a,9".as_bytes(), opts).unwrap();
        assert_eq!(loaded.graph.edge_count(), 2);
        assert_eq!(loaded.graph.weights(), Some(&[2.5, 1.0][..]));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err =
            load_edge_list("a b\na b c d".as_bytes(), EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn non_positive_weight_is_rejected() {
        let opts = EdgeListOptions {
            has_weights: true,
            ..Default::default()
        };
        let err = load_edge_list("a b 1\nb c 0".as_bytes(), opts).unwrap_err();
        assert!(matches!(err, Error::InvalidWeight { line: 2, .. }));
        let err = load_edge_list("a b -3".as_bytes(), opts).unwrap_err();
        assert!(matches!(err, Error::InvalidWeight { line: 1, .. }));
    }

    #[test]
    fn partition_single_community() {
        let loaded = load("a b\nb c");
        let p = load_partition("a,X\nb,X\nc,X".as_bytes(), &loaded.table).unwrap();
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn partition_relabels_densely_and_skips_header() {
        let loaded = load("n1 n2\nn3 n4");
        let text = "node_id,community\nn4,AR\nn1,FR\nn2,FR\nn3,AR";
        let p = load_partition(text.as_bytes(), &loaded.table).unwrap();
        assert_eq!(p.community_count(), 2);
        assert_eq!(p.labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn partition_missing_node_is_named() {
        let loaded = load("a b\nb c");
        let err = load_partition("a,X\nb,Y".as_bytes(), &loaded.table).unwrap_err();
        match err {
            Error::MissingNodes(ids) => assert_eq!(ids, vec!["c".to_string()]),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn partition_unknown_node() {
        let loaded = load("a b");
        let err = load_partition("a,X\nb,X\nzz,Y".as_bytes(), &loaded.table).unwrap_err();
        assert!(matches!(err, Error::UnknownNode { line: 3, .. }));
    }

    #[test]
    fn isolated_nodes_survive_export() {
        let mut b = GraphBuilder::new(4);
        b.add_edge(0, 1, 1.0).unwrap();
        let g = b.build(false);
        let table = NodeTable::sequential(4);
        let mut buf = Vec::new();
        write_edge_list(&g, &table, Delimiter::Whitespace, &mut buf).unwrap();
        let back = load_edge_list(buf.as_slice(), EdgeListOptions::default()).unwrap();
        assert_eq!(back.graph.node_count(), 4);
        assert_eq!(back.graph.edge_count(), 1);
    }
}
