//! Community-based global bridging indicator.
//!
//! Given a partition, node `i` in community `I` scores
//!
//! ```text
//! G(i) = Σ_{J ≠ I} δ(i, J) / links(I, J)
//! ```
//!
//! where `δ(i, J)` is 1 if `i` has at least one edge into `J`, and
//! `links(I, J)` counts the edges between the two communities. The only link
//! between two communities therefore scores 1, while a node among many
//! parallel connections scores little.

use serde::Serialize;

use crate::error::Result;
use crate::graph::{Graph, Partition};

/// Symmetric `C × C` edge counts between communities; the diagonal holds
/// internal edge counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommunityLinkMatrix {
    size: usize,
    counts: Vec<u64>,
}

impl CommunityLinkMatrix {
    pub fn community_count(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.size + b]
    }

    pub fn internal(&self, a: usize) -> u64 {
        self.get(a, a)
    }

    /// Number of edges whose endpoints lie in different communities.
    pub fn inter_total(&self) -> u64 {
        (0..self.size)
            .flat_map(|a| (a + 1..self.size).map(move |b| (a, b)))
            .map(|(a, b)| self.get(a, b))
            .sum()
    }

    pub fn intra_total(&self) -> u64 {
        (0..self.size).map(|a| self.internal(a)).sum()
    }
}

pub fn community_link_matrix(g: &Graph, p: &Partition) -> Result<CommunityLinkMatrix> {
    p.check_covers(g)?;
    let size = p.community_count();
    let mut counts = vec![0u64; size * size];
    for &(u, v) in g.edges() {
        let (a, b) = (p.label(u), p.label(v));
        counts[a * size + b] += 1;
        if a != b {
            counts[b * size + a] += 1;
        }
    }
    Ok(CommunityLinkMatrix { size, counts })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalIndicatorResult {
    pub g: Vec<f64>,
}

pub fn global_indicator(g: &Graph, p: &Partition) -> Result<GlobalIndicatorResult> {
    let links = community_link_matrix(g, p)?;
    let mut touched: Vec<usize> = Vec::new();
    let scores = (0..g.node_count())
        .map(|i| {
            let home = p.label(i);
            touched.clear();
            touched.extend(
                g.neighbors(i)
                    .iter()
                    .map(|&w| p.label(w))
                    .filter(|&c| c != home),
            );
            touched.sort_unstable();
            touched.dedup();
            touched
                .iter()
                .fold(0.0, |acc, &c| acc + 1.0 / links.get(home, c) as f64)
        })
        .collect();
    Ok(GlobalIndicatorResult { g: scores })
}

/// Fraction of edges joining different communities; 0 for an edgeless graph.
pub fn inter_community_fraction(g: &Graph, p: &Partition) -> Result<f64> {
    let links = community_link_matrix(g, p)?;
    if g.edge_count() == 0 {
        return Ok(0.0);
    }
    Ok(links.inter_total() as f64 / g.edge_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles_joined() -> (Graph, Partition) {
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        (g, Partition::from_labels(&[0, 0, 0, 1, 1, 1]))
    }

    #[test]
    fn link_matrix_two_triangles() {
        let (g, p) = two_triangles_joined();
        let m = community_link_matrix(&g, &p).unwrap();
        assert_eq!(m.get(0, 1), 1);
        assert_eq!(m.get(1, 0), 1);
        assert_eq!((m.internal(0), m.internal(1)), (3, 3));
        assert_eq!(m.inter_total() + m.intra_total(), g.edge_count() as u64);
    }

    #[test]
    fn link_matrix_single_community() {
        let (g, _) = two_triangles_joined();
        let m = community_link_matrix(&g, &Partition::single(6)).unwrap();
        assert_eq!(m.internal(0), 7);
        assert_eq!(m.inter_total(), 0);
    }

    #[test]
    fn internal_nodes_score_zero() {
        let (g, p) = two_triangles_joined();
        let r = global_indicator(&g, &p).unwrap();
        assert_eq!(r.g, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn shared_connection_scores_a_quarter() {
        // community A = {0, 1, 2, 3}, B = {4}; four A-B edges
        let g = Graph::from_edges(5, [(0, 4), (1, 4), (2, 4), (3, 4), (0, 1)]).unwrap();
        let p = Partition::from_labels(&[0, 0, 0, 0, 1]);
        let r = global_indicator(&g, &p).unwrap();
        assert_eq!(r.g[0], 0.25);
        assert_eq!(r.g[4], 0.25);
    }

    #[test]
    fn sole_links_to_two_communities() {
        // node 0 in A is the only link to B and to C
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = Partition::from_labels(&["A", "A", "B", "C"]);
        assert_eq!(global_indicator(&g, &p).unwrap().g[0], 2.0);
    }

    #[test]
    fn multiple_links_into_one_community_count_once() {
        let g = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let p = Partition::from_labels(&[0, 1, 1]);
        assert_eq!(global_indicator(&g, &p).unwrap().g[0], 0.5);
    }

    #[test]
    fn fractions() {
        let (g, p) = two_triangles_joined();
        assert_eq!(
            inter_community_fraction(&g, &Partition::single(6)).unwrap(),
            0.0
        );
        assert!((inter_community_fraction(&g, &p).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        let bip = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let sides = Partition::from_labels(&[0, 0, 1, 1]);
        assert_eq!(inter_community_fraction(&bip, &sides).unwrap(), 1.0);
        assert!(inter_community_fraction(&Graph::empty(2), &sides).is_err());
        assert_eq!(
            inter_community_fraction(&Graph::empty(2), &Partition::single(2)).unwrap(),
            0.0
        );
    }

    #[test]
    fn merging_removes_the_pair_term() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let split = Partition::from_labels(&[0, 0, 1, 1]);
        assert_eq!(global_indicator(&g, &split).unwrap().g[1], 1.0);
        let merged = Partition::single(4);
        assert!(global_indicator(&g, &merged)
            .unwrap()
            .g
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn partition_must_cover_graph() {
        let (g, _) = two_triangles_joined();
        assert!(global_indicator(&g, &Partition::single(3)).is_err());
    }
}
