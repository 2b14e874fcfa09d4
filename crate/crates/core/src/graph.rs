//! Simple undirected graphs, external node identifiers and partitions.
//!
//! A [`Graph`] is immutable once built. Nodes are dense indices in
//! `0..node_count`, every edge is stored once as `(u, v)` with `u < v`, and
//! each node keeps a sorted neighbor list. Self-loops and duplicate edges
//! never make it into a graph: [`GraphBuilder`] drops them and counts how
//! many it saw.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};

/// Outcome of offering one edge to a [`GraphBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeInsert {
    Added,
    Duplicate,
    SelfLoop,
}

/// Incremental constructor that enforces the simple-graph invariants.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
    seen: HashSet<(usize, usize)>,
    self_loops: usize,
    duplicates: usize,
}

impl GraphBuilder {
    pub fn new(node_count: usize) -> Self {
        Self {
            node_count,
            ..Self::default()
        }
    }

    /// Grows the node range so that `index` is valid.
    pub fn ensure_node(&mut self, index: usize) {
        if index >= self.node_count {
            self.node_count = index + 1;
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Adds the undirected edge `{u, v}`. The first weight seen for an edge wins.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<EdgeInsert> {
        for index in [u, v] {
            if index >= self.node_count {
                return Err(Error::InvalidNode {
                    index,
                    node_count: self.node_count,
                });
            }
        }
        if u == v {
            self.self_loops += 1;
            return Ok(EdgeInsert::SelfLoop);
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            self.duplicates += 1;
            return Ok(EdgeInsert::Duplicate);
        }
        self.edges.push(key);
        self.weights.push(weight);
        Ok(EdgeInsert::Added)
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops
    }

    pub fn duplicates_collapsed(&self) -> usize {
        self.duplicates
    }

    /// Finishes the graph. Weights are kept only when `keep_weights` is set.
    pub fn build(self, keep_weights: bool) -> Graph {
        let mut adjacency = vec![Vec::new(); self.node_count];
        for &(u, v) in &self.edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            adjacency,
            edges: self.edges,
            weights: keep_weights.then_some(self.weights),
        }
    }
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<f64>>,
}

impl Graph {
    /// Builds an unweighted graph, silently dropping self-loops and duplicates.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut builder = GraphBuilder::new(node_count);
        for (u, v) in edges {
            builder.add_edge(u, v, 1.0)?;
        }
        Ok(builder.build(false))
    }

    pub fn empty(node_count: usize) -> Self {
        GraphBuilder::new(node_count).build(false)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("indices in range")
    }

    /// Cycle on `n >= 3` nodes.
    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("indices in range")
    }

    /// Star with center `0` and leaves `1..=k`.
    pub fn star(k: usize) -> Self {
        Self::from_edges(k + 1, (1..=k).map(|leaf| (0, leaf))).expect("indices in range")
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
            .expect("indices in range")
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Per-edge weights aligned with [`Graph::edges`], if the graph was loaded with weights.
    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Sorted neighbor list. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count()
            && v < self.node_count()
            && self.adjacency[u].binary_search(&v).is_ok()
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                index: v,
                node_count: self.node_count(),
            })
        }
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        Ok(self.adjacency[v].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Local clustering coefficient: links among the neighbors of `v` over
    /// `deg (deg - 1) / 2`, and `0` when `deg < 2`.
    pub fn clustering_coefficient(&self, v: usize) -> Result<f64> {
        self.check(v)?;
        let neighbors = &self.adjacency[v];
        let k = neighbors.len();
        if k < 2 {
            return Ok(0.0);
        }
        let mut links = 0usize;
        for (i, &a) in neighbors.iter().enumerate() {
            links += neighbors[i + 1..]
                .iter()
                .filter(|&&b| self.adjacency[a].binary_search(&b).is_ok())
                .count();
        }
        Ok(links as f64 / (k * (k - 1) / 2) as f64)
    }
}

/// Bijection between external string identifiers and internal node indices,
/// plus optional per-node metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeTable {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    attributes: Vec<BTreeMap<String, String>>,
}

impl NodeTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table whose external IDs are the decimal indices `"0"..."n-1"`.
    pub fn sequential(n: usize) -> Self {
        let mut table = Self::new();
        for i in 0..n {
            table.intern(&i.to_string());
        }
        table
    }

    /// Returns the index for `id`, assigning the next free index if it is new.
    pub fn intern(&mut self, id: &str) -> usize {
        if let Some(&idx) = self.index.get(id) {
            return idx;
        }
        let idx = self.ids.len();
        self.ids.push(id.to_owned());
        self.index.insert(id.to_owned(), idx);
        self.attributes.push(BTreeMap::new());
        idx
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn set_attribute(&mut self, index: usize, key: &str, value: &str) {
        self.attributes[index].insert(key.to_owned(), value.to_owned());
    }

    pub fn attribute(&self, index: usize, key: &str) -> Option<&str> {
        self.attributes.get(index)?.get(key).map(String::as_str)
    }
}

/// Assignment of every node to exactly one community, labels dense in `0..count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Relabels arbitrary labels densely in order of first appearance.
    pub fn from_labels<L>(labels: &[L]) -> Self
    where
        L: Eq + std::hash::Hash + Clone,
    {
        let mut mapping: HashMap<L, usize> = HashMap::new();
        let dense = labels
            .iter()
            .map(|label| {
                let next = mapping.len();
                *mapping.entry(label.clone()).or_insert(next)
            })
            .collect();
        Self {
            labels: dense,
            count: mapping.len(),
        }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
            count: n,
        }
    }

    /// All `n` nodes in one community.
    pub fn single(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &label in &self.labels {
            sizes[label] += 1;
        }
        sizes
    }

    /// Node indices grouped by community label.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.count];
        for (v, &label) in self.labels.iter().enumerate() {
            members[label].push(v);
        }
        members
    }

    /// Errors unless the partition has exactly one label per graph node.
    pub fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.len() == g.node_count() {
            Ok(())
        } else {
            Err(Error::PartitionSize {
                partition: self.len(),
                graph: g.node_count(),
            })
        }
    }
}
