//! Modularity and Louvain community detection on unweighted graphs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

/// Newman–Girvan modularity `Σ_I (e_II / m − (d_I / 2m)²)`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    p.check_covers(g)?;
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let m = g.edge_count() as f64;
    let c = p.community_count();
    let mut internal = vec![0usize; c];
    let mut degree = vec![0usize; c];
    for &(u, v) in g.edges() {
        if p.label(u) == p.label(v) {
            internal[p.label(u)] += 1;
        }
    }
    for v in 0..g.node_count() {
        degree[p.label(v)] += g.neighbors(v).len();
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| {
            let frac = d as f64 / (2.0 * m);
            e as f64 / m - frac * frac
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LouvainConfig {
    pub seed: u64,
    /// Upper bound on move-and-aggregate passes.
    pub max_passes: usize,
    /// Stop once a pass improves modularity by less than this.
    pub min_gain: f64,
}

impl LouvainConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            max_passes: 100,
            min_gain: 1e-7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_passes < 1 {
            return Err(Error::Config("max_passes must be at least 1".into()));
        }
        if self.min_gain.is_nan() || self.min_gain <= 0.0 {
            return Err(Error::Config("min_gain must be positive".into()));
        }
        Ok(())
    }
}

/// Final partition and the modularity of the flat partition after each pass,
/// starting with the all-singletons partition.
#[derive(Debug, Clone, PartialEq)]
pub struct LouvainOutcome {
    pub partition: Partition,
    pub modularity_per_pass: Vec<f64>,
}

impl LouvainOutcome {
    pub fn modularity(&self) -> f64 {
        *self
            .modularity_per_pass
            .last()
            .expect("at least the initial value")
    }
}

/// Weighted graph with self-loops, as produced by aggregation.
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        Self {
            adjacency: (0..g.node_count())
                .map(|v| g.neighbors(v).iter().map(|&w| (w, 1.0)).collect())
                .collect(),
            self_loops: vec![0.0; g.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    fn strength(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[v]
    }

    /// One node per community of `membership` (dense labels `0..count`).
    fn aggregate(&self, membership: &[usize], count: usize) -> Self {
        let mut self_loops = vec![0.0; count];
        let mut members = vec![Vec::new(); count];
        for (v, &c) in membership.iter().enumerate() {
            members[c].push(v);
            self_loops[c] += self.self_loops[v];
        }
        let mut scratch = vec![0.0; count];
        let mut touched = Vec::new();
        let mut adjacency = Vec::with_capacity(count);
        for (c, nodes) in members.iter().enumerate() {
            for &v in nodes {
                for &(w, weight) in &self.adjacency[v] {
                    let d = membership[w];
                    if d == c {
                        // each internal edge is seen from both ends
                        self_loops[c] += weight / 2.0;
                    } else {
                        if scratch[d] == 0.0 {
                            touched.push(d);
                        }
                        scratch[d] += weight;
                    }
                }
            }
            touched.sort_unstable();
            adjacency.push(touched.iter().map(|&d| (d, scratch[d])).collect());
            for &d in &touched {
                scratch[d] = 0.0;
            }
            touched.clear();
        }
        Self {
            adjacency,
            self_loops,
        }
    }
}

const GAIN_EPS: f64 = 1e-12;

/// Repeated local moving on one level. Returns dense community labels, their
/// count, and whether any node moved.
fn local_moves(level: &Level, order: &[usize], two_m: f64) -> (Vec<usize>, usize, bool) {
    let n = level.len();
    let strength: Vec<f64> = (0..n).map(|v| level.strength(v)).collect();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total = strength.clone();
    let mut links_to = vec![0.0; n];
    let mut candidates: Vec<usize> = Vec::new();
    let mut moved_any = false;

    loop {
        let mut moved = false;
        for &v in order {
            let home = community[v];
            candidates.clear();
            for &(w, weight) in &level.adjacency[v] {
                let c = community[w];
                if links_to[c] == 0.0 {
                    candidates.push(c);
                }
                links_to[c] += weight;
            }
            total[home] -= strength[v];

            let scale = strength[v] / two_m;
            let stay = links_to[home] - total[home] * scale;
            candidates.sort_unstable();
            let mut best = home;
            let mut best_gain = f64::NEG_INFINITY;
            for &c in &candidates {
                if c == home {
                    continue;
                }
                let gain = links_to[c] - total[c] * scale;
                if gain > best_gain + GAIN_EPS {
                    best = c;
                    best_gain = gain;
                }
            }
            if best == home || best_gain <= stay + GAIN_EPS {
                best = home;
            }

            total[best] += strength[v];
            if best != home {
                community[v] = best;
                moved = true;
            }
            for &c in &candidates {
                links_to[c] = 0.0;
            }
        }
        if !moved {
            break;
        }
        moved_any = true;
    }

    let dense = Partition::from_labels(&community);
    let count = dense.community_count();
    (dense.labels().to_vec(), count, moved_any)
}

/// Louvain optimization returning the per-pass modularity trace.
pub fn louvain_with_history(g: &Graph, cfg: &LouvainConfig) -> Result<LouvainOutcome> {
    cfg.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let two_m = 2.0 * g.edge_count() as f64;
    let mut flat: Vec<usize> = (0..g.node_count()).collect();
    let mut best = Partition::singletons(g.node_count());
    let mut history = vec![modularity(g, &best)?];
    let mut level = Level::from_graph(g);

    for _ in 0..cfg.max_passes {
        let mut order: Vec<usize> = (0..level.len()).collect();
        order.shuffle(&mut rng);
        let (membership, count, moved) = local_moves(&level, &order, two_m);
        if !moved {
            break;
        }
        for label in flat.iter_mut() {
            *label = membership[*label];
        }
        let candidate = Partition::from_labels(&flat);
        let q = modularity(g, &candidate)?;
        let previous = *history.last().unwrap();
        if q < previous {
            // round-off only; keep the better partition
            break;
        }
        best = candidate;
        history.push(q);
        if q - previous < cfg.min_gain {
            break;
        }
        level = level.aggregate(&membership, count);
    }

    Ok(LouvainOutcome {
        partition: best,
        modularity_per_pass: history,
    })
}

pub fn louvain(g: &Graph, cfg: &LouvainConfig) -> Result<Partition> {
    louvain_with_history(g, cfg).map(|outcome| outcome.partition)
}

/// Fraction of nodes on which two partitions agree under the best one-to-one
/// matching of their labels.
pub fn label_agreement(a: &Partition, b: &Partition) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(1.0);
    }
    let size = a.community_count().max(b.community_count());
    let mut overlap = vec![vec![0i64; size]; size];
    for (&x, &y) in a.labels().iter().zip(b.labels()) {
        overlap[x][y] += 1;
    }
    let matched = max_weight_assignment(&overlap);
    Ok(matched as f64 / a.len() as f64)
}

/// Hungarian algorithm on a square matrix, maximizing the total weight.
fn max_weight_assignment(weights: &[Vec<i64>]) -> i64 {
    let n = weights.len();
    let top = weights.iter().flatten().copied().max().unwrap_or(0);
    let cost = |i: usize, j: usize| top - weights[i - 1][j - 1];

    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| weights[owner[j] - 1][j - 1]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles(bridge: bool) -> Graph {
        let mut edges = vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
        if bridge {
            edges.push((2, 3));
        }
        Graph::from_edges(6, edges).unwrap()
    }

    fn two_cliques(k: usize) -> Graph {
        let mut edges = Vec::new();
        for offset in [0, k] {
            for a in 0..k {
                for b in a + 1..k {
                    edges.push((offset + a, offset + b));
                }
            }
        }
        edges.push((k - 1, k));
        Graph::from_edges(2 * k, edges).unwrap()
    }

    #[test]
    fn modularity_examples() {
        let halves = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(
            modularity(&two_triangles(false), &Partition::single(6)).unwrap(),
            0.0
        );
        assert!((modularity(&two_triangles(false), &halves).unwrap() - 0.5).abs() < 1e-12);
        // 2 * (3/7 - (7/14)^2) = 6/7 - 1/2
        let q = modularity(&two_triangles(true), &halves).unwrap();
        assert!((q - (6.0 / 7.0 - 0.5)).abs() < 1e-12);
        assert!((q - 0.357).abs() < 1e-3);
    }

    #[test]
    fn modularity_of_empty_graph_is_an_error() {
        assert!(matches!(
            modularity(&Graph::empty(3), &Partition::single(3)),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn recovers_two_cliques() {
        let g = two_cliques(10);
        let expected = Partition::from_labels(&[[0usize; 10], [1; 10]].concat());
        for seed in 0..5 {
            let out = louvain_with_history(&g, &LouvainConfig::new(seed)).unwrap();
            assert_eq!(out.partition, expected, "seed {seed}");
            assert!(out.modularity_per_pass.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn same_seed_same_partition() {
        let g = two_cliques(6);
        let cfg = LouvainConfig::new(42);
        assert_eq!(louvain(&g, &cfg).unwrap(), louvain(&g, &cfg).unwrap());
    }

    #[test]
    fn complete_graph_stays_whole() {
        for n in 3..=6 {
            let p = louvain(&Graph::complete(n), &LouvainConfig::new(1)).unwrap();
            assert_eq!(p.community_count(), 1);
        }
    }

    #[test]
    fn config_validation() {
        let g = two_cliques(4);
        let mut cfg = LouvainConfig::new(0);
        cfg.max_passes = 0;
        assert!(louvain(&g, &cfg).is_err());
        let mut cfg = LouvainConfig::new(0);
        cfg.min_gain = 0.0;
        assert!(louvain(&g, &cfg).is_err());
        assert!(louvain(&Graph::empty(4), &LouvainConfig::new(0)).is_err());
    }

    #[test]
    fn agreement_uses_best_matching() {
        let a = Partition::from_labels(&[0, 0, 1, 1, 2, 2]);
        let b = Partition::from_labels(&[5, 5, 3, 3, 3, 4]);
        // matching 0->5, 1->3, 2->4 agrees on 2 + 2 + 1 nodes
        assert!((label_agreement(&a, &b).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(label_agreement(&a, &a).unwrap(), 1.0);
        assert!(label_agreement(&a, &Partition::single(2)).is_err());
    }
}
