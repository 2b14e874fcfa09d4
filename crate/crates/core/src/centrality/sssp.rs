//! Single-source shortest-path counting and dependency accumulation
//! (Brandes), with the extra per-source tallies needed to split betweenness
//! into its neighborhood and non-neighborhood parts.

use std::collections::VecDeque;

use crate::graph::Graph;

pub(crate) const UNREACHED: u32 = u32::MAX;

/// Per-node sums accumulated over a set of sources, all in the ordered-pair
/// convention.
#[derive(Debug, Clone)]
pub(crate) struct Tallies {
    /// `Σ_s δ_s(j)`: ordered betweenness.
    pub total: Vec<f64>,
    /// `Σ_{s : d(s,j) = 1} δ_s(j)`: pairs whose source is a neighbor of `j`.
    pub from_neighbors: Vec<f64>,
    /// `Σ_{s : d(s,j) > 1} δ_s(j)`: the source-filtered sum.
    pub from_far: Vec<f64>,
    /// `Σ 1/σ_st` over ordered neighbor pairs `s, t` of `j` at distance 2.
    pub neighbor_pairs: Vec<f64>,
}

impl Tallies {
    pub fn zeros(n: usize) -> Self {
        Self {
            total: vec![0.0; n],
            from_neighbors: vec![0.0; n],
            from_far: vec![0.0; n],
            neighbor_pairs: vec![0.0; n],
        }
    }

    pub fn add(&mut self, other: &Tallies) {
        for (dst, src) in [
            (&mut self.total, &other.total),
            (&mut self.from_neighbors, &other.from_neighbors),
            (&mut self.from_far, &other.from_far),
            (&mut self.neighbor_pairs, &other.neighbor_pairs),
        ] {
            for (a, b) in dst.iter_mut().zip(src) {
                *a += b;
            }
        }
    }
}

/// Reusable BFS workspace for one source at a time.
pub(crate) struct SsspState {
    pub dist: Vec<u32>,
    pub sigma: Vec<f64>,
    delta: Vec<f64>,
    /// Reached nodes in non-decreasing distance order.
    pub order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl SsspState {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![UNREACHED; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.dist[v] = UNREACHED;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
        }
        self.order.clear();
    }

    /// BFS from `source`, filling distances, path counts and the visit order.
    pub fn explore(&mut self, g: &Graph, source: usize) {
        self.reset();
        self.dist[source] = 0;
        self.sigma[source] = 1.0;
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v] + 1;
            for &w in g.neighbors(v) {
                if self.dist[w] == UNREACHED {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
    }

    /// Backward dependency pass for the last explored source, adding into `tallies`.
    ///
    /// Predecessors of `w` are its neighbors one step closer to the source,
    /// so they are recovered from `dist` instead of being stored.
    pub fn accumulate(&mut self, g: &Graph, source: usize, tallies: &mut Tallies) {
        for &w in self.order.iter().rev() {
            let dw = self.dist[w];
            if dw == 0 {
                continue;
            }
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in g.neighbors(w) {
                if self.dist[v] == dw - 1 {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            let dep = self.delta[w];
            tallies.total[w] += dep;
            if dw == 1 {
                tallies.from_neighbors[w] += dep;
            } else {
                tallies.from_far[w] += dep;
            }
        }

        // Every s - j - t with t at distance 2 is a shortest path carrying
        // 1/σ_st of the pair, since σ_sj = σ_jt = 1.
        for &j in g.neighbors(source) {
            let mut sum = 0.0;
            for &t in g.neighbors(j) {
                if self.dist[t] == 2 {
                    sum += 1.0 / self.sigma[t];
                }
            }
            tallies.neighbor_pairs[j] += sum;
        }
    }
}
