//! Direct evaluation of the pair sums, for small graphs and as a reference.
//!
//! Distances and path counts for all pairs come from plain BFS. A node `j`
//! lies on shortest `i`–`k` paths iff `d(i,j) + d(j,k) = d(i,k)`, in which
//! case `σ_ik(j) = σ_ij · σ_jk`. The neighborhood filter is applied to each
//! pair literally. Cost is `O(n³)`.

use std::collections::VecDeque;

use super::CentralityResult;
use crate::graph::Graph;

const INF: u32 = u32::MAX;

struct AllPairs {
    n: usize,
    dist: Vec<u32>,
    sigma: Vec<f64>,
}

impl AllPairs {
    fn compute(g: &Graph) -> Self {
        let n = g.node_count();
        let mut dist = vec![INF; n * n];
        let mut sigma = vec![0.0; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = s * n;
            dist[row + s] = 0;
            sigma[row + s] = 1.0;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in g.neighbors(v) {
                    if dist[row + w] == INF {
                        dist[row + w] = dist[row + v] + 1;
                        queue.push_back(w);
                    }
                    if dist[row + w] == dist[row + v] + 1 {
                        sigma[row + w] += sigma[row + v];
                    }
                }
            }
        }
        Self { n, dist, sigma }
    }

    #[inline]
    fn d(&self, a: usize, b: usize) -> u32 {
        self.dist[a * self.n + b]
    }

    #[inline]
    fn s(&self, a: usize, b: usize) -> f64 {
        self.sigma[a * self.n + b]
    }
}

/// Betweenness and bridgeness by enumerating every unordered pair for every node.
pub fn bridgeness_bruteforce(g: &Graph) -> CentralityResult {
    let n = g.node_count();
    let ap = AllPairs::compute(g);
    let mut bc = vec![0.0; n];
    let mut bri = vec![0.0; n];

    for j in 0..n {
        let near = |x: usize| g.has_edge(j, x);
        for i in 0..n {
            if i == j || ap.d(i, j) == INF {
                continue;
            }
            for k in i + 1..n {
                if k == j || ap.d(j, k) == INF {
                    continue;
                }
                if ap.d(i, j) + ap.d(j, k) != ap.d(i, k) {
                    continue;
                }
                let share = ap.s(i, j) * ap.s(j, k) / ap.s(i, k);
                bc[j] += share;
                if !near(i) && !near(k) {
                    bri[j] += share;
                }
            }
        }
    }
    CentralityResult::from_split(bc, bri)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_three() {
        let r = bridgeness_bruteforce(&Graph::path(3));
        assert_eq!(r.bc, vec![0.0, 1.0, 0.0]);
        assert_eq!(r.bridgeness[1], 0.0);
    }

    #[test]
    fn complete_graph() {
        let r = bridgeness_bruteforce(&Graph::complete(5));
        assert!(r.bc.iter().chain(&r.bridgeness).all(|&x| x == 0.0));
    }

    #[test]
    fn path_of_five_by_hand() {
        // pairs through the middle node 2: {0,3},{0,4},{1,3},{1,4}; only {0,4}
        // avoids its neighbors 1 and 3
        let r = bridgeness_bruteforce(&Graph::path(5));
        assert_eq!(r.bc[2], 4.0);
        assert_eq!(r.bridgeness[2], 1.0);
        assert_eq!(r.local[2], 3.0);
    }

    #[test]
    fn four_cycle() {
        assert_eq!(bridgeness_bruteforce(&Graph::cycle(4)).bc, vec![0.5; 4]);
    }
}
