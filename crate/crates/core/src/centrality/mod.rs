//! Betweenness centrality and its split into bridgeness and a local term.
//!
//! For a node `j`, betweenness sums `σ_ik(j) / σ_ik` over unordered pairs
//! `{i, k}` not containing `j`. Bridgeness keeps only the pairs where neither
//! endpoint is a neighbor of `j`; the remainder is the local term, so
//! `bc = bridgeness + local` for every node.
//!
//! The exact computation runs one Brandes pass per source and collects, per
//! node `j`:
//!
//! * `T[j] = Σ_s δ_s(j)`, the ordered betweenness;
//! * `L[j] = Σ_{s ∈ N(j)} δ_s(j)`, ordered pairs whose source is a neighbor;
//! * `P[j] = Σ 1/σ_st` over ordered neighbor pairs `s, t ∈ N(j)` at distance 2.
//!
//! Pairs touching the neighborhood number `2 L[j] - P[j]` in the ordered
//! convention, and everything is halved once at the end.
//!
//! [`bridgeness_si_compat`] keeps the older source-only filter (`δ_s(j)` is
//! counted only when `d(s, j) > 1`). Pairs with exactly one endpoint in
//! `N(j)` then count half, so it sits between bridgeness and betweenness.
//!
//! Sources are processed in fixed-size blocks whose partial sums are added in
//! block order, which makes results bit-identical for any worker count.

mod bruteforce;
mod sssp;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
pub use bruteforce::bridgeness_bruteforce;
use sssp::{SsspState, Tallies};

const SOURCES_PER_BLOCK: usize = 32;
const BLOCKS_PER_ROUND: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairConvention {
    /// Each unordered pair `{i, k}` counted once.
    Unordered,
}

/// Per-node scores from one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityResult {
    pub bc: Vec<f64>,
    pub bridgeness: Vec<f64>,
    pub local: Vec<f64>,
    pub convention: PairConvention,
}

impl CentralityResult {
    pub fn len(&self) -> usize {
        self.bc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bc.is_empty()
    }

    /// Builds a result from betweenness and a filtered score, deriving
    /// `local = bc - filtered`. Round-off that would push the filtered part
    /// outside `[0, bc]` is clamped.
    pub(crate) fn from_split(bc: Vec<f64>, filtered: Vec<f64>) -> Self {
        let mut bridgeness = Vec::with_capacity(bc.len());
        let mut local = Vec::with_capacity(bc.len());
        for (&b, &f) in bc.iter().zip(&filtered) {
            let f = f.clamp(0.0, b);
            bridgeness.push(f);
            local.push(b - f);
        }
        Self {
            bc,
            bridgeness,
            local,
            convention: PairConvention::Unordered,
        }
    }
}

/// Runner with a configurable worker count.
///
/// `workers: None` uses the ambient rayon pool.
#[derive(Debug, Clone, Copy, Default)]
pub struct Centrality {
    workers: Option<usize>,
}

impl Centrality {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }

    fn tallies(&self, g: &Graph) -> Tallies {
        match self.workers {
            None => tallies(g),
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .expect("failed to build worker pool")
                .install(|| tallies(g)),
        }
    }

    pub fn betweenness(&self, g: &Graph) -> Vec<f64> {
        self.tallies(g).total.into_iter().map(|x| x / 2.0).collect()
    }

    pub fn bridgeness_exact(&self, g: &Graph) -> CentralityResult {
        let t = self.tallies(g);
        let bc: Vec<f64> = t.total.iter().map(|x| x / 2.0).collect();
        let bridgeness = (0..bc.len())
            .map(|j| {
                let local = t.from_neighbors[j] - 0.5 * t.neighbor_pairs[j];
                bc[j] - local
            })
            .collect();
        CentralityResult::from_split(bc, bridgeness)
    }

    /// Source-filtered variant; returns bc alongside so callers can derive its local part.
    pub fn bridgeness_si_compat(&self, g: &Graph) -> CentralityResult {
        let t = self.tallies(g);
        let bc = t.total.iter().map(|x| x / 2.0).collect();
        let filtered = t.from_far.iter().map(|x| x / 2.0).collect();
        CentralityResult::from_split(bc, filtered)
    }
}

fn tallies(g: &Graph) -> Tallies {
    let n = g.node_count();
    let mut acc = Tallies::zeros(n);
    let blocks: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(SOURCES_PER_BLOCK)
        .map(|start| start..(start + SOURCES_PER_BLOCK).min(n))
        .collect();

    for round in blocks.chunks(BLOCKS_PER_ROUND) {
        let partials: Vec<Tallies> = round
            .par_iter()
            .map(|sources| {
                let mut part = Tallies::zeros(n);
                let mut state = SsspState::new(n);
                for s in sources.clone() {
                    state.explore(g, s);
                    state.accumulate(g, s, &mut part);
                }
                part
            })
            .collect();
        for part in &partials {
            acc.add(part);
        }
    }
    acc
}

/// Unordered-pair betweenness, unnormalized. Unreachable pairs contribute 0.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    Centrality::new().betweenness(g)
}

/// Betweenness, bridgeness and local term in one pass.
pub fn bridgeness_exact(g: &Graph) -> CentralityResult {
    Centrality::new().bridgeness_exact(g)
}

/// Bridgeness as produced by the source-only neighbor filter.
pub fn bridgeness_si_compat(g: &Graph) -> Vec<f64> {
    Centrality::new().bridgeness_si_compat(g).bridgeness
}

/// Mean of `local / bc` per degree over nodes with `bc > 0`.
pub fn locterm_by_degree(result: &CentralityResult, g: &Graph) -> BTreeMap<usize, f64> {
    let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (v, (&bc, &bri)) in result.bc.iter().zip(&result.bridgeness).enumerate() {
        if bc > 0.0 {
            let entry = sums.entry(g.neighbors(v).len()).or_default();
            entry.0 += (bc - bri) / bc;
            entry.1 += 1;
        }
    }
    sums.into_iter()
        .map(|(k, (sum, count))| (k, sum / count as f64))
        .collect()
}
