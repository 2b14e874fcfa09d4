//! LFR-style benchmark graphs with planted communities.
//!
//! Generation has two phases. First every community is wired on its own as a
//! configuration-model graph over a truncated power-law degree sequence, so
//! all edges start out internal. Then internal edges are rewired outward
//! until the requested mixing fraction is reached: a node `v` is drawn
//! uniformly among nodes that still have an internal edge, one of those
//! edges `(v, u)` is drawn uniformly, and `u` is replaced by a random node
//! outside `v`'s community. `v` keeps its degree, so the nodes that end up as
//! bridges are a uniform sample rather than a degree-weighted one.
//!
//! [`SelectionRule::Link`] draws the internal edge directly instead, which is
//! the degree-biased behavior of classic LFR; it exists for comparison.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::indicator::inter_community_fraction;
use crate::stats::{rank_sum, RankSum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommunitySizes {
    /// `n / C` each, the remainder spread over the first communities.
    Equal,
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeSpec {
    /// Power-law exponent `γ` of `p(k) ∝ k^-γ`.
    pub exponent: f64,
    /// Lower cutoff; ignored when `mean` is set, in which case the cutoff is
    /// solved for.
    pub min: f64,
    /// Upper cutoff. `None` means `min(50, smallest community - 1)`.
    pub max: Option<usize>,
    /// Target mean degree.
    pub mean: Option<f64>,
}

impl Default for DegreeSpec {
    fn default() -> Self {
        Self {
            exponent: 2.5,
            min: 10.0,
            max: None,
            mean: Some(15.0),
        }
    }
}

/// How the edge to rewire is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    /// Uniform node, then one of its internal edges.
    #[default]
    Node,
    /// Uniform internal edge, random orientation.
    Link,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LfrConfig {
    pub n: usize,
    pub communities: usize,
    pub sizes: CommunitySizes,
    pub degree: DegreeSpec,
    /// Target fraction of inter-community edges.
    pub mu: f64,
    pub seed: u64,
    #[serde(default)]
    pub selection: SelectionRule,
}

const DEFAULT_MAX_DEGREE: usize = 50;
const TARGET_RETRIES: usize = 32;
const PAIRING_ROUNDS: usize = 50;

impl LfrConfig {
    pub fn new(n: usize, communities: usize, mu: f64, seed: u64) -> Self {
        Self {
            n,
            communities,
            sizes: CommunitySizes::Equal,
            degree: DegreeSpec::default(),
            mu,
            seed,
            selection: SelectionRule::Node,
        }
    }

    pub fn community_sizes(&self) -> Result<Vec<usize>> {
        if self.communities == 0 || self.n < self.communities {
            return Err(Error::Config(format!(
                "need n >= communities >= 1, got n = {}, communities = {}",
                self.n, self.communities
            )));
        }
        match &self.sizes {
            CommunitySizes::Equal => {
                let base = self.n / self.communities;
                let extra = self.n % self.communities;
                Ok((0..self.communities)
                    .map(|c| base + usize::from(c < extra))
                    .collect())
            }
            CommunitySizes::Explicit(sizes) => {
                if sizes.len() != self.communities
                    || sizes.iter().sum::<usize>() != self.n
                    || sizes.contains(&0)
                {
                    return Err(Error::Config(
                        "explicit community sizes must be positive, one per community, summing to n"
                            .into(),
                    ));
                }
                Ok(sizes.clone())
            }
        }
    }

    /// Checks the configuration and resolves the degree cutoffs `(min, max)`.
    pub fn validate(&self) -> Result<(f64, usize)> {
        let sizes = self.community_sizes()?;
        if !(0.0..1.0).contains(&self.mu) {
            return Err(Error::Config(format!(
                "mu must lie in [0, 1), got {}",
                self.mu
            )));
        }
        if self.mu > 0.0 && self.communities < 2 {
            return Err(Error::Config(
                "mu > 0 needs at least two communities".into(),
            ));
        }
        let exponent = self.degree.exponent;
        if !(exponent.is_finite() && exponent >= 0.0) {
            return Err(Error::Config(format!("invalid degree exponent {exponent}")));
        }
        let smallest = *sizes.iter().min().expect("at least one community");
        let ceiling = smallest.saturating_sub(1);
        let max = self.degree.max.unwrap_or(DEFAULT_MAX_DEGREE.min(ceiling));
        if max < 1 || max > ceiling {
            return Err(Error::Config(format!(
                "max degree {max} infeasible: smallest community has {smallest} nodes"
            )));
        }
        let bmax = max as f64;
        let min = match self.degree.mean {
            Some(target) => {
                let lowest = power_law_mean(1.0, bmax, exponent);
                if !(target > lowest && target < bmax) {
                    return Err(Error::Config(format!(
                        "mean degree {target} unreachable with max degree {max} and exponent {exponent} \
                         (attainable range ({lowest:.3}, {max}))"
                    )));
                }
                solve_lower_cutoff(target, bmax, exponent)
            }
            None => {
                let min = self.degree.min;
                if !(min >= 1.0 && min <= bmax) {
                    return Err(Error::Config(format!(
                        "min degree {min} infeasible with max degree {max} \
                         (smallest community has {smallest} nodes)"
                    )));
                }
                min
            }
        };
        Ok((min, max))
    }
}

/// Mean of the continuous power law `x^-γ` truncated to `[a, b]`.
fn power_law_mean(a: f64, b: f64, exponent: f64) -> f64 {
    let moment = |p: f64| {
        if (p + 1.0).abs() < 1e-12 {
            (b / a).ln()
        } else {
            (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0)
        }
    };
    if (b - a).abs() < 1e-12 {
        return a;
    }
    moment(1.0 - exponent) / moment(-exponent)
}

/// Lower cutoff `a` such that the truncated power law on `[a, max]` has the
/// given mean (the mean is increasing in `a`).
fn solve_lower_cutoff(mean: f64, max: f64, exponent: f64) -> f64 {
    let (mut lo, mut hi) = (1.0, max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if power_law_mean(mid, max, exponent) < mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn sample_power_law<R: Rng>(rng: &mut R, a: f64, b: f64, exponent: f64) -> f64 {
    let u: f64 = rng.random();
    let e = 1.0 - exponent;
    if e.abs() < 1e-12 {
        a * (b / a).powf(u)
    } else {
        (a.powf(e) + u * (b.powf(e) - a.powf(e))).powf(1.0 / e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedNetwork {
    pub graph: Graph,
    pub ground_truth: Partition,
    pub achieved_mu: f64,
    /// Nodes that kept their stub while one of their edges was moved outward, ascending.
    pub rewired_nodes: Vec<usize>,
}

/// Mutable edge store used while generating.
struct Wiring {
    edges: HashSet<(usize, usize)>,
    /// Internal neighbors per node.
    internal: Vec<Vec<usize>>,
    /// External neighbors per node.
    external: Vec<Vec<usize>>,
}

impl Wiring {
    fn new(n: usize) -> Self {
        Self {
            edges: HashSet::new(),
            internal: vec![Vec::new(); n],
            external: vec![Vec::new(); n],
        }
    }

    fn key(u: usize, v: usize) -> (usize, usize) {
        (u.min(v), u.max(v))
    }

    fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&Self::key(u, v))
    }

    fn add_internal(&mut self, u: usize, v: usize) -> bool {
        if u == v || !self.edges.insert(Self::key(u, v)) {
            return false;
        }
        self.internal[u].push(v);
        self.internal[v].push(u);
        true
    }

    fn remove_internal(&mut self, u: usize, v: usize) {
        self.edges.remove(&Self::key(u, v));
        for (a, b) in [(u, v), (v, u)] {
            let pos = self.internal[a]
                .iter()
                .position(|&x| x == b)
                .expect("edge present");
            self.internal[a].swap_remove(pos);
        }
    }

    fn add_external(&mut self, u: usize, v: usize) {
        self.edges.insert(Self::key(u, v));
        self.external[u].push(v);
        self.external[v].push(u);
    }

    fn into_graph(self) -> Graph {
        let n = self.internal.len();
        let mut edges: Vec<(usize, usize)> = self.edges.into_iter().collect();
        edges.sort_unstable();
        Graph::from_edges(n, edges).expect("indices in range")
    }
}

fn degree_sequence<R: Rng>(
    rng: &mut R,
    size: usize,
    min: f64,
    max: usize,
    exponent: f64,
) -> Vec<usize> {
    let top = max as f64;
    let mut degrees: Vec<usize> = (0..size)
        .map(|_| {
            let x = sample_power_law(rng, min, top, exponent);
            (x.round() as usize).clamp(1, max)
        })
        .collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        let i = rng.random_range(0..size);
        if degrees[i] < max {
            degrees[i] += 1;
        } else {
            degrees[i] -= 1;
        }
    }
    degrees
}

/// Configuration-model wiring of one community. Conflicting stub pairs are
/// reshuffled, then resolved by edge swaps; stubs that still cannot be
/// placed are dropped.
fn wire_community<R: Rng>(
    rng: &mut R,
    wiring: &mut Wiring,
    members: &[usize],
    degrees: &[usize],
) -> usize {
    let mut stubs: Vec<usize> = members
        .iter()
        .zip(degrees)
        .flat_map(|(&v, &d)| std::iter::repeat_n(v, d))
        .collect();
    let mut placed: Vec<(usize, usize)> = Vec::new();

    for _ in 0..PAIRING_ROUNDS {
        if stubs.len() < 2 {
            break;
        }
        stubs.shuffle(rng);
        let mut rejected = Vec::new();
        for pair in stubs.chunks_exact(2) {
            if wiring.add_internal(pair[0], pair[1]) {
                placed.push(Wiring::key(pair[0], pair[1]));
            } else {
                rejected.extend_from_slice(pair);
            }
        }
        let progressed = rejected.len() < stubs.len();
        stubs = rejected;
        if !progressed {
            break;
        }
    }

    // swap (a, b) + existing (c, d) into (a, c) + (b, d)
    let mut attempts = 0;
    while stubs.len() >= 2 && attempts < 1000 * stubs.len() && !placed.is_empty() {
        attempts += 1;
        let a = stubs[stubs.len() - 1];
        let b = stubs[stubs.len() - 2];
        let idx = rng.random_range(0..placed.len());
        let (mut c, mut d) = placed[idx];
        if rng.random::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        let distinct = a != c && a != d && b != c && b != d;
        if !distinct || wiring.contains(a, c) || wiring.contains(b, d) {
            continue;
        }
        wiring.remove_internal(c, d);
        wiring.add_internal(a, c);
        wiring.add_internal(b, d);
        placed.swap_remove(idx);
        placed.push(Wiring::key(a, c));
        placed.push(Wiring::key(b, d));
        stubs.truncate(stubs.len() - 2);
    }
    stubs.len()
}

/// Picks a node outside `home`, retrying until it is not already adjacent to `v`.
fn external_target<R: Rng>(
    rng: &mut R,
    wiring: &Wiring,
    labels: &[usize],
    v: usize,
) -> Option<usize> {
    let n = labels.len();
    for _ in 0..TARGET_RETRIES {
        let w = loop {
            let w = rng.random_range(0..n);
            if labels[w] != labels[v] {
                break w;
            }
        };
        if !wiring.contains(v, w) {
            return Some(w);
        }
    }
    None
}

/// Uniform sampling and O(1) removal over a set of items.
struct Pool<T> {
    items: Vec<T>,
    position: HashMap<T, usize>,
}

impl<T: Copy + Eq + std::hash::Hash> Pool<T> {
    fn new(items: Vec<T>) -> Self {
        let position = items.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        Self { items, position }
    }

    fn remove(&mut self, x: T) {
        if let Some(i) = self.position.remove(&x) {
            self.items.swap_remove(i);
            if i < self.items.len() {
                self.position.insert(self.items[i], i);
            }
        }
    }

    fn pick<R: Rng>(&self, rng: &mut R) -> Option<T> {
        self.items.choose(rng).copied()
    }
}

pub fn generate(cfg: &LfrConfig) -> Result<GeneratedNetwork> {
    let (min_degree, max_degree) = cfg.validate()?;
    let sizes = cfg.community_sizes()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let labels: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    let mut wiring = Wiring::new(cfg.n);

    let mut start = 0;
    let mut dropped = 0;
    for &size in &sizes {
        let members: Vec<usize> = (start..start + size).collect();
        let degrees = degree_sequence(&mut rng, size, min_degree, max_degree, cfg.degree.exponent);
        dropped += wire_community(&mut rng, &mut wiring, &members, &degrees);
        start += size;
    }
    if dropped > 0 {
        log::debug!("dropped {dropped} unplaceable stub(s) while wiring communities");
    }

    let m = wiring.edges.len();
    let target = ((cfg.mu * m as f64) - 1e-9).ceil().max(0.0) as usize;
    let mut rewired = BTreeSet::new();
    if target > 0 {
        rewire(
            cfg.selection,
            &mut rng,
            &mut wiring,
            &labels,
            target,
            &mut rewired,
        )?;
    }

    let graph = wiring.into_graph();
    let ground_truth = Partition::from_labels(&labels);
    let achieved_mu = inter_community_fraction(&graph, &ground_truth)?;
    Ok(GeneratedNetwork {
        graph,
        ground_truth,
        achieved_mu,
        rewired_nodes: rewired.into_iter().collect(),
    })
}

fn rewire<R: Rng>(
    rule: SelectionRule,
    rng: &mut R,
    wiring: &mut Wiring,
    labels: &[usize],
    target: usize,
    rewired: &mut BTreeSet<usize>,
) -> Result<()> {
    let n = labels.len();
    let mut nodes = Pool::new((0..n).filter(|&v| !wiring.internal[v].is_empty()).collect());
    let mut links = match rule {
        SelectionRule::Node => Pool::new(Vec::new()),
        SelectionRule::Link => {
            let mut all: Vec<(usize, usize)> = wiring.edges.iter().copied().collect();
            all.sort_unstable();
            Pool::new(all)
        }
    };

    let mut done = 0;
    let mut failures = 0;
    let failure_cap = 100 * target + 10_000;
    while done < target {
        let (v, u) = match rule {
            SelectionRule::Node => {
                let Some(v) = nodes.pick(rng) else {
                    return Err(Error::Infeasible("no internal edges left to rewire".into()));
                };
                let u = *wiring.internal[v]
                    .choose(rng)
                    .expect("eligible node has an internal edge");
                (v, u)
            }
            SelectionRule::Link => {
                let Some((a, b)) = links.pick(rng) else {
                    return Err(Error::Infeasible("no internal edges left to rewire".into()));
                };
                if rng.random::<bool>() {
                    (a, b)
                } else {
                    (b, a)
                }
            }
        };
        let Some(w) = external_target(rng, wiring, labels, v) else {
            failures += 1;
            if failures > failure_cap {
                return Err(Error::Infeasible(format!(
                    "mixing target unreachable: placed {done} of {target} external edges"
                )));
            }
            continue;
        };

        wiring.remove_internal(v, u);
        wiring.add_external(v, w);
        links.remove(Wiring::key(v, u));
        for x in [v, u] {
            if wiring.internal[x].is_empty() {
                nodes.remove(x);
            }
        }
        rewired.insert(v);
        done += 1;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeBias {
    pub rewired_mean_degree: f64,
    pub overall_mean_degree: f64,
    /// Rewired-node degrees against all node degrees.
    pub rank_sum: RankSum,
}

/// Compares degrees of the rewired nodes with the degrees of all nodes.
pub fn bridge_degree_bias(net: &GeneratedNetwork) -> Result<DegreeBias> {
    if net.rewired_nodes.is_empty() {
        return Err(Error::NoRewiredNodes);
    }
    let degrees: Vec<f64> = net.graph.degrees().into_iter().map(|d| d as f64).collect();
    let rewired: Vec<f64> = net.rewired_nodes.iter().map(|&v| degrees[v]).collect();
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    Ok(DegreeBias {
        rewired_mean_degree: mean(&rewired),
        overall_mean_degree: mean(&degrees),
        rank_sum: rank_sum(&rewired, &degrees)?,
    })
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("indices in range")
}
