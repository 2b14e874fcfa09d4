//! Bridgeness centrality and the tooling around it.
//!
//! Betweenness centrality mixes two kinds of importance: nodes that sit at
//! the center of one dense region and nodes that connect separate regions.
//! Dropping every shortest path that starts or ends next to a node leaves its
//! *bridgeness*, which keeps the second kind and discards the first.
//!
//! * [`graph`] and [`io`]: simple undirected graphs, edge lists, partitions.
//! * [`centrality`]: betweenness, bridgeness, local term, a brute-force reference.
//! * [`indicator`]: the partition-based global indicator `G`.
//! * [`community`]: modularity and Louvain.
//! * [`netgen`]: LFR-style benchmark graphs with unbiased bridge rewiring.
//! * [`evaluation`]: ranking curves against `G`, smoothing and per-node reports.
//! * [`stats`]: rank-sum test and Pearson correlation.

pub mod centrality;
pub mod community;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod indicator;
pub mod io;
pub mod netgen;
pub mod stats;

pub use centrality::{
    betweenness, bridgeness_bruteforce, bridgeness_exact, bridgeness_si_compat, locterm_by_degree,
    Centrality, CentralityResult,
};
pub use error::{Error, Result};
pub use graph::{Graph, NodeTable, Partition};
