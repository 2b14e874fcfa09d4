//! Ranking comparison against the global indicator.
//!
//! For a candidate score (betweenness, bridgeness, ...) nodes are ranked by
//! decreasing score and the indicator `G` is summed over the top `r`. That
//! sum is divided by the best achievable one, the sum of the `r` largest `G`
//! values. A ratio of 1 at every `r` means the candidate ranks bridges as
//! well as `G` itself.

use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::centrality::CentralityResult;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeTable, Partition};
use crate::indicator::GlobalIndicatorResult;

pub const DEFAULT_SMOOTHING_WINDOW: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub ranking: String,
    /// Moving-average window, `1` for a raw curve.
    pub smoothing_window: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingCurve {
    /// Rank positions `1..=n`.
    pub x: Vec<usize>,
    pub y: Vec<f64>,
    pub metadata: CurveMetadata,
}

impl RankingCurve {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn named(mut self, ranking: &str) -> Self {
        self.metadata.ranking = ranking.to_owned();
        self
    }

    /// Two-column `rank,ratio` CSV.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "rank,ratio")?;
        for (x, y) in self.x.iter().zip(&self.y) {
            writeln!(out, "{x},{y}")?;
        }
        Ok(())
    }

    pub fn write_metadata_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.metadata)?;
        Ok(())
    }
}

/// Node indices by descending score, ties by ascending index.
pub fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

pub fn cumulative_ratio_curve(reference: &[f64], candidate: &[f64]) -> Result<RankingCurve> {
    if reference.len() != candidate.len() {
        return Err(Error::LengthMismatch {
            left: reference.len(),
            right: candidate.len(),
        });
    }
    if reference.is_empty() {
        return Err(Error::Config(
            "ranking curve needs at least one node".into(),
        ));
    }
    let best = ranking(reference);
    let ranked = ranking(candidate);
    let mut best_sum = 0.0;
    let mut ranked_sum = 0.0;
    let y = best
        .iter()
        .zip(&ranked)
        .map(|(&b, &r)| {
            best_sum += reference[b];
            ranked_sum += reference[r];
            if best_sum == 0.0 {
                1.0
            } else {
                ranked_sum / best_sum
            }
        })
        .collect();
    Ok(RankingCurve {
        x: (1..=reference.len()).collect(),
        y,
        metadata: CurveMetadata {
            ranking: String::new(),
            smoothing_window: 1,
        },
    })
}

/// Trailing moving average over `window` points, truncated at the start.
pub fn smooth(curve: &RankingCurve, window: usize) -> Result<RankingCurve> {
    if window == 0 {
        return Err(Error::Config("smoothing window must be at least 1".into()));
    }
    let y = (0..curve.y.len())
        .map(|i| {
            let slice = &curve.y[(i + 1).saturating_sub(window)..=i];
            slice.iter().sum::<f64>() / slice.len() as f64
        })
        .collect();
    Ok(RankingCurve {
        x: curve.x.clone(),
        y,
        metadata: CurveMetadata {
            ranking: curve.metadata.ranking.clone(),
            smoothing_window: window,
        },
    })
}

/// Mean of `a.y - b.y`.
pub fn curve_advantage(a: &RankingCurve, b: &RankingCurve) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = a.y.iter().zip(&b.y).map(|(x, y)| x - y).sum();
    Ok(total / a.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub node_id: String,
    #[serde(rename = "G")]
    pub g: f64,
    pub community: usize,
    pub bc: f64,
    pub bridgeness: f64,
    pub degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportColumn {
    NodeId,
    G,
    Community,
    Bc,
    Bridgeness,
    Degree,
}

impl std::str::FromStr for ReportColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "node_id" | "id" => Self::NodeId,
            "g" | "stirling" => Self::G,
            "community" => Self::Community,
            "bc" | "betweenness" => Self::Bc,
            "bridgeness" => Self::Bridgeness,
            "degree" => Self::Degree,
            other => return Err(Error::Config(format!("unknown report column {other:?}"))),
        })
    }
}

/// Per-node table in the layout `node_id,G,community,bc,bridgeness,degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeReport {
    pub rows: Vec<ReportRow>,
}

pub const REPORT_HEADER: [&str; 6] = ["node_id", "G", "community", "bc", "bridgeness", "degree"];

impl NodeReport {
    /// Stable sort on one column; ties keep node order.
    pub fn sort_by(&mut self, column: ReportColumn, descending: bool) {
        self.rows.sort_by(|a, b| {
            let ord = match column {
                ReportColumn::NodeId => a.node_id.cmp(&b.node_id),
                ReportColumn::G => a.g.total_cmp(&b.g),
                ReportColumn::Community => a.community.cmp(&b.community),
                ReportColumn::Bc => a.bc.total_cmp(&b.bc),
                ReportColumn::Bridgeness => a.bridgeness.total_cmp(&b.bridgeness),
                ReportColumn::Degree => a.degree.cmp(&b.degree),
            };
            if descending {
                ord.reverse()
            } else {
                ord
            }
        });
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", REPORT_HEADER.join(","))?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.node_id, r.g, r.community, r.bc, r.bridgeness, r.degree
            )?;
        }
        Ok(())
    }
}

pub fn node_report(
    g: &Graph,
    table: &NodeTable,
    partition: &Partition,
    centrality: &CentralityResult,
    indicator: &GlobalIndicatorResult,
) -> Result<NodeReport> {
    let n = g.node_count();
    for len in [
        table.len(),
        partition.len(),
        centrality.len(),
        indicator.g.len(),
    ] {
        if len != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: len,
            });
        }
    }
    let rows = (0..n)
        .map(|v| ReportRow {
            node_id: table.id(v).to_owned(),
            g: indicator.g[v],
            community: partition.label(v),
            bc: centrality.bc[v],
            bridgeness: centrality.bridgeness[v],
            degree: g.neighbors(v).len(),
        })
        .collect();
    Ok(NodeReport { rows })
}
