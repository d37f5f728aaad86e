//! Quality assessment of dimensionality-reduction embeddings with the
//! co-ranking framework.
//!
//! The pipeline is: point sets → distance matrices ([`geometry`]) → rank
//! matrices ([`ranking`]) → co-ranking matrix and min-rank/error histogram
//! ([`coranking`]) → scalar and parametric quality measures ([`measures`])
//! and per-point contributions for coloring an embedding ([`local_quality`]).
//!
//! Everything is deterministic. Row-parallel work uses rayon but all
//! reductions are either integer counts or performed in index order, so the
//! results do not depend on the number of threads.

pub mod coranking;
pub mod datasets;
mod error;
pub mod geometry;
pub mod io;
pub mod local_quality;
pub mod measures;
pub mod ranking;

pub use coranking::{block_counts, coranking_matrix, min_error_histogram, BlockCounts, CoRankingMatrix, MinErrHistogram};
pub use error::{Error, Result};
pub use geometry::{geodesic_distances, knn_graph, pairwise_distances, DistanceMatrix, Metric, NeighborGraph, PointSet};
pub use local_quality::{colorize, pointwise_quality, pointwise_quality_naive, ColorScheme, LocalQuality, Rgb};
pub use measures::{
    lcmc_curve, qnx_curve, qnx_via_weights, quality_map, random_baseline, scalar_summary, split_summary,
    BaselineSpec, CurveKind, Normalization, QualityCurve, QualityMap, SplitSummary, ToleranceComparison,
};
pub use ranking::{rank_errors, rank_matrix, RankErrorMatrix, RankMatrix};
