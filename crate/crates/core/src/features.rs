//! Topological features of (node, hyperedge) incidences.
//!
//! Four raw node centralities (degree, eigenvector, PageRank, coreness) are
//! normalized and aggregated into 24 global columns per node, and normalized
//! inside each hyperedge into 8 local columns plus the hyperedge size.

mod centrality;
mod expansion;
mod matrix;
mod normalize;

pub use centrality::{
    coreness, eigenvector_centrality, pagerank, raw_node_features, RawNodeFeatures, EIGEN_MAX_ITER,
    EIGEN_TOL, PAGERANK_DAMPING, PAGERANK_MAX_ITER, PAGERANK_TOL,
};
pub use expansion::{clique_expansion, CliqueExpansion};
pub use matrix::{
    feature_matrix, global_feature_block, local_feature_block, ExtraColumns, PairFeatureMatrix,
    BASE_WIDTH, GLOBAL_WIDTH, LOCAL_WIDTH,
};
pub use normalize::{descending_fractional_rank, min_max, rank_normalize};
