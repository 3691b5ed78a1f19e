use thiserror::Error;

use crate::hypergraph::NodeId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("hyperedge {edge} has no members")]
    EmptyEdge { edge: usize },
    #[error("node {node} appears twice in hyperedge {edge}")]
    DuplicateMember { edge: usize, node: NodeId },
    #[error("anchor {node} of hyperedge {edge} is not a member of it")]
    AnchorNotMember { edge: usize, node: NodeId },
    #[error("hyperedge {edge} has no anchor")]
    MissingAnchor { edge: usize },
    #[error("hyperedge {edge} has {count} anchors, expected exactly {expected}")]
    AnchorCount {
        edge: usize,
        count: usize,
        expected: usize,
    },
    #[error("node index {node} out of range for {nodes} nodes")]
    NodeOutOfRange { node: NodeId, nodes: usize },
    #[error("split ratios must be non-negative and sum to 1")]
    InvalidRatios,
    #[error("not enough unique hyperedges to split: found {found}, need at least 3")]
    NotEnoughUniqueEdges { found: usize },
    #[error("split labels cover {found} unique hyperedges, expected {expected}")]
    SplitSizeMismatch { expected: usize, found: usize },
    #[error("unique hyperedge {key} has an invalid split label for its size")]
    InvalidSplitLabel { key: usize },
    #[error("training split is empty")]
    EmptyTrainSet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("extra feature columns missing for node {node}")]
    MissingExtraFeature { node: NodeId },
    #[error("non-finite loss in {stage} at epoch {epoch}")]
    NonFiniteLoss { stage: &'static str, epoch: usize },
    #[error("loss coefficient must be non-negative")]
    NegativeAlpha,
    #[error("aggregation weight must be non-negative")]
    NegativeWeight,
    #[error("cannot pick {k} anchors from hyperedge {edge} of size {size}")]
    TooManyAnchors { edge: usize, k: usize, size: usize },
    #[error("no prediction for hyperedge {edge}")]
    MissingPrediction { edge: usize },
    #[error("anchor of hyperedge {edge} is absent from its ranking")]
    AnchorNotRanked { edge: usize },
    #[error("too few samples: {found}, need at least {needed}")]
    TooFewSamples { found: usize, needed: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
