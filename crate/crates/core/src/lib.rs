//! Group anchor identification on hypergraphs under label scarcity.
//!
//! Every hyperedge models one group interaction and carries one (or a few)
//! *anchor* members. Given anchors for a small training subset of hyperedges,
//! the two-stage learner predicts the anchors of all remaining hyperedges:
//!
//! 1. [`stage1`] fits a small perceptron that scores every (node, hyperedge)
//!    incidence from the topological features built in [`features`];
//! 2. [`stage2`] learns one scalar anchor strength per node, aligned with the
//!    Stage-1 scores, and aggregates per-edge winners into a per-node predicted
//!    anchor proportion used for the final prediction.
//!
//! The crate also carries the evaluation side: accuracy/NDCG/MRR in
//! [`metrics`], the degree heuristic and random baseline in [`baselines`], and
//! the anchor degree/proportion/purity statistics in [`stats`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, p-values and
//! the command-line driver live in the `anchorradar` companion crate.
#![no_std]
// Range checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
mod error;
pub mod features;
pub mod hypergraph;
mod math;
pub mod metrics;
pub mod optim;
pub mod pipeline;
pub mod softmax;
pub mod split;
pub mod stage1;
pub mod stage2;
pub mod stats;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, HypergraphBuilder, NodeId};
pub use split::{SplitAssignment, SplitLabel, SplitRatios};
