//! Reference predictors: the degree heuristic and uniform random guessing.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::split::{SplitAssignment, SplitLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeDirection {
    Max,
    Min,
}

impl DegreeDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            DegreeDirection::Max => "max",
            DegreeDirection::Min => "min",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeHeuristic {
    pub direction: DegreeDirection,
    pub train_accuracy_max: f64,
    pub train_accuracy_min: f64,
    pub test_accuracy: f64,
}

/// Member with the highest (or lowest) full degree; ties go to the lower
/// node index.
pub fn degree_pick(members: &[NodeId], degrees: &[u32], direction: DegreeDirection) -> NodeId {
    let mut best = members[0];
    for &v in &members[1..] {
        let (dv, db) = (degrees[v as usize], degrees[best as usize]);
        let better = match direction {
            DegreeDirection::Max => dv > db,
            DegreeDirection::Min => dv < db,
        };
        if better || (dv == db && v < best) {
            best = v;
        }
    }
    best
}

fn hit_rate(h: &Hypergraph, edges: &[usize], degrees: &[u32], dir: DegreeDirection) -> f64 {
    if edges.is_empty() {
        return 0.0;
    }
    let hits = edges
        .iter()
        .filter(|&&e| h.anchors(e).contains(&degree_pick(h.edge(e), degrees, dir)))
        .count();
    hits as f64 / edges.len() as f64
}

/// Chooses max- or min-degree prediction by training accuracy (ties favor
/// max) and reports its test accuracy.
pub fn degree_heuristic(h: &Hypergraph, splits: &SplitAssignment) -> Result<DegreeHeuristic> {
    let train = splits.edges_with(h, SplitLabel::Train);
    if train.is_empty() {
        return Err(Error::EmptyTrainSet);
    }
    let test = splits.edges_with(h, SplitLabel::Test);
    let degrees = h.degrees();
    let train_accuracy_max = hit_rate(h, &train, &degrees, DegreeDirection::Max);
    let train_accuracy_min = hit_rate(h, &train, &degrees, DegreeDirection::Min);
    let direction = if train_accuracy_min > train_accuracy_max {
        DegreeDirection::Min
    } else {
        DegreeDirection::Max
    };
    Ok(DegreeHeuristic {
        direction,
        train_accuracy_max,
        train_accuracy_min,
        test_accuracy: hit_rate(h, &test, &degrees, direction),
    })
}

/// Expected accuracy of uniform guessing: mean of `|A(e)|/|e|`.
pub fn random_baseline(h: &Hypergraph, edges: &[usize]) -> f64 {
    if edges.is_empty() {
        return 0.0;
    }
    let total: f64 = edges
        .iter()
        .map(|&e| h.anchors(e).len() as f64 / h.edge(e).len() as f64)
        .sum();
    total / edges.len() as f64
}

/// Eligible (size ≥ 2) edge positions in order.
pub fn eligible_edges(h: &Hypergraph) -> Vec<usize> {
    (0..h.edge_count())
        .filter(|&e| h.edge(e).len() >= 2)
        .collect()
}
