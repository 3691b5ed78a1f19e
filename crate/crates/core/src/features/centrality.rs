use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::expansion::{clique_expansion, CliqueExpansion};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::math::sqrt;

pub const EIGEN_TOL: f64 = 1e-8;
pub const EIGEN_MAX_ITER: usize = 1000;
pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_TOL: f64 = 1e-10;
pub const PAGERANK_MAX_ITER: usize = 200;

/// The four raw centralities of every node.
#[derive(Debug, Clone, PartialEq)]
pub struct RawNodeFeatures {
    pub degree: Vec<f64>,
    pub eigenvector: Vec<f64>,
    pub pagerank: Vec<f64>,
    pub coreness: Vec<f64>,
}

impl RawNodeFeatures {
    /// Columns in feature order: degree, eigenvector, PageRank, coreness.
    pub fn columns(&self) -> [&[f64]; 4] {
        [
            &self.degree,
            &self.eigenvector,
            &self.pagerank,
            &self.coreness,
        ]
    }

    pub fn node_count(&self) -> usize {
        self.degree.len()
    }
}

pub fn raw_node_features(h: &Hypergraph) -> RawNodeFeatures {
    let g = clique_expansion(h);
    RawNodeFeatures {
        degree: h.degrees().into_iter().map(f64::from).collect(),
        eigenvector: eigenvector_centrality(&g, EIGEN_TOL, EIGEN_MAX_ITER),
        pagerank: pagerank(&g, PAGERANK_DAMPING, PAGERANK_TOL, PAGERANK_MAX_ITER),
        coreness: coreness(h).into_iter().map(f64::from).collect(),
    }
}

fn l2_normalize(x: &mut [f64]) {
    let norm = sqrt(x.iter().map(|v| v * v).sum::<f64>());
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Unit-norm, non-negative dominant eigenvector of the expansion adjacency.
///
/// Iterates with `A + I`: same eigenvectors, but the Perron root is strictly
/// dominant even on bipartite components. Nodes without neighbors get 0.
pub fn eigenvector_centrality(g: &CliqueExpansion, tol: f64, max_iter: usize) -> Vec<f64> {
    let n = g.node_count();
    let mut x: Vec<f64> = (0..n as NodeId)
        .map(|v| if g.neighbors(v).is_empty() { 0.0 } else { 1.0 })
        .collect();
    if x.iter().all(|&v| v == 0.0) {
        return x;
    }
    l2_normalize(&mut x);
    let mut next = alloc::vec![0.0; n];
    for _ in 0..max_iter {
        for v in 0..n {
            let s: f64 = g
                .neighbors(v as NodeId)
                .iter()
                .map(|&(u, w)| w * x[u as usize])
                .sum();
            next[v] = s + x[v];
        }
        l2_normalize(&mut next);
        let diff = sqrt(
            next.iter()
                .zip(&x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>(),
        );
        core::mem::swap(&mut x, &mut next);
        if diff < tol {
            break;
        }
    }
    x
}

/// PageRank on the weighted expansion with uniform teleport and uniform
/// redistribution of dangling mass. An expansion without edges yields zeros.
pub fn pagerank(g: &CliqueExpansion, damping: f64, tol: f64, max_iter: usize) -> Vec<f64> {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return alloc::vec![0.0; n];
    }
    let strength: Vec<f64> = (0..n as NodeId).map(|v| g.strength(v)).collect();
    let nf = n as f64;
    let mut x = alloc::vec![1.0 / nf; n];
    let mut next = alloc::vec![0.0; n];
    for _ in 0..max_iter {
        let dangling: f64 = (0..n).filter(|&v| strength[v] == 0.0).map(|v| x[v]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        for v in 0..n {
            let inflow: f64 = g
                .neighbors(v as NodeId)
                .iter()
                .map(|&(u, w)| x[u as usize] * w / strength[u as usize])
                .sum();
            next[v] = base + damping * inflow;
        }
        let diff: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        core::mem::swap(&mut x, &mut next);
        if diff < tol {
            break;
        }
    }
    x
}

/// Hypergraph coreness by peeling.
///
/// A hyperedge supports a surviving node while it still has at least two
/// surviving members; removing a node shrinks its hyperedges. The coreness
/// of `v` is the largest `k` such that `v` lies in the maximal node set where
/// every node keeps at least `k` supporting hyperedges. Nodes whose edges
/// are all singletons have coreness 0.
pub fn coreness(h: &Hypergraph) -> Vec<u32> {
    let n = h.node_count();
    let incident = h.incident_edges();
    let mut alive_size: Vec<usize> = h.edges().iter().map(Vec::len).collect();
    let mut count: Vec<u32> = (0..n)
        .map(|v| incident[v].iter().filter(|&&e| alive_size[e] >= 2).count() as u32)
        .collect();
    let mut removed = alloc::vec![false; n];
    let mut core = alloc::vec![0u32; n];
    let mut heap: BinaryHeap<Reverse<(u32, NodeId)>> = (0..n as NodeId)
        .map(|v| Reverse((count[v as usize], v)))
        .collect();
    let mut level = 0u32;
    while let Some(Reverse((c, v))) = heap.pop() {
        let vi = v as usize;
        if removed[vi] || c != count[vi] {
            continue;
        }
        level = level.max(c);
        core[vi] = level;
        removed[vi] = true;
        for &e in &incident[vi] {
            alive_size[e] -= 1;
            if alive_size[e] == 1 {
                // The edge stops supporting its last survivor.
                let last = h.edge(e).iter().copied().find(|&u| !removed[u as usize]);
                if let Some(u) = last {
                    count[u as usize] -= 1;
                    heap.push(Reverse((count[u as usize], u)));
                }
            }
        }
    }
    core
}
