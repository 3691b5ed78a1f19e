use alloc::vec::Vec;

use crate::hypergraph::{Hypergraph, NodeId};

/// Weighted clique expansion: `w(u, v)` is the number of hyperedges (with
/// multiplicity) containing both `u` and `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueExpansion {
    neighbors: Vec<Vec<(NodeId, f64)>>,
}

impl CliqueExpansion {
    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Neighbors of `v` sorted by index, with weights.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.neighbors[v as usize]
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> f64 {
        let row = &self.neighbors[u as usize];
        match row.binary_search_by_key(&v, |&(n, _)| n) {
            Ok(i) => row[i].1,
            Err(_) => 0.0,
        }
    }

    /// Number of undirected weighted edges.
    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Weighted degree of `v`.
    pub fn strength(&self, v: NodeId) -> f64 {
        self.neighbors[v as usize].iter().map(|&(_, w)| w).sum()
    }
}

pub fn clique_expansion(h: &Hypergraph) -> CliqueExpansion {
    let n = h.node_count();
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    for members in h.edges() {
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
    }
    pairs.sort_unstable();
    let mut neighbors: Vec<Vec<(NodeId, f64)>> = alloc::vec![Vec::new(); n];
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i;
        while j < pairs.len() && pairs[j] == pairs[i] {
            j += 1;
        }
        let (u, v) = pairs[i];
        neighbors[u as usize].push((v, (j - i) as f64));
        i = j;
    }
    CliqueExpansion { neighbors }
}
