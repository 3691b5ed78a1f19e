//! Test fixtures shared by the integration targets.
#![allow(dead_code)]

use std::path::Path;

use anchorradar::formats::write_dataset;
use anchorradar_core::{Hypergraph, NodeId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Planted-strength generator.
///
/// Node `v` has popularity `(v+1)^-gamma` and latent strength
/// `ln popularity`. Each hyperedge draws a size in 2..=6, samples members
/// without replacement in proportion to popularity, and names the member
/// with the largest `latent + noise * N(0,1)` as its anchor.
#[derive(Debug, Clone, Copy)]
pub struct Planted {
    pub nodes: usize,
    pub edges: usize,
    pub gamma: f64,
    pub noise: f64,
    pub seed: u64,
}

impl Planted {
    pub fn generate(&self) -> Hypergraph {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let latent: Vec<f64> = (0..self.nodes)
            .map(|v| -self.gamma * ((v + 1) as f64).ln())
            .collect();
        let ids: Vec<usize> = (0..self.nodes).collect();
        let mut members = Vec::with_capacity(self.edges);
        let mut anchors = Vec::with_capacity(self.edges);
        for _ in 0..self.edges {
            let size = rng.gen_range(2..=6);
            let chosen: Vec<usize> = ids
                .choose_multiple_weighted(&mut rng, size, |&v| latent[v].exp())
                .expect("positive weights")
                .copied()
                .collect();
            let mut best = chosen[0];
            let mut best_score = f64::NEG_INFINITY;
            for &v in &chosen {
                let eps: f64 = rng.sample(StandardNormal);
                let score = latent[v] + self.noise * eps;
                if score > best_score {
                    best = v;
                    best_score = score;
                }
            }
            let mut m: Vec<NodeId> = chosen.iter().map(|&v| v as NodeId).collect();
            m.sort_unstable();
            members.push(m);
            anchors.push(vec![best as NodeId]);
        }
        Hypergraph::from_edges(self.nodes, members, anchors).expect("valid planted hypergraph")
    }

    /// Fraction of hyperedges whose anchor differs from the noiseless one.
    pub fn flipped_fraction(&self, h: &Hypergraph) -> f64 {
        let flipped = (0..h.edge_count())
            .filter(|&e| h.anchors(e)[0] != *h.edge(e).iter().min().unwrap())
            .count();
        flipped as f64 / h.edge_count() as f64
    }
}

pub fn write_dataset_file(h: &Hypergraph, path: &Path) {
    let f = std::fs::File::create(path).unwrap();
    write_dataset(h, std::io::BufWriter::new(f)).unwrap();
}

/// Small hypergraph with one anchor per edge, drawn from `rng`.
pub fn random_hypergraph(
    rng: &mut impl Rng,
    nodes: usize,
    edges: usize,
    max_size: usize,
) -> Hypergraph {
    let ids: Vec<NodeId> = (0..nodes as NodeId).collect();
    let mut members = Vec::with_capacity(edges);
    let mut anchors = Vec::with_capacity(edges);
    for _ in 0..edges {
        let size = rng.gen_range(1..=max_size.min(nodes));
        let mut m: Vec<NodeId> = ids.choose_multiple(rng, size).copied().collect();
        m.sort_unstable();
        anchors.push(vec![*m.choose(rng).unwrap()]);
        members.push(m);
    }
    Hypergraph::from_edges(nodes, members, anchors).unwrap()
}
