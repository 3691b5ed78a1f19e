use alloc::vec::Vec;
use core::ops::Range;

use super::centrality::{raw_node_features, RawNodeFeatures};
use super::normalize::{min_max, rank_normalize};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::math::mean_std;

/// Global columns per node: 6 per raw centrality.
pub const GLOBAL_WIDTH: usize = 24;
/// Local columns per incidence: 2 per raw centrality plus the edge size.
pub const LOCAL_WIDTH: usize = 9;
pub const BASE_WIDTH: usize = GLOBAL_WIDTH + LOCAL_WIDTH;

/// Optional per-node columns appended after the 33 topological ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtraColumns {
    width: usize,
    values: Vec<f64>,
    filled: Vec<bool>,
}

impl ExtraColumns {
    pub fn new(node_count: usize, width: usize) -> Self {
        ExtraColumns {
            width,
            values: alloc::vec![0.0; node_count * width],
            filled: alloc::vec![false; node_count],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn set(&mut self, node: NodeId, values: &[f64]) -> Result<()> {
        if values.len() != self.width {
            return Err(Error::DimensionMismatch {
                expected: self.width,
                found: values.len(),
            });
        }
        let v = node as usize;
        if v >= self.filled.len() {
            return Err(Error::NodeOutOfRange {
                node,
                nodes: self.filled.len(),
            });
        }
        self.values[v * self.width..(v + 1) * self.width].copy_from_slice(values);
        self.filled[v] = true;
        Ok(())
    }

    pub fn get(&self, node: NodeId) -> &[f64] {
        let v = node as usize;
        &self.values[v * self.width..(v + 1) * self.width]
    }
}

/// Dense row-major matrix with one row per (hyperedge, member) incidence,
/// in edge order then sorted-member order.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFeatureMatrix {
    data: Vec<f64>,
    n_cols: usize,
    edge_offsets: Vec<usize>,
}

impl PairFeatureMatrix {
    /// Wraps raw row-major data laid out along `h`'s incidences.
    pub fn from_rows(h: &Hypergraph, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        let expected = h.incidence_count() * n_cols;
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: data.len(),
            });
        }
        let mut edge_offsets: Vec<usize> = (0..h.edge_count())
            .map(|e| h.incidence_range(e).start)
            .collect();
        edge_offsets.push(h.incidence_count());
        Ok(PairFeatureMatrix {
            data,
            n_cols,
            edge_offsets,
        })
    }

    pub fn n_rows(&self) -> usize {
        *self.edge_offsets.last().unwrap_or(&0)
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn edge_rows(&self, e: usize) -> Range<usize> {
        self.edge_offsets[e]..self.edge_offsets[e + 1]
    }

    /// Row of node `v` inside hyperedge `e`.
    pub fn row_of(&self, h: &Hypergraph, e: usize, v: NodeId) -> Option<usize> {
        h.edge(e)
            .binary_search(&v)
            .ok()
            .map(|i| self.edge_offsets[e] + i)
    }

    /// Zeroes the local columns (24..33) of every row.
    pub fn zero_local_columns(&mut self) {
        let n_cols = self.n_cols;
        for row in self.data.chunks_mut(n_cols) {
            row[GLOBAL_WIDTH..BASE_WIDTH]
                .iter_mut()
                .for_each(|x| *x = 0.0);
        }
    }
}

/// Local block of every member of one hyperedge: for each raw centrality
/// the within-edge min-max and rank normalizations, then `|e|`.
pub fn local_feature_block(raw: &RawNodeFeatures, members: &[NodeId]) -> Vec<[f64; LOCAL_WIDTH]> {
    let mut out = alloc::vec![[0.0; LOCAL_WIDTH]; members.len()];
    let mut values = Vec::with_capacity(members.len());
    for (f, column) in raw.columns().iter().enumerate() {
        values.clear();
        values.extend(members.iter().map(|&v| column[v as usize]));
        let mm = min_max(&values);
        let rk = rank_normalize(&values);
        for i in 0..members.len() {
            out[i][2 * f] = mm[i];
            out[i][2 * f + 1] = rk[i];
        }
    }
    let size = members.len() as f64;
    for row in &mut out {
        row[LOCAL_WIDTH - 1] = size;
    }
    out
}

fn local_blocks(raw: &RawNodeFeatures, h: &Hypergraph) -> Vec<Vec<[f64; LOCAL_WIDTH]>> {
    h.edges()
        .iter()
        .map(|members| local_feature_block(raw, members))
        .collect()
}

fn global_from_locals(
    raw: &RawNodeFeatures,
    h: &Hypergraph,
    locals: &[Vec<[f64; LOCAL_WIDTH]>],
) -> Vec<[f64; GLOBAL_WIDTH]> {
    let n = h.node_count();
    let mut out = alloc::vec![[0.0; GLOBAL_WIDTH]; n];
    for (f, column) in raw.columns().iter().enumerate() {
        let mm = min_max(column);
        let rk = rank_normalize(column);
        for v in 0..n {
            out[v][6 * f] = mm[v];
            out[v][6 * f + 1] = rk[v];
        }
    }
    // Per-node samples of the local min-max and rank values.
    let mut samples: Vec<Vec<[f64; LOCAL_WIDTH]>> = alloc::vec![Vec::new(); n];
    for (members, block) in h.edges().iter().zip(locals) {
        for (&v, row) in members.iter().zip(block) {
            samples[v as usize].push(*row);
        }
    }
    let mut buf = Vec::new();
    for (v, rows) in samples.iter().enumerate() {
        for f in 0..4 {
            for (slot, local_col) in [(2, 2 * f), (4, 2 * f + 1)] {
                buf.clear();
                buf.extend(rows.iter().map(|r| r[local_col]));
                let (mean, std) = mean_std(&buf);
                out[v][6 * f + slot] = mean;
                out[v][6 * f + slot + 1] = std;
            }
        }
    }
    out
}

/// Global block of every node: for each raw centrality, global min-max,
/// global rank, and mean/std of its local min-max and local rank values
/// over the hyperedges containing it.
pub fn global_feature_block(raw: &RawNodeFeatures, h: &Hypergraph) -> Vec<[f64; GLOBAL_WIDTH]> {
    let locals = local_blocks(raw, h);
    global_from_locals(raw, h, &locals)
}

/// `[global(24) | local(9) | extra(k)]` for every incidence of `h`.
pub fn feature_matrix(h: &Hypergraph, extra: Option<&ExtraColumns>) -> Result<PairFeatureMatrix> {
    if let Some(x) = extra {
        if x.filled.len() != h.node_count() {
            return Err(Error::DimensionMismatch {
                expected: h.node_count(),
                found: x.filled.len(),
            });
        }
        if let Some(v) = x.filled.iter().position(|f| !f) {
            return Err(Error::MissingExtraFeature { node: v as NodeId });
        }
    }
    let raw = raw_node_features(h);
    let locals = local_blocks(&raw, h);
    let global = global_from_locals(&raw, h, &locals);
    let n_cols = BASE_WIDTH + extra.map_or(0, ExtraColumns::width);
    let mut data = Vec::with_capacity(h.incidence_count() * n_cols);
    for (members, block) in h.edges().iter().zip(&locals) {
        for (&v, local) in members.iter().zip(block) {
            data.extend_from_slice(&global[v as usize]);
            data.extend_from_slice(local);
            if let Some(x) = extra {
                data.extend_from_slice(x.get(v));
            }
        }
    }
    PairFeatureMatrix::from_rows(h, n_cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn raw_with_degrees(d: &[f64]) -> RawNodeFeatures {
        RawNodeFeatures {
            degree: d.to_vec(),
            eigenvector: vec![0.0; d.len()],
            pagerank: vec![0.25; d.len()],
            coreness: vec![1.0; d.len()],
        }
    }

    #[test]
    fn local_two_point_case() {
        let raw = raw_with_degrees(&[5.0, 1.0]);
        let block = local_feature_block(&raw, &[0, 1]);
        assert_eq!(block[0][0], 1.0);
        assert_eq!(block[1][0], 0.0);
        assert_eq!(block[0][1], 0.0);
        assert_eq!(block[1][1], 1.0);
        assert_eq!(block[0][8], 2.0);
        // equal PageRank ties
        assert_eq!(block[0][4], 0.5);
        assert_eq!(block[1][5], 0.5);
    }

    #[test]
    fn local_singleton_is_half() {
        let raw = raw_with_degrees(&[3.0]);
        let block = local_feature_block(&raw, &[0]);
        assert!(block[0][..8].iter().all(|&x| x == 0.5));
        assert_eq!(block[0][8], 1.0);
    }

    #[test]
    fn global_block_degree_columns() {
        let h = Hypergraph::from_edges(3, vec![vec![0, 1, 2]], vec![vec![0]]).unwrap();
        let raw = raw_with_degrees(&[5.0, 3.0, 1.0]);
        let g = global_feature_block(&raw, &h);
        assert_eq!([g[0][0], g[1][0], g[2][0]], [1.0, 0.5, 0.0]);
        assert_eq!([g[0][1], g[1][1], g[2][1]], [0.0, 0.5, 1.0]);
        // one hyperedge per node: aggregation std is 0
        for v in 0..3 {
            assert_eq!(g[v][3], 0.0);
            assert_eq!(g[v][5], 0.0);
        }
    }

    #[test]
    fn matrix_shape_and_duplicates() {
        let h = Hypergraph::from_edges(2, vec![vec![0, 1], vec![0, 1]], vec![vec![0], vec![1]])
            .unwrap();
        let x = feature_matrix(&h, None).unwrap();
        assert_eq!(x.n_rows(), 4);
        assert_eq!(x.n_cols(), 33);
        assert_eq!(x.row(0), x.row(2));
        assert_eq!(x.row(1), x.row(3));
    }

    #[test]
    fn extra_columns_appended_and_required() {
        let h = Hypergraph::from_edges(2, vec![vec![0, 1]], vec![vec![0]]).unwrap();
        let mut extra = ExtraColumns::new(2, 4);
        extra.set(0, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(
            feature_matrix(&h, Some(&extra)).unwrap_err(),
            Error::MissingExtraFeature { node: 1 }
        );
        extra.set(1, &[5.0, 6.0, 7.0, 8.0]).unwrap();
        let x = feature_matrix(&h, Some(&extra)).unwrap();
        assert_eq!(x.n_cols(), 37);
        assert_eq!(&x.row(1)[33..], &[5.0, 6.0, 7.0, 8.0]);
    }
}
