//! Stage 1: a two-layer perceptron scoring every (node, hyperedge)
//! incidence, trained with a within-edge softmax cross-entropy.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::PairFeatureMatrix;
use crate::hypergraph::Hypergraph;
use crate::math::sqrt;
use crate::optim::Adam;
use crate::softmax::{log_softmax_at, softmax_into};

pub const DEFAULT_HIDDEN: usize = 64;
pub const DEFAULT_EPOCHS: usize = 100;

/// ReLU perceptron `s = W2·relu(W1ᵀx + b1) + b2`.
///
/// Parameters live in one flat vector laid out as
/// `[W1 (n_f × D_h, row-major) | b1 (D_h) | W2 (D_h) | b2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage1Model {
    n_features: usize,
    hidden: usize,
    params: Vec<f64>,
}

impl Stage1Model {
    pub fn parameter_count(n_features: usize, hidden: usize) -> usize {
        hidden * (n_features + 2) + 1
    }

    pub fn zeros(n_features: usize, hidden: usize) -> Self {
        Stage1Model {
            n_features,
            hidden,
            params: alloc::vec![0.0; Self::parameter_count(n_features, hidden)],
        }
    }

    /// Uniform `(-1/√fan_in, 1/√fan_in)` initialization per layer.
    pub fn init(n_features: usize, hidden: usize, seed: u64) -> Self {
        let mut model = Self::zeros(n_features, hidden);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first = n_features * hidden + hidden;
        let b_in = 1.0 / sqrt(n_features.max(1) as f64);
        let b_out = 1.0 / sqrt(hidden.max(1) as f64);
        for (i, p) in model.params.iter_mut().enumerate() {
            let b = if i < first { b_in } else { b_out };
            *p = rng.gen_range(-b..b);
        }
        model
    }

    /// Rebuilds a model from a flat parameter vector.
    pub fn from_params(n_features: usize, hidden: usize, params: Vec<f64>) -> Result<Self> {
        let expected = Self::parameter_count(n_features, hidden);
        if params.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: params.len(),
            });
        }
        Ok(Stage1Model {
            n_features,
            hidden,
            params,
        })
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn w1(&self) -> &[f64] {
        &self.params[..self.n_features * self.hidden]
    }

    pub fn b1(&self) -> &[f64] {
        let start = self.n_features * self.hidden;
        &self.params[start..start + self.hidden]
    }

    pub fn w2(&self) -> &[f64] {
        let start = (self.n_features + 1) * self.hidden;
        &self.params[start..start + self.hidden]
    }

    pub fn b2(&self) -> f64 {
        self.params[self.params.len() - 1]
    }

    /// Hidden pre-activations of one row, written into `z`.
    fn pre_activation(&self, row: &[f64], z: &mut [f64]) {
        z.copy_from_slice(self.b1());
        let w1 = self.w1();
        for (i, &x) in row.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let w = &w1[i * self.hidden..(i + 1) * self.hidden];
            for (zj, wj) in z.iter_mut().zip(w) {
                *zj += x * wj;
            }
        }
    }

    fn output(&self, z: &[f64]) -> f64 {
        let mut s = self.b2();
        for (zj, wj) in z.iter().zip(self.w2()) {
            if *zj > 0.0 {
                s += zj * wj;
            }
        }
        s
    }

    /// Score of a single feature row.
    pub fn score_row(&self, row: &[f64]) -> f64 {
        let mut z = alloc::vec![0.0; self.hidden];
        self.pre_activation(row, &mut z);
        self.output(&z)
    }

    /// Scores of every incidence row.
    pub fn forward(&self, x: &PairFeatureMatrix) -> Result<Vec<f64>> {
        self.check_width(x)?;
        let mut z = alloc::vec![0.0; self.hidden];
        Ok((0..x.n_rows())
            .map(|r| {
                self.pre_activation(x.row(r), &mut z);
                self.output(&z)
            })
            .collect())
    }

    fn check_width(&self, x: &PairFeatureMatrix) -> Result<()> {
        if x.n_cols() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                found: x.n_cols(),
            });
        }
        Ok(())
    }
}

fn anchor_positions(h: &Hypergraph, e: usize) -> impl Iterator<Item = usize> + '_ {
    let members = h.edge(e);
    h.anchors(e)
        .iter()
        .map(move |a| members.binary_search(a).expect("anchors are members"))
}

/// Cross-entropy of the anchors of every training hyperedge, summed.
///
/// `scores` holds one value per incidence row of `h`. With several anchors
/// per hyperedge each contributes its own term.
pub fn stage1_loss(scores: &[f64], h: &Hypergraph, train_edges: &[usize]) -> f64 {
    let mut loss = 0.0;
    for &e in train_edges {
        let s = &scores[h.incidence_range(e)];
        for i in anchor_positions(h, e) {
            loss -= log_softmax_at(s, i);
        }
    }
    loss
}

/// Loss and its gradient with respect to the flat parameters. Only rows
/// of training hyperedges are evaluated.
pub fn loss_and_gradient(
    model: &Stage1Model,
    x: &PairFeatureMatrix,
    h: &Hypergraph,
    train_edges: &[usize],
) -> Result<(f64, Vec<f64>)> {
    model.check_width(x)?;
    let n_f = model.n_features;
    let d_h = model.hidden;
    let mut grad = alloc::vec![0.0; model.params.len()];
    let (g_w1, rest) = grad.split_at_mut(n_f * d_h);
    let (g_b1, rest) = rest.split_at_mut(d_h);
    let (g_w2, g_b2) = rest.split_at_mut(d_h);
    let w2 = model.w2();

    let mut loss = 0.0;
    let mut hidden: Vec<f64> = Vec::new();
    let mut scores: Vec<f64> = Vec::new();
    let mut probs: Vec<f64> = Vec::new();
    let mut dz = alloc::vec![0.0; d_h];
    for &e in train_edges {
        let rows = x.edge_rows(e);
        let size = rows.len();
        hidden.clear();
        hidden.resize(size * d_h, 0.0);
        scores.clear();
        for (i, r) in rows.clone().enumerate() {
            let z = &mut hidden[i * d_h..(i + 1) * d_h];
            model.pre_activation(x.row(r), z);
            scores.push(model.output(z));
        }
        softmax_into(&scores, &mut probs);
        // dL/ds_u = |A|·σ_u − [u ∈ A]
        let n_anchors = h.anchors(e).len() as f64;
        let mut ds: Vec<f64> = probs.iter().map(|p| n_anchors * p).collect();
        for i in anchor_positions(h, e) {
            loss -= log_softmax_at(&scores, i);
            ds[i] -= 1.0;
        }
        for (i, r) in rows.enumerate() {
            let g = ds[i];
            if g == 0.0 {
                continue;
            }
            let z = &hidden[i * d_h..(i + 1) * d_h];
            g_b2[0] += g;
            for j in 0..d_h {
                if z[j] > 0.0 {
                    g_w2[j] += g * z[j];
                    dz[j] = g * w2[j];
                } else {
                    dz[j] = 0.0;
                }
                g_b1[j] += dz[j];
            }
            for (k, &xk) in x.row(r).iter().enumerate() {
                if xk == 0.0 {
                    continue;
                }
                let gw = &mut g_w1[k * d_h..(k + 1) * d_h];
                for (gwj, dzj) in gw.iter_mut().zip(&dz) {
                    *gwj += xk * dzj;
                }
            }
        }
    }
    Ok((loss, grad))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage1Config {
    pub lr: f64,
    pub epochs: usize,
    pub hidden: usize,
    pub seed: u64,
}

impl Default for Stage1Config {
    fn default() -> Self {
        Stage1Config {
            lr: 0.01,
            epochs: DEFAULT_EPOCHS,
            hidden: DEFAULT_HIDDEN,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stage1Output {
    pub model: Stage1Model,
    pub optimizer: Adam,
    /// Scores of every incidence under the final parameters.
    pub scores: Vec<f64>,
    /// Training loss before each update, then the loss of the final model.
    pub losses: Vec<f64>,
}

/// Full-batch Adam training for `cfg.epochs` epochs.
pub fn train_stage1(
    h: &Hypergraph,
    x: &PairFeatureMatrix,
    train_edges: &[usize],
    cfg: &Stage1Config,
) -> Result<Stage1Output> {
    if train_edges.is_empty() {
        return Err(Error::EmptyTrainSet);
    }
    if !(cfg.lr > 0.0) {
        return Err(Error::InvalidConfig(
            "stage-1 learning rate must be positive",
        ));
    }
    let mut model = Stage1Model::init(x.n_cols(), cfg.hidden, cfg.seed);
    let mut opt = Adam::new(model.params.len(), cfg.lr);
    let mut losses = Vec::with_capacity(cfg.epochs + 1);
    for epoch in 0..cfg.epochs {
        let (loss, grad) = loss_and_gradient(&model, x, h, train_edges)?;
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss {
                stage: "stage1",
                epoch,
            });
        }
        losses.push(loss);
        opt.update(&mut model.params, &grad);
    }
    let scores = model.forward(x)?;
    let final_loss = stage1_loss(&scores, h, train_edges);
    if !final_loss.is_finite() {
        return Err(Error::NonFiniteLoss {
            stage: "stage1",
            epoch: cfg.epochs,
        });
    }
    losses.push(final_loss);
    Ok(Stage1Output {
        model,
        optimizer: opt,
        scores,
        losses,
    })
}
