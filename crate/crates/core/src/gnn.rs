//! Graph neural network link predictors.
//!
//! Five encoders (GAT, GATv2, GCN, GCNII, GraphSAGE) produce node
//! embeddings; a link's probability is the sigmoid of the dot product of its
//! endpoint embeddings. Training is full-batch Adam on binary cross-entropy
//! over the labelled training pairs, with message passing restricted to the
//! training graph.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{dot, AdamState, Matrix, SparseMatrix, Tape, Var};
use crate::features::FeatureMatrix;
use crate::graph::Graph;
use crate::math::{exp, ln, sqrt};
use crate::metrics;
use crate::rng::{seeded, stream, ChaCha8Rng};
use crate::sampler::{LabeledPairSet, Pair};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Architecture {
    #[serde(rename = "gat")]
    Gat,
    #[serde(rename = "gatv2")]
    GatV2,
    #[serde(rename = "gcn")]
    Gcn,
    #[serde(rename = "gcnv2")]
    GcnV2,
    #[serde(rename = "graphsage")]
    GraphSage,
}

impl Architecture {
    /// Report order: GAT, GATv2, GCN, GCNv2, GraphSAGE.
    pub const ALL: [Architecture; 5] = [
        Architecture::Gat,
        Architecture::GatV2,
        Architecture::Gcn,
        Architecture::GcnV2,
        Architecture::GraphSage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Architecture::Gat => "gat",
            Architecture::GatV2 => "gatv2",
            Architecture::Gcn => "gcn",
            Architecture::GcnV2 => "gcnv2",
            Architecture::GraphSage => "graphsage",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Architecture::Gat => "GAT",
            Architecture::GatV2 => "GATv2",
            Architecture::Gcn => "GCN",
            Architecture::GcnV2 => "GCNv2",
            Architecture::GraphSage => "GraphSAGE",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Elu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EarlyStopping {
    pub patience: usize,
    pub validation_fraction: f64,
}

impl Default for EarlyStopping {
    fn default() -> Self {
        EarlyStopping {
            patience: 20,
            validation_fraction: 0.1,
        }
    }
}

/// Encoder hyperparameters.
///
/// `hidden` lists per-layer output widths; for the attention models the
/// width is per head and `heads` gives the head count of each layer. For
/// GCNII `hidden[0]` is the width of the initial linear map and
/// `propagation_layers` the number of GCNII convolutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub architecture: Architecture,
    pub hidden: Vec<usize>,
    #[serde(default)]
    pub heads: Vec<usize>,
    pub dropout: f64,
    pub activation: Activation,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub propagation_layers: usize,
    pub negative_slope: f64,
    pub lr: f64,
    pub max_epochs: usize,
    #[serde(default)]
    pub early_stopping: Option<EarlyStopping>,
    pub seed: u64,
}

impl ModelConfig {
    /// Published hyperparameters for each architecture.
    pub fn defaults_for(architecture: Architecture) -> Self {
        let base = ModelConfig {
            architecture,
            hidden: Vec::new(),
            heads: Vec::new(),
            dropout: 0.5,
            activation: Activation::Relu,
            alpha: 0.0,
            theta: 0.0,
            propagation_layers: 0,
            negative_slope: 0.2,
            lr: 0.01,
            max_epochs: 300,
            early_stopping: None,
            seed: 42,
        };
        match architecture {
            Architecture::Gat => ModelConfig {
                hidden: alloc::vec![64, 16],
                heads: alloc::vec![4, 1],
                dropout: 0.6,
                activation: Activation::Elu,
                ..base
            },
            Architecture::GatV2 => ModelConfig {
                hidden: alloc::vec![64, 48],
                heads: alloc::vec![4, 1],
                dropout: 0.6,
                activation: Activation::Elu,
                lr: 0.02,
                early_stopping: Some(EarlyStopping::default()),
                ..base
            },
            Architecture::Gcn | Architecture::GraphSage => ModelConfig {
                hidden: alloc::vec![512, 128, 32],
                ..base
            },
            Architecture::GcnV2 => ModelConfig {
                hidden: alloc::vec![48],
                alpha: 0.3,
                theta: 0.7,
                propagation_layers: 3,
                lr: 0.02,
                early_stopping: Some(EarlyStopping::default()),
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.hidden.is_empty() || self.hidden.contains(&0) {
            return bad(format!("{}: hidden widths must be positive", self.architecture.name()));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout {} outside [0, 1)", self.dropout));
        }
        if self.lr.is_nan() || self.lr <= 0.0 {
            return bad(format!("learning rate {} must be positive", self.lr));
        }
        match self.architecture {
            Architecture::Gat | Architecture::GatV2 => {
                if self.heads.len() != self.hidden.len() || self.heads.contains(&0) {
                    return bad("attention models need one positive head count per layer".into());
                }
            }
            Architecture::GcnV2
                if self.propagation_layers == 0
                    || !(0.0..=1.0).contains(&self.alpha)
                    || self.theta.is_nan()
                    || self.theta < 0.0 =>
            {
                return bad("GCNII needs propagation layers, alpha in [0, 1] and theta >= 0".into());
            }
            _ => {}
        }
        if let Some(es) = &self.early_stopping {
            if es.patience == 0 || !(es.validation_fraction > 0.0 && es.validation_fraction < 1.0) {
                return bad("early stopping needs patience > 0 and a validation fraction in (0, 1)".into());
            }
        }
        Ok(())
    }

    /// Width of the produced embeddings.
    pub fn embedding_dim(&self) -> usize {
        match self.architecture {
            Architecture::Gat | Architecture::GatV2 => {
                self.hidden[self.hidden.len() - 1] * self.heads[self.heads.len() - 1]
            }
            _ => self.hidden[self.hidden.len() - 1],
        }
    }
}

/// `D^{-1/2} (A + I) D^{-1/2}` with `D` the degree matrix of `A + I`.
pub fn normalized_adjacency(g: &Graph) -> SparseMatrix {
    let n = g.node_count();
    let inv_sqrt: Vec<f64> = (0..n).map(|u| 1.0 / sqrt(g.row(u).len() as f64 + 1.0)).collect();
    let rows = (0..n)
        .map(|u| {
            let mut row: Vec<(usize, f64)> = g.row(u).iter().map(|&v| (v, inv_sqrt[u] * inv_sqrt[v])).collect();
            row.push((u, inv_sqrt[u] * inv_sqrt[u]));
            row
        })
        .collect();
    SparseMatrix::from_rows(n, rows).expect("indices are graph nodes")
}

/// Row-normalised adjacency without self-loops; isolated rows stay empty.
pub fn mean_adjacency(g: &Graph) -> SparseMatrix {
    let rows = (0..g.node_count())
        .map(|u| {
            let d = g.row(u).len() as f64;
            g.row(u).iter().map(|&v| (v, 1.0 / d)).collect()
        })
        .collect();
    SparseMatrix::from_rows(g.node_count(), rows).expect("indices are graph nodes")
}

/// Message-passing structure derived from the training graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageGraph {
    n: usize,
    gcn: Arc<SparseMatrix>,
    mean: Arc<SparseMatrix>,
    /// Attention edges `source -> target`, self-loops included, grouped by target.
    source: Arc<[usize]>,
    target: Arc<[usize]>,
}

impl MessageGraph {
    pub fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let mut source = Vec::with_capacity(2 * g.edge_count() + n);
        let mut target = Vec::with_capacity(2 * g.edge_count() + n);
        for i in 0..n {
            let row = g.row(i);
            let split = row.partition_point(|&j| j < i);
            for &j in row[..split].iter().chain(core::iter::once(&i)).chain(&row[split..]) {
                source.push(j);
                target.push(i);
            }
        }
        MessageGraph {
            n,
            gcn: Arc::new(normalized_adjacency(g)),
            mean: Arc::new(mean_adjacency(g)),
            source: source.into(),
            target: target.into(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn normalized(&self) -> &SparseMatrix {
        &self.gcn
    }

    /// `(source, target)` attention edges.
    pub fn attention_edges(&self) -> (&[usize], &[usize]) {
        (&self.source, &self.target)
    }
}

fn glorot(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let limit = sqrt(6.0 / (rows + cols) as f64);
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-limit..limit))
}

/// Parameters of one encoder; the layout depends on the architecture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnnModel {
    pub config: ModelConfig,
    pub in_dim: usize,
    pub names: Vec<String>,
    pub params: Vec<Matrix>,
}

/// Parameters pushed onto a tape, consumed in declaration order.
struct ParamCursor<'a> {
    vars: &'a [Var],
    next: usize,
}

impl ParamCursor<'_> {
    fn take(&mut self) -> Var {
        let v = self.vars[self.next];
        self.next += 1;
        v
    }
}

/// Intermediate values a forward pass can expose for inspection.
#[derive(Debug, Default)]
struct Trace {
    attention: Vec<Var>,
}

impl GnnModel {
    /// Glorot-uniform weights and zero biases from the config seed.
    pub fn new(config: ModelConfig, in_dim: usize) -> Result<Self> {
        config.validate()?;
        if in_dim == 0 {
            return Err(Error::InvalidParameter("input feature dimension is zero".into()));
        }
        let mut rng = seeded(config.seed, stream::INIT);
        let mut names = Vec::new();
        let mut params = Vec::new();
        let mut add = |name: String, m: Matrix| {
            names.push(name);
            params.push(m);
        };
        match config.architecture {
            Architecture::Gcn | Architecture::GraphSage => {
                let mut d = in_dim;
                for (l, &w) in config.hidden.iter().enumerate() {
                    if config.architecture == Architecture::Gcn {
                        add(format!("conv{}.weight", l + 1), glorot(d, w, &mut rng));
                    } else {
                        add(format!("conv{}.weight_self", l + 1), glorot(d, w, &mut rng));
                        add(format!("conv{}.weight_neigh", l + 1), glorot(d, w, &mut rng));
                    }
                    add(format!("conv{}.bias", l + 1), Matrix::zeros(1, w));
                    d = w;
                }
            }
            Architecture::Gat | Architecture::GatV2 => {
                let mut d = in_dim;
                for (l, (&w, &h)) in config.hidden.iter().zip(&config.heads).enumerate() {
                    for k in 0..h {
                        let p = format!("conv{}.head{}", l + 1, k);
                        if config.architecture == Architecture::Gat {
                            add(format!("{p}.weight"), glorot(d, w, &mut rng));
                            add(format!("{p}.att_src"), glorot(w, 1, &mut rng));
                            add(format!("{p}.att_dst"), glorot(w, 1, &mut rng));
                        } else {
                            add(format!("{p}.weight_src"), glorot(d, w, &mut rng));
                            add(format!("{p}.weight_dst"), glorot(d, w, &mut rng));
                            add(format!("{p}.att"), glorot(w, 1, &mut rng));
                        }
                    }
                    add(format!("conv{}.bias", l + 1), Matrix::zeros(1, w * h));
                    d = w * h;
                }
            }
            Architecture::GcnV2 => {
                let w = config.hidden[0];
                add("lin.weight".into(), glorot(in_dim, w, &mut rng));
                add("lin.bias".into(), Matrix::zeros(1, w));
                for l in 0..config.propagation_layers {
                    add(format!("conv{}.weight", l + 1), glorot(w, w, &mut rng));
                }
            }
        }
        Ok(GnnModel {
            config,
            in_dim,
            names,
            params,
        })
    }

    pub fn parameter_count(&self) -> usize {
        self.params.iter().map(|p| p.rows() * p.cols()).sum()
    }

    fn check_input(&self, x: &Matrix, graph: &MessageGraph) -> Result<()> {
        if x.cols() != self.in_dim || x.rows() != graph.node_count() {
            return Err(Error::ShapeMismatch {
                op: "gnn input",
                left: x.shape(),
                right: (graph.node_count(), self.in_dim),
            });
        }
        Ok(())
    }

    fn activate(&self, tape: &mut Tape, h: Var) -> Var {
        match self.config.activation {
            Activation::Relu => tape.relu(h),
            Activation::Elu => tape.elu(h),
        }
    }

    fn forward_traced(
        &self,
        tape: &mut Tape,
        x: Var,
        graph: &MessageGraph,
        train: bool,
        rng: &mut ChaCha8Rng,
        trace: &mut Trace,
    ) -> Result<(Var, Vec<Var>)> {
        let vars: Vec<Var> = self.params.iter().map(|p| tape.param(p.clone())).collect();
        let mut cur = ParamCursor { vars: &vars, next: 0 };
        let cfg = &self.config;
        let layers = cfg.hidden.len();
        let z = match cfg.architecture {
            Architecture::Gcn => {
                let mut h = x;
                for l in 0..layers {
                    let (w, b) = (cur.take(), cur.take());
                    let hw = tape.matmul(h, w)?;
                    let prop = tape.spmm(&graph.gcn, hw)?;
                    h = tape.add_row(prop, b)?;
                    if l + 1 < layers {
                        h = self.activate(tape, h);
                        h = tape.dropout(h, cfg.dropout, train, rng)?;
                    }
                }
                h
            }
            Architecture::GraphSage => {
                let mut h = x;
                for l in 0..layers {
                    let (ws, wn, b) = (cur.take(), cur.take(), cur.take());
                    let own = tape.matmul(h, ws)?;
                    let mean = tape.spmm(&graph.mean, h)?;
                    let neigh = tape.matmul(mean, wn)?;
                    let sum = tape.add(own, neigh)?;
                    h = tape.add_row(sum, b)?;
                    if l + 1 < layers {
                        h = self.activate(tape, h);
                        h = tape.dropout(h, cfg.dropout, train, rng)?;
                    }
                }
                h
            }
            Architecture::Gat | Architecture::GatV2 => {
                let mut h = x;
                for l in 0..layers {
                    h = tape.dropout(h, cfg.dropout, train, rng)?;
                    h = self.attention_layer(tape, h, graph, cfg.heads[l], &mut cur, trace)?;
                    if l + 1 < layers {
                        h = self.activate(tape, h);
                    }
                }
                h
            }
            Architecture::GcnV2 => {
                let (w0, b0) = (cur.take(), cur.take());
                let lin = tape.matmul(x, w0)?;
                let h0 = tape.add_row(lin, b0)?;
                let mut h = h0;
                let alpha = cfg.alpha;
                for l in 1..=cfg.propagation_layers {
                    let w = cur.take();
                    let beta = gcn2_beta(cfg.theta, l);
                    let prop = tape.spmm(&graph.gcn, h)?;
                    let prop = tape.scale(prop, 1.0 - alpha);
                    let init = tape.scale(h0, alpha);
                    let support = tape.add(prop, init)?;
                    let identity = tape.scale(support, 1.0 - beta);
                    let mapped = tape.matmul(support, w)?;
                    let mapped = tape.scale(mapped, beta);
                    h = tape.add(identity, mapped)?;
                    if l < cfg.propagation_layers {
                        h = self.activate(tape, h);
                        h = tape.dropout(h, cfg.dropout, train, rng)?;
                    }
                }
                h
            }
        };
        debug_assert_eq!(cur.next, vars.len());
        Ok((z, vars))
    }

    fn attention_layer(
        &self,
        tape: &mut Tape,
        h: Var,
        graph: &MessageGraph,
        heads: usize,
        cur: &mut ParamCursor<'_>,
        trace: &mut Trace,
    ) -> Result<Var> {
        let n = graph.n;
        let slope = self.config.negative_slope;
        let mut outputs = Vec::with_capacity(heads);
        for _ in 0..heads {
            let (messages, scores) = if self.config.architecture == Architecture::Gat {
                let (w, a_src, a_dst) = (cur.take(), cur.take(), cur.take());
                let wh = tape.matmul(h, w)?;
                let s_src = tape.matmul(wh, a_src)?;
                let s_dst = tape.matmul(wh, a_dst)?;
                let e_src = tape.gather_rows(s_src, graph.source.clone())?;
                let e_dst = tape.gather_rows(s_dst, graph.target.clone())?;
                let e = tape.add(e_dst, e_src)?;
                (wh, tape.leaky_relu(e, slope))
            } else {
                let (w_src, w_dst, a) = (cur.take(), cur.take(), cur.take());
                let wl = tape.matmul(h, w_src)?;
                let wr = tape.matmul(h, w_dst)?;
                let from = tape.gather_rows(wl, graph.source.clone())?;
                let to = tape.gather_rows(wr, graph.target.clone())?;
                let pre = tape.add(to, from)?;
                let act = tape.leaky_relu(pre, slope);
                (wl, tape.matmul(act, a)?)
            };
            let alpha = tape.segment_softmax(scores, graph.target.clone(), n)?;
            trace.attention.push(alpha);
            let src = tape.gather_rows(messages, graph.source.clone())?;
            let weighted = tape.mul_col(src, alpha)?;
            outputs.push(tape.scatter_add_rows(weighted, graph.target.clone(), n)?);
        }
        let b = cur.take();
        let out = if outputs.len() == 1 {
            outputs[0]
        } else {
            tape.concat_cols(&outputs)?
        };
        tape.add_row(out, b)
    }

    /// Records the encoder on `tape`; returns the embeddings and the
    /// parameter leaves in `self.params` order.
    pub fn forward(
        &self,
        tape: &mut Tape,
        x: Var,
        graph: &MessageGraph,
        train: bool,
        rng: &mut ChaCha8Rng,
    ) -> Result<(Var, Vec<Var>)> {
        self.forward_traced(tape, x, graph, train, rng, &mut Trace::default())
    }

    /// Embeddings with dropout disabled.
    pub fn embed(&self, x: &Matrix, graph: &MessageGraph) -> Result<Matrix> {
        self.check_input(x, graph)?;
        let mut tape = Tape::new();
        let xv = tape.constant(x.clone());
        let (z, _) = self.forward(&mut tape, xv, graph, false, &mut seeded(0, 0))?;
        Ok(tape.value(z).clone())
    }

    /// Attention coefficients of every head, layer by layer, with dropout
    /// disabled. Each entry is a column aligned with
    /// [`MessageGraph::attention_edges`]. Empty for non-attention models.
    pub fn attention_coefficients(&self, x: &Matrix, graph: &MessageGraph) -> Result<Vec<Matrix>> {
        self.check_input(x, graph)?;
        let mut tape = Tape::new();
        let xv = tape.constant(x.clone());
        let mut trace = Trace::default();
        self.forward_traced(&mut tape, xv, graph, false, &mut seeded(0, 0), &mut trace)?;
        Ok(trace.attention.iter().map(|&a| tape.value(a).clone()).collect())
    }

    /// Mean BCE of the decoded `pairs` against `targets` and its gradient
    /// with respect to every parameter.
    pub fn loss_and_gradients(
        &self,
        x: &Matrix,
        graph: &MessageGraph,
        pairs: &[Pair],
        targets: &[f64],
        train: bool,
        rng: &mut ChaCha8Rng,
    ) -> Result<(f64, Vec<Matrix>)> {
        self.check_input(x, graph)?;
        let mut tape = Tape::new();
        let xv = tape.constant(x.clone());
        let (z, vars) = self.forward(&mut tape, xv, graph, train, rng)?;
        let p = decode_on_tape(&mut tape, z, pairs)?;
        let loss = tape.bce(p, targets.into())?;
        let value = tape.value(loss)[(0, 0)];
        let grads = tape.backward(loss)?;
        let grads = vars
            .iter()
            .zip(&self.params)
            .map(|(&v, p)| grads.get_or_zeros(v, p.shape()))
            .collect();
        Ok((value, grads))
    }

    /// Loss only, dropout disabled.
    pub fn loss(&self, x: &Matrix, graph: &MessageGraph, pairs: &[Pair], targets: &[f64]) -> Result<f64> {
        self.check_input(x, graph)?;
        let mut tape = Tape::new();
        let xv = tape.constant(x.clone());
        let (z, _) = self.forward(&mut tape, xv, graph, false, &mut seeded(0, 0))?;
        let p = decode_on_tape(&mut tape, z, pairs)?;
        let loss = tape.bce(p, targets.into())?;
        Ok(tape.value(loss)[(0, 0)])
    }
}

/// `ln(theta / layer + 1)`, the identity-mapping strength of GCNII layer `layer` (1-based).
pub fn gcn2_beta(theta: f64, layer: usize) -> f64 {
    ln(theta / layer as f64 + 1.0)
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

/// Link probability `sigmoid(z_u . z_v)`.
pub fn decode(z_u: &[f64], z_v: &[f64]) -> Result<f64> {
    if z_u.len() != z_v.len() {
        return Err(Error::LengthMismatch {
            expected: z_u.len(),
            found: z_v.len(),
        });
    }
    Ok(sigmoid(dot(z_u, z_v)))
}

/// Decoder probabilities for `pairs` as an `n_pairs x 1` tape value.
pub fn decode_on_tape(tape: &mut Tape, z: Var, pairs: &[Pair]) -> Result<Var> {
    let us: Arc<[usize]> = pairs.iter().map(|p| p.0).collect();
    let vs: Arc<[usize]> = pairs.iter().map(|p| p.1).collect();
    let zu = tape.gather_rows(z, us)?;
    let zv = tape.gather_rows(z, vs)?;
    let prod = tape.mul(zu, zv)?;
    let logits = tape.rowsum(prod);
    Ok(tape.sigmoid(logits))
}

/// Per-epoch training loss.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LossCurve {
    pub losses: Vec<f64>,
}

impl LossCurve {
    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    pub fn first(&self) -> Option<f64> {
        self.losses.first().copied()
    }

    pub fn last(&self) -> Option<f64> {
        self.losses.last().copied()
    }
}

/// A fitted encoder together with its training graph and cached embeddings.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub model: GnnModel,
    pub graph: MessageGraph,
    pub embeddings: Matrix,
    pub epochs_trained: usize,
    /// Epoch (0-based) whose parameters were kept when early stopping ran.
    pub best_epoch: Option<usize>,
}

impl TrainedModel {
    pub fn architecture(&self) -> Architecture {
        self.model.config.architecture
    }

    pub fn predict_links(&self, pairs: &[Pair]) -> Result<Vec<f64>> {
        let n = self.embeddings.rows();
        pairs
            .iter()
            .map(|&(u, v)| {
                for node in [u, v] {
                    if node >= n {
                        return Err(Error::NodeOutOfRange { index: node, n });
                    }
                }
                decode(self.embeddings.row(u), self.embeddings.row(v))
            })
            .collect()
    }
}

/// Full-batch training of `config` on the labelled `train` pairs with
/// message passing over `train_graph`.
pub fn train(
    config: &ModelConfig,
    features: &FeatureMatrix,
    train: &LabeledPairSet,
    train_graph: &Graph,
) -> Result<(TrainedModel, LossCurve)> {
    if features.n_rows() != train_graph.node_count() {
        return Err(Error::LengthMismatch {
            expected: train_graph.node_count(),
            found: features.n_rows(),
        });
    }
    if train.is_empty() {
        return Err(Error::InvalidParameter("no training pairs".into()));
    }
    let x = features.to_matrix();
    let graph = MessageGraph::new(train_graph);
    let mut model = GnnModel::new(config.clone(), x.cols())?;

    let (fit, validation) = match &config.early_stopping {
        Some(es) => {
            let (fit, val) = train.split_validation(es.validation_fraction, config.seed);
            let usable = val.positives().next().is_some() && val.negatives().next().is_some() && !fit.is_empty();
            if usable {
                (fit, Some((val, es.patience)))
            } else {
                (train.clone(), None)
            }
        }
        None => (train.clone(), None),
    };
    let targets = fit.targets();
    let mut adam = AdamState::new(&model.params);
    let mut rng = seeded(config.seed, stream::DROPOUT);
    let mut curve = LossCurve::default();
    let mut best: Option<(f64, usize, Vec<Matrix>)> = None;
    for epoch in 0..config.max_epochs {
        let (loss, grads) = model.loss_and_gradients(&x, &graph, &fit.pairs, &targets, true, &mut rng)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite("training loss"));
        }
        curve.losses.push(loss);
        adam.step(&mut model.params, &grads, config.lr)?;
        if let Some((val, patience)) = &validation {
            let z = model.embed(&x, &graph)?;
            let scores: Vec<f64> = val.pairs.iter().map(|&(u, v)| dot(z.row(u), z.row(v))).collect();
            let auc = metrics::auc(&val.labels, &scores)?;
            match &best {
                Some((best_auc, _, _)) if auc <= *best_auc => {}
                _ => best = Some((auc, epoch, model.params.clone())),
            }
            let best_epoch = best.as_ref().map_or(epoch, |b| b.1);
            if epoch - best_epoch >= *patience {
                break;
            }
        }
    }
    let best_epoch = best.map(|(_, epoch, params)| {
        model.params = params;
        epoch
    });
    let embeddings = model.embed(&x, &graph)?;
    Ok((
        TrainedModel {
            model,
            graph,
            embeddings,
            epochs_trained: curve.len(),
            best_epoch,
        },
        curve,
    ))
}
