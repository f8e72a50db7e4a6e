//! The experiment pipeline: ingest, split, features, communities, fit, evaluate.

use std::path::Path;
use std::time::Instant;

use linkpred_core::features::{
    augment_with_communities, identity_features, pair_feature_matrix, FeatureMatrix, FeaturePipeline, Provenance,
};
use linkpred_core::gnn::{self, TrainedModel};
use linkpred_core::heuristics::{self, HeuristicKind, HeuristicMethod};
use linkpred_core::linear::{fit_logreg, predict_logreg};
use linkpred_core::louvain::{louvain, modularity};
use linkpred_core::metrics::{auc, classification_metrics, confusion, ClassificationMetrics, ConfusionMatrix};
use linkpred_core::sampler::{build_datasets, positive_graph, LabeledPairSet};
use linkpred_core::sbm::{generate_sbm, synthetic_attributes};
use linkpred_core::{Graph, NodeTable, Partition};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, InputSpec, Method, NodeFeatures};
use crate::error::{HarnessError, Result, Stage, StageExt};
use crate::io;

/// Where a row's AUC scores came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreSource {
    /// Unthresholded heuristic index.
    RawScore,
    /// The 0/1 predictions themselves (random baseline).
    Labels,
    /// Model probability.
    Probability,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodResult {
    pub method: Method,
    pub label: String,
    /// `None` for methods reported as not implemented.
    pub metrics: Option<ClassificationMetrics>,
    pub auc: Option<f64>,
    pub auc_source: Option<ScoreSource>,
    /// AUC of the thresholded 0/1 predictions, for heuristics scored on raw values.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc_from_labels: Option<f64>,
    pub confusion: Option<ConfusionMatrix>,
    /// Per-epoch training loss for trained models.
    pub loss: Option<Vec<f64>>,
    pub threshold: Option<f64>,
    pub seconds: f64,
    /// Test-pair probabilities or scores, aligned with the shared test set.
    #[serde(skip)]
    pub scores: Vec<f64>,
    #[serde(skip)]
    pub model: Option<TrainedModel>,
}

impl MethodResult {
    pub fn implemented(&self) -> bool {
        self.metrics.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    pub base_dims: usize,
    pub augmented_dims: Option<usize>,
    pub numeric: usize,
    pub categorical: usize,
    pub text: usize,
    pub community: usize,
    pub identity: usize,
    /// True when the input carried no attributes and a constant column was used.
    pub constant_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunitySummary {
    pub k: usize,
    pub modularity: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub ingest: f64,
    pub split: f64,
    pub features: f64,
    pub louvain: f64,
    pub methods: f64,
}

/// Enough to replay the run and check that rows are comparable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub version: String,
    pub node_count: usize,
    pub edge_count: usize,
    pub train_graph_edges: usize,
    pub train_pairs: usize,
    pub test_pairs: usize,
    /// SHA-256 over the test set as `u,v,label` lines of external ids.
    pub test_set_sha256: String,
    pub features: Option<FeatureSummary>,
    pub communities: Option<CommunitySummary>,
    pub timings: Timings,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub rows: Vec<MethodResult>,
    pub manifest: RunManifest,
    pub table: NodeTable,
    pub train: LabeledPairSet,
    pub test: LabeledPairSet,
    pub partition: Option<Partition>,
    pub pipeline: Option<FeaturePipeline>,
}

struct Ingested {
    graph: Graph,
    table: NodeTable,
}

fn ingest(config: &ExperimentConfig) -> Result<Ingested> {
    match &config.input {
        InputSpec::Files { edges, nodes, schema } => {
            let (mut table, frozen) = match nodes {
                Some(nodes) => {
                    let schema_path = schema.clone().unwrap_or_else(|| io::default_schema_path(nodes));
                    let schema = io::read_schema(&schema_path)?;
                    (io::read_nodes(nodes, &schema)?, true)
                }
                None => (NodeTable::new(), false),
            };
            let pairs = io::read_edges(edges, &mut table, frozen)?;
            let graph = Graph::with_nodes(table.len(), &pairs).stage(Stage::Ingest)?;
            Ok(Ingested { graph, table })
        }
        InputSpec::Sbm {
            blocks,
            p_in,
            p_out,
            attributes,
            attribute_model,
        } => {
            let spec = config.block_spec(blocks, *p_in, *p_out);
            let (graph, truth) = generate_sbm(&spec).stage(Stage::Ingest)?;
            let table = if *attributes {
                synthetic_attributes(&truth, attribute_model, config.seed).stage(Stage::Ingest)?
            } else {
                NodeTable::from_ids((0..graph.node_count()).map(|i| format!("n{i}"))).stage(Stage::Ingest)?
            };
            Ok(Ingested { graph, table })
        }
    }
}

pub fn test_set_hash(table: &NodeTable, test: &LabeledPairSet) -> String {
    let mut h = Sha256::new();
    for ((u, v), y) in test.iter() {
        let line = format!(
            "{},{},{}\n",
            table.external_id(u).unwrap_or_default(),
            table.external_id(v).unwrap_or_default(),
            y
        );
        h.update(line.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Nodes that appear in at least one training pair, ascending.
fn train_nodes(n: usize, train: &LabeledPairSet) -> Vec<usize> {
    let mut seen = vec![false; n];
    for &(u, v) in &train.pairs {
        seen[u] = true;
        seen[v] = true;
    }
    (0..n).filter(|&i| seen[i]).collect()
}

fn build_features(
    config: &ExperimentConfig,
    table: &NodeTable,
    train: &LabeledPairSet,
) -> Result<(FeatureMatrix, Option<FeaturePipeline>)> {
    let n = table.len();
    if config.node_features == NodeFeatures::Identity {
        return Ok((identity_features(n), None));
    }
    let (x, pipeline) = if table.columns().is_empty() {
        let ones = FeatureMatrix::from_sparse_rows(1, (0..n).map(|_| Some((0, 1.0))), Provenance::Numeric)
            .stage(Stage::Feature)?;
        (ones, None)
    } else {
        let rows = train_nodes(n, train);
        let pipeline = FeaturePipeline::fit(table, Some(&rows), config.max_vocabulary).stage(Stage::Feature)?;
        (pipeline.transform(table).stage(Stage::Feature)?, Some(pipeline))
    };
    if config.node_features == NodeFeatures::AttributesAndIdentity {
        return Ok((x.hstack(&identity_features(n)).stage(Stage::Feature)?, pipeline));
    }
    Ok((x, pipeline))
}

fn summarize(x: &FeatureMatrix, augmented: Option<&FeatureMatrix>, fallback: bool) -> FeatureSummary {
    let count = |p: Provenance| x.provenance().iter().filter(|&&q| q == p).count();
    FeatureSummary {
        base_dims: x.n_cols(),
        augmented_dims: augmented.map(FeatureMatrix::n_cols),
        numeric: if fallback { 0 } else { count(Provenance::Numeric) },
        categorical: count(Provenance::Categorical),
        text: count(Provenance::Text),
        community: augmented.map_or(0, |a| a.n_cols() - x.n_cols()),
        identity: count(Provenance::Identity),
        constant_fallback: fallback,
    }
}

struct Context<'a> {
    config: &'a ExperimentConfig,
    train_graph: &'a Graph,
    train: &'a LabeledPairSet,
    test: &'a LabeledPairSet,
    x: Option<&'a FeatureMatrix>,
    x_aug: Option<&'a FeatureMatrix>,
}

fn evaluate(method: Method, ctx: &Context<'_>) -> Result<MethodResult> {
    let start = Instant::now();
    let tag = |e: &dyn std::fmt::Display, stage: Stage| HarnessError::new(stage, format!("{method}: {e}"));
    let test = ctx.test;
    let mut result = MethodResult {
        method,
        label: method.label(),
        metrics: None,
        auc: None,
        auc_source: None,
        auc_from_labels: None,
        confusion: None,
        loss: None,
        threshold: None,
        seconds: 0.0,
        scores: Vec::new(),
        model: None,
    };
    let (predictions, scores, source) = match method {
        Method::NotImplemented(_) => return Ok(result),
        Method::Heuristic(HeuristicKind::Random) => {
            let labels = heuristics::random_predict(&test.pairs, ctx.config.seed);
            let scores = labels.iter().map(|&y| f64::from(y)).collect();
            (labels, scores, ScoreSource::Labels)
        }
        Method::Heuristic(kind) => {
            let threshold = ctx.config.threshold(kind);
            result.threshold = Some(threshold);
            let scores = heuristics::scores(ctx.train_graph, kind, &test.pairs).map_err(|e| tag(&e, Stage::Eval))?;
            let labels = heuristics::predict(
                ctx.train_graph,
                HeuristicMethod::new(kind).with_threshold(threshold),
                &test.pairs,
                ctx.config.seed,
            )
            .map_err(|e| tag(&e, Stage::Eval))?;
            (labels, scores, ScoreSource::RawScore)
        }
        Method::LogReg { louvain } => {
            let x = if louvain { ctx.x_aug } else { ctx.x }.expect("features were built");
            let cfg = ctx.config.logreg_config(method);
            let train_x = pair_feature_matrix(x, &ctx.train.pairs).map_err(|e| tag(&e, Stage::Feature))?;
            let (model, losses) = fit_logreg(&train_x, &ctx.train.labels, &cfg).map_err(|e| tag(&e, Stage::Train))?;
            let test_x = pair_feature_matrix(x, &test.pairs).map_err(|e| tag(&e, Stage::Feature))?;
            let threshold = ctx.config.decision_threshold(method);
            result.threshold = Some(threshold);
            let (p, labels) = predict_logreg(&model, &test_x, threshold).map_err(|e| tag(&e, Stage::Eval))?;
            result.loss = Some(losses);
            (labels, p, ScoreSource::Probability)
        }
        Method::Gnn { louvain, .. } => {
            let x = if louvain { ctx.x_aug } else { ctx.x }.expect("features were built");
            let cfg = ctx.config.model_config(method).expect("gnn method");
            let (model, curve) = gnn::train(&cfg, x, ctx.train, ctx.train_graph).map_err(|e| tag(&e, Stage::Train))?;
            let p = model.predict_links(&test.pairs).map_err(|e| tag(&e, Stage::Eval))?;
            let threshold = ctx.config.decision_threshold(method);
            result.threshold = Some(threshold);
            let labels = p.iter().map(|&v| u8::from(v >= threshold)).collect();
            result.loss = Some(curve.losses);
            result.model = Some(model);
            (labels, p, ScoreSource::Probability)
        }
    };
    let cm = confusion(&test.labels, &predictions).map_err(|e| tag(&e, Stage::Eval))?;
    result.metrics = Some(classification_metrics(&cm));
    result.confusion = Some(cm);
    result.auc = Some(auc(&test.labels, &scores).map_err(|e| tag(&e, Stage::Eval))?);
    result.auc_source = Some(source);
    if let (Method::Heuristic(_), ScoreSource::RawScore) = (method, source) {
        let as_scores: Vec<f64> = predictions.iter().map(|&y| f64::from(y)).collect();
        result.auc_from_labels = Some(auc(&test.labels, &as_scores).map_err(|e| tag(&e, Stage::Eval))?);
    }
    result.scores = scores;
    result.seconds = start.elapsed().as_secs_f64();
    Ok(result)
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Thread cap from `LINKPRED_THREADS`; `None` leaves the choice to rayon.
pub fn thread_cap() -> Option<usize> {
    std::env::var("LINKPRED_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs every configured method on one shared split.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut timings = Timings::default();

    let t = Instant::now();
    let Ingested { graph, table } = ingest(config)?;
    timings.ingest = secs(t);

    let t = Instant::now();
    let (train, test) = match &config.split_file {
        Some(path) => {
            let (train, test) = io::read_split(path, &table)?;
            for set in [&train, &test] {
                if !set.check_invariants(&graph) {
                    return Err(HarnessError::new(
                        Stage::Split,
                        format!(
                            "{}: split is unbalanced, duplicated or labels an edge as a non-link",
                            path.display()
                        ),
                    ));
                }
            }
            (train, test)
        }
        None => build_datasets(&graph, config.test_fraction, config.seed).stage(Stage::Split)?,
    };
    let train_graph = positive_graph(graph.node_count(), &train).stage(Stage::Split)?;
    timings.split = secs(t);

    let t = Instant::now();
    let (x, pipeline) = if config.needs_features() {
        let (x, pipeline) = build_features(config, &table, &train)?;
        (Some(x), pipeline)
    } else {
        (None, None)
    };
    timings.features = secs(t);

    let t = Instant::now();
    let (partition, x_aug) = if config.needs_louvain() {
        let p = louvain(&train_graph, config.louvain_min_gain, config.seed).stage(Stage::Feature)?;
        let aug = match &x {
            Some(x) => Some(augment_with_communities(x, &p).stage(Stage::Feature)?),
            None => None,
        };
        (Some(p), aug)
    } else {
        (None, None)
    };
    timings.louvain = secs(t);

    let mut methods = config.methods.clone();
    methods.sort_by_key(|m| m.rank());
    let ctx = Context {
        config,
        train_graph: &train_graph,
        train: &train,
        test: &test,
        x: x.as_ref(),
        x_aug: x_aug.as_ref(),
    };
    let t = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().stage(Stage::Config)?;
    let rows = pool.install(|| {
        methods
            .par_iter()
            .map(|&m| evaluate(m, &ctx))
            .collect::<Result<Vec<_>>>()
    })?;
    timings.methods = secs(t);

    let communities = partition.as_ref().map(|p| CommunitySummary {
        k: p.community_count(),
        modularity: modularity(&train_graph, p).unwrap_or(0.0),
    });
    let manifest = RunManifest {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        node_count: graph.node_count(),
        edge_count: graph.edge_count(),
        train_graph_edges: train_graph.edge_count(),
        train_pairs: train.len(),
        test_pairs: test.len(),
        test_set_sha256: test_set_hash(&table, &test),
        features: x.as_ref().map(|x| {
            let fallback = pipeline.is_none() && config.node_features != NodeFeatures::Identity;
            summarize(x, x_aug.as_ref(), fallback)
        }),
        communities,
        timings,
    };
    Ok(ExperimentReport {
        rows,
        manifest,
        table,
        train,
        test,
        partition,
        pipeline,
    })
}

/// Loads a config file and runs it, optionally replacing the seed.
pub fn run_config_file(path: &Path, seed: Option<u64>) -> Result<ExperimentReport> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    run_experiment(&config)
}
