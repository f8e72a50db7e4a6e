//! Experiment configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use linkpred_core::gnn::{Architecture, ModelConfig};
use linkpred_core::heuristics::HeuristicKind;
use linkpred_core::linear::LogRegConfig;
use linkpred_core::louvain::DEFAULT_MIN_GAIN;
use linkpred_core::sbm::{AttributeModel, BlockModelSpec};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HarnessError, Result, Stage};

pub const DEFAULT_SEED: u64 = 42;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_test_fraction() -> f64 {
    0.2
}

fn default_min_gain() -> f64 {
    DEFAULT_MIN_GAIN
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InputSpec {
    /// Edge CSV plus an optional node attribute TSV. Relative paths are
    /// resolved against the config file's directory.
    Files {
        edges: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        schema: Option<PathBuf>,
    },
    Sbm {
        blocks: Vec<usize>,
        p_in: f64,
        p_out: f64,
        /// Generate block-correlated node attributes.
        #[serde(default = "default_true")]
        attributes: bool,
        #[serde(default)]
        attribute_model: AttributeModel,
    },
}

/// Node feature source for the trained models.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeFeatures {
    /// The fitted attribute pipeline; a constant column when there are no attributes.
    #[default]
    Attributes,
    /// One-hot node identity.
    Identity,
    /// Attribute pipeline followed by the identity block.
    AttributesAndIdentity,
}

/// One evaluated method. Written as `name` or `name+louvain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Heuristic(HeuristicKind),
    LogReg { louvain: bool },
    Gnn { architecture: Architecture, louvain: bool },
    NotImplemented(&'static str),
}

const NOT_IMPLEMENTED: [&str; 2] = ["random_forest", "xgboost"];

impl Method {
    pub fn louvain(self) -> bool {
        matches!(
            self,
            Method::LogReg { louvain: true } | Method::Gnn { louvain: true, .. }
        )
    }

    pub fn needs_features(self) -> bool {
        matches!(self, Method::LogReg { .. } | Method::Gnn { .. })
    }

    /// Position in reports: heuristics, tabular baselines, then each GNN
    /// immediately followed by its Louvain variant.
    pub fn rank(self) -> usize {
        match self {
            Method::Heuristic(k) => HeuristicKind::ALL.iter().position(|&x| x == k).unwrap_or(0),
            Method::LogReg { louvain } => 10 + usize::from(louvain),
            Method::NotImplemented(name) => 12 + NOT_IMPLEMENTED.iter().position(|&x| x == name).unwrap_or(0),
            Method::Gnn { architecture, louvain } => {
                let a = Architecture::ALL.iter().position(|&x| x == architecture).unwrap_or(0);
                20 + 2 * a + usize::from(louvain)
            }
        }
    }

    /// Human-readable label as used in the result tables.
    pub fn label(self) -> String {
        let suffix = if self.louvain() { " + Louvain" } else { "" };
        match self {
            Method::Heuristic(k) => match k {
                HeuristicKind::Random => "Random".into(),
                HeuristicKind::CommonNeighbors => "Common Neighbor".into(),
                HeuristicKind::Jaccard => "Jaccard".into(),
                HeuristicKind::AdamicAdar => "Adamic/Adar".into(),
                HeuristicKind::ResourceAllocation => "Resource Allocation".into(),
            },
            Method::LogReg { .. } => format!("Logistic Regression{suffix}"),
            Method::Gnn { architecture, .. } => format!("{}{suffix}", architecture.display_name()),
            Method::NotImplemented("random_forest") => "Random Forest".into(),
            Method::NotImplemented(_) => "XGBoost".into(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self {
            Method::Heuristic(k) => k.name(),
            Method::LogReg { .. } => "logreg",
            Method::Gnn { architecture, .. } => architecture.name(),
            Method::NotImplemented(name) => name,
        };
        f.write_str(base)?;
        if self.louvain() {
            f.write_str("+louvain")?;
        }
        Ok(())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let lower: String = s.split_whitespace().collect::<String>().to_ascii_lowercase();
        let (base, louvain) = match lower.strip_suffix("+louvain") {
            Some(b) => (b, true),
            None => (lower.as_str(), false),
        };
        let method = if let Some(k) = HeuristicKind::ALL.into_iter().find(|k| k.name() == base) {
            Method::Heuristic(k)
        } else if base == "logreg" || base == "logistic_regression" {
            Method::LogReg { louvain }
        } else if let Some(a) = Architecture::from_name(base) {
            Method::Gnn {
                architecture: a,
                louvain,
            }
        } else if let Some(&name) = NOT_IMPLEMENTED.iter().find(|&&n| n == base) {
            Method::NotImplemented(name)
        } else {
            return Err(format!("unknown method {s:?}"));
        };
        if louvain && !method.louvain() {
            return Err(format!("method {base:?} has no Louvain variant"));
        }
        Ok(method)
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Per-method hyperparameter overrides. Unset fields keep the defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dropout: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heads: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patience: Option<usize>,
    /// `false` disables early stopping, `true` enables it with defaults.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub early_stopping: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub input: InputSpec,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    /// Replay a persisted `u,v,label,role` split instead of sampling one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_file: Option<PathBuf>,
    pub methods: Vec<Method>,
    /// Keyed by method name, e.g. `"gcn+louvain"` or `"gcn"`; an exact
    /// match wins over the bare architecture name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, MethodOverride>,
    #[serde(default)]
    pub node_features: NodeFeatures,
    /// Cap on the TF-IDF vocabulary per text column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_vocabulary: Option<usize>,
    #[serde(default = "default_min_gain")]
    pub louvain_min_gain: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

fn config_err(msg: impl fmt::Display) -> HarnessError {
    HarnessError::new(Stage::Config, msg)
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a config file, resolving relative input paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let InputSpec::Files { edges, nodes, schema } = &mut cfg.input {
            resolve(edges);
            nodes.iter_mut().for_each(resolve);
            schema.iter_mut().for_each(resolve);
        }
        cfg.split_file.iter_mut().for_each(resolve);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(config_err("method list is empty"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(config_err(format!("method {m} listed twice")));
            }
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(config_err(format!(
                "test_fraction {} must lie in (0, 1)",
                self.test_fraction
            )));
        }
        if self.louvain_min_gain.is_nan() || self.louvain_min_gain < 0.0 {
            return Err(config_err("louvain_min_gain must be non-negative"));
        }
        for key in self.overrides.keys() {
            let method: Method = key.parse().map_err(config_err)?;
            // a bare name also configures the method's Louvain variant
            let key = method.to_string();
            let covered = self
                .methods
                .iter()
                .any(|m| m.to_string().trim_end_matches("+louvain") == key || *m == method);
            if !covered {
                return Err(config_err(format!("override {key:?} matches no listed method")));
            }
        }
        if let InputSpec::Sbm {
            blocks, p_in, p_out, ..
        } = &self.input
        {
            self.block_spec(blocks, *p_in, *p_out).validate().map_err(config_err)?;
        }
        for m in &self.methods {
            if let Method::Gnn { .. } = m {
                self.model_config(*m)
                    .expect("gnn method")
                    .validate()
                    .map_err(config_err)?;
            }
        }
        Ok(())
    }

    pub fn block_spec(&self, blocks: &[usize], p_in: f64, p_out: f64) -> BlockModelSpec {
        BlockModelSpec {
            block_sizes: blocks.to_vec(),
            p_in,
            p_out,
            seed: self.seed,
        }
    }

    fn overrides_for(&self, method: Method) -> Vec<&MethodOverride> {
        // bare name first so the exact key is applied last and wins
        let mut out = Vec::new();
        if method.louvain() {
            let bare = method.to_string().trim_end_matches("+louvain").to_owned();
            out.extend(self.overrides.get(&bare));
        }
        out.extend(self.overrides.get(&method.to_string()));
        out
    }

    pub fn threshold(&self, kind: HeuristicKind) -> f64 {
        self.overrides_for(Method::Heuristic(kind))
            .iter()
            .rev()
            .find_map(|o| o.threshold)
            .unwrap_or_else(|| kind.default_threshold())
    }

    pub fn logreg_config(&self, method: Method) -> LogRegConfig {
        let mut cfg = LogRegConfig {
            seed: self.seed,
            ..LogRegConfig::default()
        };
        for o in self.overrides_for(method) {
            cfg.lr = o.lr.unwrap_or(cfg.lr);
            cfg.epochs = o.epochs.unwrap_or(cfg.epochs);
            cfg.l2 = o.l2.unwrap_or(cfg.l2);
        }
        cfg
    }

    pub fn decision_threshold(&self, method: Method) -> f64 {
        self.overrides_for(method)
            .iter()
            .rev()
            .find_map(|o| o.threshold)
            .unwrap_or(0.5)
    }

    pub fn model_config(&self, method: Method) -> Option<ModelConfig> {
        let Method::Gnn { architecture, .. } = method else {
            return None;
        };
        let mut cfg = ModelConfig::defaults_for(architecture);
        cfg.seed = self.seed;
        for o in self.overrides_for(method) {
            cfg.lr = o.lr.unwrap_or(cfg.lr);
            cfg.max_epochs = o.epochs.unwrap_or(cfg.max_epochs);
            cfg.dropout = o.dropout.unwrap_or(cfg.dropout);
            cfg.alpha = o.alpha.unwrap_or(cfg.alpha);
            cfg.theta = o.theta.unwrap_or(cfg.theta);
            if let Some(h) = &o.hidden {
                cfg.hidden.clone_from(h);
            }
            if let Some(h) = &o.heads {
                cfg.heads.clone_from(h);
            }
            match o.early_stopping {
                Some(false) => cfg.early_stopping = None,
                Some(true) if cfg.early_stopping.is_none() => cfg.early_stopping = Some(Default::default()),
                _ => {}
            }
            if let (Some(p), Some(es)) = (o.patience, cfg.early_stopping.as_mut()) {
                es.patience = p;
            }
        }
        Some(cfg)
    }

    pub fn needs_features(&self) -> bool {
        self.methods.iter().any(|m| m.needs_features())
    }

    pub fn needs_louvain(&self) -> bool {
        self.methods.iter().any(|m| m.louvain())
    }
}
