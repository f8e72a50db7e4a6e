//! Stochastic block model fixtures.
//!
//! Besides the graph itself, [`synthetic_attributes`] produces a node table
//! whose text and categorical columns are noisily correlated with the planted
//! blocks, standing in for the bibliographic attributes of a real corpus.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{ColumnData, Graph, NodeTable};
use crate::louvain::Partition;
use crate::rng::{seeded, stream};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockModelSpec {
    pub block_sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

impl BlockModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.block_sizes.is_empty() {
            return Err(Error::InvalidParameter("at least one block is required".into()));
        }
        if self.block_sizes.contains(&0) {
            return Err(Error::InvalidParameter("block sizes must be positive".into()));
        }
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} = {p} is not in [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Block label of every node, blocks laid out contiguously.
    pub fn block_labels(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &size)| core::iter::repeat_n(b, size))
            .collect()
    }
}

/// Samples a graph, visiting pairs `u < v` lexicographically with one draw each.
pub fn generate_sbm(spec: &BlockModelSpec) -> Result<(Graph, Partition)> {
    spec.validate()?;
    let labels = spec.block_labels();
    let n = labels.len();
    let mut rng = seeded(spec.seed, 0);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if labels[u] == labels[v] { spec.p_in } else { spec.p_out };
            if rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    let graph = Graph::with_nodes(n, &pairs)?;
    let truth = Partition::from_labels(&labels);
    Ok((graph, truth))
}

/// Generator for block-correlated node attributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AttributeModel {
    /// Vocabulary reserved for each block.
    pub topic_words: usize,
    /// Vocabulary shared by all blocks.
    pub background_words: usize,
    pub tokens_per_node: usize,
    /// Probability that a token is drawn from the node's block vocabulary.
    pub topic_prob: f64,
    /// Probability that the categorical column carries the block's own value.
    pub venue_fidelity: f64,
    /// Number of distinct categorical values; at least the number of blocks.
    pub venues: usize,
}

impl Default for AttributeModel {
    fn default() -> Self {
        AttributeModel {
            topic_words: 12,
            background_words: 300,
            tokens_per_node: 10,
            topic_prob: 0.5,
            venue_fidelity: 0.5,
            venues: 12,
        }
    }
}

/// Builds a node table with columns `year` (numeric, uninformative),
/// `venue` (categorical) and `abstract` (text).
pub fn synthetic_attributes(truth: &Partition, model: &AttributeModel, seed: u64) -> Result<NodeTable> {
    if !(0.0..=1.0).contains(&model.topic_prob) || !(0.0..=1.0).contains(&model.venue_fidelity) {
        return Err(Error::InvalidParameter(
            "attribute probabilities must lie in [0, 1]".into(),
        ));
    }
    if model.background_words == 0 || model.topic_words == 0 || model.venues == 0 {
        return Err(Error::InvalidParameter(
            "attribute vocabularies must be non-empty".into(),
        ));
    }
    let n = truth.len();
    let mut rng = seeded(seed, stream::ATTRIBUTES);
    let mut table = NodeTable::from_ids((0..n).map(|i| format!("n{i}")))?;
    let mut year = Vec::with_capacity(n);
    let mut venue = Vec::with_capacity(n);
    let mut text = Vec::with_capacity(n);
    for u in 0..n {
        let block = truth.community_of(u);
        year.push(rng.random_range(1990..2024) as f64);
        let v = if rng.random::<f64>() < model.venue_fidelity {
            block % model.venues
        } else {
            rng.random_range(0..model.venues)
        };
        venue.push(format!("venue{v:02}"));
        let mut doc = String::new();
        for t in 0..model.tokens_per_node {
            if t > 0 {
                doc.push(' ');
            }
            if rng.random::<f64>() < model.topic_prob {
                let w = rng.random_range(0..model.topic_words);
                doc.push_str(&format!("topic{block}w{w}"));
            } else {
                let w = rng.random_range(0..model.background_words);
                doc.push_str(&format!("common{w}"));
            }
        }
        text.push(doc);
    }
    table.push_column("year", ColumnData::Numeric(year))?;
    table.push_column("venue", ColumnData::Categorical(venue))?;
    table.push_column("abstract", ColumnData::Text(text))?;
    Ok(table)
}
