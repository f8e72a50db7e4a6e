//! Neighbourhood-overlap link predictors with fixed thresholds.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::math::ln;
use crate::rng::{seeded, stream};
use crate::sampler::Pair;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicKind {
    Random,
    CommonNeighbors,
    Jaccard,
    AdamicAdar,
    ResourceAllocation,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 5] = [
        HeuristicKind::Random,
        HeuristicKind::CommonNeighbors,
        HeuristicKind::Jaccard,
        HeuristicKind::AdamicAdar,
        HeuristicKind::ResourceAllocation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HeuristicKind::Random => "random",
            HeuristicKind::CommonNeighbors => "common_neighbors",
            HeuristicKind::Jaccard => "jaccard",
            HeuristicKind::AdamicAdar => "adamic_adar",
            HeuristicKind::ResourceAllocation => "resource_allocation",
        }
    }

    pub fn default_threshold(self) -> f64 {
        match self {
            HeuristicKind::Random => 0.5,
            HeuristicKind::CommonNeighbors => 1.0,
            HeuristicKind::Jaccard => 0.01,
            HeuristicKind::AdamicAdar => 0.5,
            HeuristicKind::ResourceAllocation => 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeuristicMethod {
    pub kind: HeuristicKind,
    pub threshold: f64,
}

impl HeuristicMethod {
    pub fn new(kind: HeuristicKind) -> Self {
        HeuristicMethod {
            kind,
            threshold: kind.default_threshold(),
        }
    }

    pub fn with_threshold(self, threshold: f64) -> Self {
        HeuristicMethod { threshold, ..self }
    }
}

/// Visits the common neighbours of two sorted adjacency rows.
fn for_each_common(a: &[usize], b: &[usize], mut f: impl FnMut(usize)) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                f(a[i]);
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

pub fn score(g: &Graph, kind: HeuristicKind, u: usize, v: usize) -> Result<f64> {
    let nu = g.neighbors(u)?;
    let nv = g.neighbors(v)?;
    if u == v {
        return Err(Error::DegeneratePair(u));
    }
    let value = match kind {
        HeuristicKind::Random => return Err(Error::ScorelessMethod("random")),
        HeuristicKind::CommonNeighbors => for_each_common(nu, nv, |_| ()) as f64,
        HeuristicKind::Jaccard => {
            let common = for_each_common(nu, nv, |_| ());
            let union = nu.len() + nv.len() - common;
            if union == 0 {
                0.0
            } else {
                common as f64 / union as f64
            }
        }
        HeuristicKind::AdamicAdar => {
            let mut s = 0.0;
            // a common neighbour has degree >= 2, so the log is positive
            for_each_common(nu, nv, |w| s += 1.0 / ln(g.row(w).len() as f64));
            s
        }
        HeuristicKind::ResourceAllocation => {
            let mut s = 0.0;
            for_each_common(nu, nv, |w| s += 1.0 / g.row(w).len() as f64);
            s
        }
    };
    Ok(value)
}

pub fn scores(g: &Graph, kind: HeuristicKind, pairs: &[Pair]) -> Result<Vec<f64>> {
    pairs.iter().map(|&(u, v)| score(g, kind, u, v)).collect()
}

/// Label 1 iff the score reaches the threshold. The random kind is
/// delegated to [`random_predict`] with `seed`.
pub fn predict(g: &Graph, method: HeuristicMethod, pairs: &[Pair], seed: u64) -> Result<Vec<u8>> {
    if method.kind == HeuristicKind::Random {
        return Ok(random_predict(pairs, seed));
    }
    pairs
        .iter()
        .map(|&(u, v)| score(g, method.kind, u, v).map(|s| (s >= method.threshold) as u8))
        .collect()
}

/// Independent fair coin per pair.
pub fn random_predict(pairs: &[Pair], seed: u64) -> Vec<u8> {
    let mut rng = seeded(seed, stream::RANDOM_BASELINE);
    pairs.iter().map(|_| rng.random_bool(0.5) as u8).collect()
}
