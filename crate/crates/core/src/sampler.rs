//! Train/test edge split and balanced synthetic non-links.

use alloc::vec::Vec;

use hashbrown::HashSet;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::math::round_half_even;
use crate::rng::{seeded, stream, ChaCha8Rng};
use crate::{Error, Result};

pub type Pair = (usize, usize);

/// Pairs below this many candidates are sampled from the enumerated complement.
const ENUMERATION_LIMIT: usize = 1_000_000;

#[inline]
pub fn canonical(u: usize, v: usize) -> Pair {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Test,
}

/// Node pairs with binary link labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPairSet {
    pub pairs: Vec<Pair>,
    pub labels: Vec<u8>,
    pub role: Role,
}

impl LabeledPairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn positives(&self) -> impl Iterator<Item = Pair> + '_ {
        self.iter().filter(|&(_, y)| y == 1).map(|(p, _)| p)
    }

    pub fn negatives(&self) -> impl Iterator<Item = Pair> + '_ {
        self.iter().filter(|&(_, y)| y == 0).map(|(p, _)| p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Pair, u8)> + '_ {
        self.pairs.iter().copied().zip(self.labels.iter().copied())
    }

    /// Labels as `f64`, the form the loss functions take.
    pub fn targets(&self) -> Vec<f64> {
        self.labels.iter().map(|&y| y as f64).collect()
    }

    /// Splits off a stratified validation slice holding `fraction` of each class.
    pub fn split_validation(&self, fraction: f64, seed: u64) -> (LabeledPairSet, LabeledPairSet) {
        let mut rng = seeded(seed, stream::VALIDATION);
        let mut pos: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] == 1).collect();
        let mut neg: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] == 0).collect();
        pos.shuffle(&mut rng);
        neg.shuffle(&mut rng);
        let take = |v: &[usize]| round_half_even(v.len() as f64 * fraction) as usize;
        let (vp, vn) = (take(&pos), take(&neg));
        let mut val_idx: Vec<usize> = pos[..vp].iter().chain(&neg[..vn]).copied().collect();
        let mut fit_idx: Vec<usize> = pos[vp..].iter().chain(&neg[vn..]).copied().collect();
        val_idx.sort_unstable();
        fit_idx.sort_unstable();
        let pick = |idx: &[usize]| LabeledPairSet {
            pairs: idx.iter().map(|&i| self.pairs[i]).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            role: self.role,
        };
        (pick(&fit_idx), pick(&val_idx))
    }

    /// Balance, canonical order, uniqueness and non-edge negatives.
    pub fn check_invariants(&self, full: &Graph) -> bool {
        let mut seen = HashSet::new();
        let mut balance = 0i64;
        for (p, y) in self.iter() {
            if p.0 >= p.1 || !seen.insert(p) {
                return false;
            }
            match y {
                1 => balance += 1,
                0 => {
                    if full.has_edge(p.0, p.1) {
                        return false;
                    }
                    balance -= 1;
                }
                _ => return false,
            }
        }
        balance == 0 && self.pairs.len() == self.labels.len()
    }
}

/// Shuffles the edges and assigns `round_half_even(m * test_fraction)` to test.
pub fn split_edges(g: &Graph, test_fraction: f64, seed: u64) -> Result<(Vec<Pair>, Vec<Pair>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "test fraction {test_fraction} must lie strictly between 0 and 1"
        )));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut edges: Vec<Pair> = g.edges().collect();
    edges.shuffle(&mut seeded(seed, stream::SPLIT));
    let n_test = round_half_even(edges.len() as f64 * test_fraction) as usize;
    let train = edges.split_off(n_test);
    Ok((train, edges))
}

/// Draws `count` distinct canonical pairs that are neither edges of `g` nor in `exclude`.
pub fn sample_non_links(g: &Graph, count: usize, exclude: &HashSet<Pair>, seed: u64) -> Result<Vec<Pair>> {
    sample_with(g, count, exclude, &mut seeded(seed, 0))
}

fn sample_with(g: &Graph, count: usize, exclude: &HashSet<Pair>, rng: &mut ChaCha8Rng) -> Result<Vec<Pair>> {
    let n = g.node_count();
    let total = n * n.saturating_sub(1) / 2;
    let excluded_non_edges = exclude
        .iter()
        .filter(|&&(u, v)| u != v && u < n && v < n && !g.has_edge(u, v))
        .count();
    let available = total - g.edge_count() - excluded_non_edges;
    if count > available {
        return Err(Error::InsufficientNonEdges {
            requested: count,
            available,
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let allowed = |u: usize, v: usize| !g.has_edge(u, v) && !exclude.contains(&(u, v));
    if total <= ENUMERATION_LIMIT {
        let mut candidates: Vec<Pair> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .filter(|&(u, v)| allowed(u, v))
            .collect();
        let (chosen, _) = candidates.partial_shuffle(rng, count);
        return Ok(chosen.to_vec());
    }
    let mut chosen = Vec::with_capacity(count);
    let mut seen = HashSet::with_capacity(count);
    while chosen.len() < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let p = canonical(u, v);
        if allowed(p.0, p.1) && seen.insert(p) {
            chosen.push(p);
        }
    }
    Ok(chosen)
}

fn labeled(pos: &[Pair], neg: &[Pair], role: Role, rng: &mut ChaCha8Rng) -> LabeledPairSet {
    let mut rows: Vec<(Pair, u8)> = pos.iter().map(|&p| (p, 1)).chain(neg.iter().map(|&p| (p, 0))).collect();
    rows.shuffle(rng);
    let (pairs, labels) = rows.into_iter().unzip();
    LabeledPairSet { pairs, labels, role }
}

/// Balanced train and test sets; negatives are non-edges of the full graph
/// and the two negative sets are disjoint.
pub fn build_datasets(g: &Graph, test_fraction: f64, seed: u64) -> Result<(LabeledPairSet, LabeledPairSet)> {
    let (train_pos, test_pos) = split_edges(g, test_fraction, seed)?;
    let train_neg = sample_with(
        g,
        train_pos.len(),
        &HashSet::new(),
        &mut seeded(seed, stream::TRAIN_NEGATIVES),
    )?;
    let exclude: HashSet<Pair> = train_neg.iter().copied().collect();
    let test_neg = sample_with(g, test_pos.len(), &exclude, &mut seeded(seed, stream::TEST_NEGATIVES))?;
    let mut rng = seeded(seed, stream::SHUFFLE);
    let train = labeled(&train_pos, &train_neg, Role::Train, &mut rng);
    let test = labeled(&test_pos, &test_neg, Role::Test, &mut rng);
    Ok((train, test))
}

/// The graph formed by the positive pairs of `set`, over `n` nodes.
pub fn positive_graph(n: usize, set: &LabeledPairSet) -> Result<Graph> {
    let pos: Vec<Pair> = set.positives().collect();
    Graph::with_nodes(n, &pos)
}
