//! Modularity and Louvain community detection.
//!
//! The public [`Graph`] is simple and unweighted. Aggregation produces
//! weighted multigraphs with self-loops, so the optimizer works on a private
//! weighted representation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::features::{FeatureMatrix, Provenance};
use crate::graph::Graph;
use crate::rng::{seeded, stream};
use crate::{Error, Result};

pub const DEFAULT_MIN_GAIN: f64 = 1e-7;

/// Assignment of every node to one of `k` contiguous community ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    community_of: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Relabels arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = BTreeMap::new();
        let community_of = labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            community_of,
            k: map.len(),
        }
    }

    /// Every node in community 0.
    pub fn single(n: usize) -> Self {
        Partition {
            community_of: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.community_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.community_of.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.k
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.community_of[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.community_of
    }
}

/// Newman modularity of `p` on `g` with resolution 1.
///
/// Evaluated per community as `L_c / m - (d_c / 2m)^2`, which equals the
/// ordered double sum over `A_ij - k_i k_j / 2m`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            expected: g.node_count(),
            found: p.len(),
        });
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::ModularityUndefined);
    }
    let mut internal = vec![0usize; p.k];
    let mut degree = vec![0usize; p.k];
    for u in 0..g.node_count() {
        let c = p.community_of[u];
        degree[c] += g.row(u).len();
        internal[c] += g.row(u).iter().filter(|&&v| p.community_of[v] == c).count();
    }
    let two_m = 2.0 * m as f64;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| l as f64 / two_m - (d as f64 / two_m) * (d as f64 / two_m))
        .sum())
}

#[derive(Debug, Clone)]
struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    degree: Vec<f64>,
    two_m: f64,
}

impl WeightedGraph {
    fn from_graph(g: &Graph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = (0..g.node_count())
            .map(|u| g.row(u).iter().map(|&v| (v, 1.0)).collect())
            .collect();
        let degree = adj.iter().map(|r| r.len() as f64).collect();
        WeightedGraph {
            self_loop: vec![0.0; adj.len()],
            adj,
            degree,
            two_m: 2.0 * g.edge_count() as f64,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn modularity(&self, comm: &[usize], k: usize) -> f64 {
        let mut inside = vec![0.0; k];
        let mut tot = vec![0.0; k];
        for i in 0..self.len() {
            let c = comm[i];
            tot[c] += self.degree[i];
            inside[c] += 2.0 * self.self_loop[i];
            for &(j, w) in &self.adj[i] {
                if comm[j] == c {
                    inside[c] += w;
                }
            }
        }
        inside
            .iter()
            .zip(&tot)
            .map(|(&i, &t)| i / self.two_m - (t / self.two_m) * (t / self.two_m))
            .sum()
    }

    /// Collapses every community into one node.
    fn aggregate(&self, comm: &[usize], k: usize) -> WeightedGraph {
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
        let mut self_loop = vec![0.0; k];
        let mut degree = vec![0.0; k];
        for i in 0..self.len() {
            let ci = comm[i];
            degree[ci] += self.degree[i];
            self_loop[ci] += self.self_loop[i];
            for &(j, w) in &self.adj[i] {
                let cj = comm[j];
                if ci == cj {
                    // each undirected edge is seen from both endpoints
                    self_loop[ci] += w / 2.0;
                } else {
                    *rows[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        WeightedGraph {
            adj: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
            self_loop,
            degree,
            two_m: self.two_m,
        }
    }
}

/// Greedy local moving until a full pass makes no move.
/// Returns contiguous community ids and whether anything moved.
fn local_moving(wg: &WeightedGraph, min_gain: f64, rng: &mut crate::rng::ChaCha8Rng) -> (Vec<usize>, usize, bool) {
    let n = wg.len();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot = wg.degree.clone();
    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut is_touched = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut any_move = false;
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &i in &order {
            let ki = wg.degree[i];
            let old = comm[i];
            touched.clear();
            for &(j, w) in &wg.adj[i] {
                let c = comm[j];
                if !is_touched[c] {
                    is_touched[c] = true;
                    touched.push(c);
                }
                weight_to[c] += w;
            }
            tot[old] -= ki;
            let gain = |c: usize, w: f64| w - tot[c] * ki / wg.two_m;
            let stay = gain(old, weight_to[old]);
            let mut best = old;
            let mut best_gain = stay;
            touched.sort_unstable();
            for &c in &touched {
                let g = gain(c, weight_to[c]);
                if g > best_gain || (g == best_gain && c < best) {
                    best = c;
                    best_gain = g;
                }
            }
            // modularity change of the move relative to staying put
            let delta_q = 2.0 * (best_gain - stay) / wg.two_m;
            if best != old && delta_q >= min_gain && delta_q > 0.0 {
                comm[i] = best;
                moved = true;
                any_move = true;
            }
            tot[comm[i]] += ki;
            for &c in &touched {
                weight_to[c] = 0.0;
                is_touched[c] = false;
            }
        }
        if !moved {
            break;
        }
    }
    let relabeled = Partition::from_labels(&comm);
    let k = relabeled.k;
    (relabeled.community_of, k, any_move)
}

/// Louvain modularity maximisation, deterministic for a given seed.
pub fn louvain(g: &Graph, min_gain: f64, seed: u64) -> Result<Partition> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if min_gain.is_nan() || min_gain < 0.0 {
        return Err(Error::InvalidParameter("min_gain must be non-negative".into()));
    }
    let mut rng = seeded(seed, stream::LOUVAIN);
    let mut level = WeightedGraph::from_graph(g);
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    let mut q = level.modularity(&membership, g.node_count());
    loop {
        let (comm, k, moved) = local_moving(&level, min_gain, &mut rng);
        if !moved {
            break;
        }
        let next_q = level.modularity(&comm, k);
        debug_assert!(next_q >= q - 1e-12, "modularity decreased: {q} -> {next_q}");
        for c in membership.iter_mut() {
            *c = comm[*c];
        }
        level = level.aggregate(&comm, k);
        let improved = next_q - q;
        q = next_q;
        if improved < min_gain {
            break;
        }
    }
    Ok(Partition::from_labels(&membership))
}

/// One-hot community indicator matrix, `n x k`.
pub fn one_hot_communities(p: &Partition) -> FeatureMatrix {
    let rows = p.community_of.iter().map(|&c| vec![(c, 1.0)]);
    FeatureMatrix::from_sparse_rows(p.k, rows, Provenance::Community).expect("community ids are below k")
}
