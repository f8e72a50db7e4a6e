//! Library results against direct, brute-force evaluations of the formulas.

use std::collections::BTreeSet;

use linkpred_core::features::{augment_with_communities, tfidf, tokenize, FeatureMatrix, Provenance};
use linkpred_core::heuristics::{score, HeuristicKind};
use linkpred_core::louvain::{louvain, modularity, DEFAULT_MIN_GAIN};
use linkpred_core::metrics::{adjusted_rand_index, auc, classification_metrics, confusion};
use linkpred_core::rng::seeded;
use linkpred_core::sbm::{generate_sbm, BlockModelSpec};
use linkpred_core::{Graph, Partition};
use rand::Rng;

fn random_graph(seed: u64, max_n: usize) -> Graph {
    let mut rng = seeded(seed, 77);
    let n = rng.random_range(2..=max_n);
    let p: f64 = rng.random_range(0.1..0.9);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    Graph::with_nodes(n, &pairs).unwrap()
}

fn neighbour_set(g: &Graph, u: usize) -> BTreeSet<usize> {
    (0..g.node_count()).filter(|&w| g.has_edge(u, w)).collect()
}

pub fn heuristics_match_set_arithmetic() {
    for seed in 0..200 {
        let g = random_graph(seed, 8);
        for u in 0..g.node_count() {
            for v in 0..g.node_count() {
                if u == v {
                    continue;
                }
                let (a, b) = (neighbour_set(&g, u), neighbour_set(&g, v));
                let common: Vec<usize> = a.intersection(&b).copied().collect();
                let union = a.union(&b).count();
                let deg = |w: usize| neighbour_set(&g, w).len() as f64;
                let cn = common.len() as f64;
                let jac = if union == 0 { 0.0 } else { cn / union as f64 };
                // same ln as the library, so the comparison can be exact
                let aa: f64 = common.iter().map(|&w| 1.0 / libm::log(deg(w))).sum();
                let ra: f64 = common.iter().map(|&w| 1.0 / deg(w)).sum();
                assert_eq!(score(&g, HeuristicKind::CommonNeighbors, u, v).unwrap(), cn);
                assert_eq!(score(&g, HeuristicKind::Jaccard, u, v).unwrap(), jac);
                assert_eq!(
                    score(&g, HeuristicKind::AdamicAdar, u, v).unwrap(),
                    aa,
                    "seed {seed} ({u},{v})"
                );
                assert_eq!(score(&g, HeuristicKind::ResourceAllocation, u, v).unwrap(), ra);
            }
        }
    }
}

/// `1/2m * sum_ij (A_ij - k_i k_j / 2m) [c_i = c_j]`.
fn modularity_oracle(g: &Graph, labels: &[usize]) -> f64 {
    let n = g.node_count();
    let two_m = 2.0 * g.edge_count() as f64;
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
                let ki = g.degree(i).unwrap() as f64;
                let kj = g.degree(j).unwrap() as f64;
                q += a - ki * kj / two_m;
            }
        }
    }
    q / two_m
}

/// Calls `f` with every set partition of `0..n` as restricted growth strings.
fn for_each_partition(n: usize, f: &mut impl FnMut(&[usize])) {
    fn go(labels: &mut Vec<usize>, n: usize, max: usize, f: &mut impl FnMut(&[usize])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        for c in 0..=max + 1 {
            labels.push(c);
            go(labels, n, max.max(c), f);
            labels.pop();
        }
    }
    let mut labels = vec![0];
    go(&mut labels, n, 0, f);
}

fn best_modularity(g: &Graph) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for_each_partition(g.node_count(), &mut |labels| {
        best = best.max(modularity_oracle(g, labels))
    });
    best
}

fn cliques_joined(sizes: &[usize], bridges: &[(usize, usize)]) -> Graph {
    let mut pairs = Vec::new();
    let mut start = 0;
    for &s in sizes {
        for u in start..start + s {
            for v in u + 1..start + s {
                pairs.push((u, v));
            }
        }
        start += s;
    }
    pairs.extend_from_slice(bridges);
    Graph::with_nodes(start, &pairs).unwrap()
}

pub fn modularity_reference_values() {
    for seed in 0..100 {
        let g = random_graph(1000 + seed, 12);
        if g.edge_count() == 0 {
            continue;
        }
        assert_eq!(modularity(&g, &Partition::single(g.node_count())).unwrap(), 0.0);
        let labels: Vec<usize> = (0..g.node_count()).map(|i| i % 3).collect();
        let q = modularity(&g, &Partition::from_labels(&labels)).unwrap();
        assert!((q - modularity_oracle(&g, &labels)).abs() < 1e-12);
    }
    let triangles = cliques_joined(&[3, 3], &[]);
    assert_eq!(
        modularity(&triangles, &Partition::from_labels(&[0, 0, 0, 1, 1, 1])).unwrap(),
        0.5
    );
}

pub fn louvain_reaches_exhaustive_optimum_on_clique_fixtures() {
    let fixtures = [
        cliques_joined(&[3, 3], &[]),
        cliques_joined(&[3, 3], &[(2, 3)]),
        cliques_joined(&[3, 4], &[(0, 3)]),
        cliques_joined(&[4, 4], &[(3, 4)]),
        cliques_joined(&[2, 3, 3], &[(1, 2), (4, 5)]),
        cliques_joined(&[5, 5], &[(4, 5)]),
    ];
    for (i, g) in fixtures.iter().enumerate() {
        let optimum = best_modularity(g);
        for seed in [1, 42] {
            let p = louvain(g, DEFAULT_MIN_GAIN, seed).unwrap();
            let q = modularity(g, &p).unwrap();
            assert!((q - optimum).abs() < 1e-12, "fixture {i} seed {seed}: {q} vs {optimum}");
        }
    }
}

pub fn louvain_recovers_planted_blocks() {
    let mut good = 0;
    for seed in 0..5 {
        let spec = BlockModelSpec {
            block_sizes: vec![30, 30, 30],
            p_in: 0.3,
            p_out: 0.01,
            seed,
        };
        let (g, truth) = generate_sbm(&spec).unwrap();
        let found = louvain(&g, DEFAULT_MIN_GAIN, seed).unwrap();
        if adjusted_rand_index(found.labels(), truth.labels()).unwrap() >= 0.9 {
            good += 1;
        }
    }
    assert!(good >= 4, "only {good} of 5 seeds reached ARI 0.9");
}

/// Dense TF-IDF straight from the definition.
fn tfidf_oracle(docs: &[Vec<String>]) -> (Vec<String>, Vec<Vec<f64>>) {
    let vocab: Vec<String> = docs
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = docs.len() as f64;
    let rows = docs
        .iter()
        .map(|doc| {
            let raw: Vec<f64> = vocab
                .iter()
                .map(|t| {
                    let tf = doc.iter().filter(|w| *w == t).count() as f64;
                    let df = docs.iter().filter(|d| d.contains(t)).count() as f64;
                    tf * (((1.0 + n) / (1.0 + df)).ln() + 1.0)
                })
                .collect();
            let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            raw.iter().map(|v| if norm > 0.0 { v / norm } else { 0.0 }).collect()
        })
        .collect();
    (vocab, rows)
}

pub fn tfidf_matches_dense_formula() {
    let mut rng = seeded(3, 3);
    let words = ["graph", "link", "node", "edge", "model", "louvain", "attention", "walk"];
    for _ in 0..50 {
        let docs: Vec<Vec<String>> = (0..5)
            .map(|_| {
                let len = rng.random_range(0..12);
                (0..len)
                    .map(|_| words[rng.random_range(0..words.len())].to_string())
                    .collect()
            })
            .collect();
        let x = tfidf(&docs);
        let (vocab, dense) = tfidf_oracle(&docs);
        assert_eq!(x.n_cols(), vocab.len());
        for (r, row) in dense.iter().enumerate() {
            for (a, b) in x.dense_row(r).iter().zip(row) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
    assert_eq!(
        tokenize("Graph-based LINK prediction, a 2nd look"),
        ["graph", "based", "link", "prediction", "2nd", "look"]
    );
}

pub fn community_augmentation_appends_exactly_k_columns() {
    let x = FeatureMatrix::from_dense_rows(
        &[
            vec![0.5, 0.0, -1.25],
            vec![0.0, 2.0, 0.0],
            vec![1e-300, 0.0, 3.0],
            vec![0.0, 0.0, 0.0],
        ],
        Provenance::Numeric,
    )
    .unwrap();
    let p = Partition::from_labels(&[4, 1, 4, 9]);
    let aug = augment_with_communities(&x, &p).unwrap();
    assert_eq!(aug.n_cols(), x.n_cols() + p.community_count());
    for r in 0..x.n_rows() {
        let old = x.dense_row(r);
        let new = aug.dense_row(r);
        assert!(old.iter().zip(&new).all(|(a, b)| a.to_bits() == b.to_bits()));
        assert_eq!(new[x.n_cols()..].iter().sum::<f64>(), 1.0);
    }
    assert!(aug.provenance()[x.n_cols()..]
        .iter()
        .all(|&p| p == Provenance::Community));
}

fn auc_oracle(y: &[u8], s: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut total = 0.0;
    for i in 0..y.len() {
        for j in 0..y.len() {
            if y[i] == 1 && y[j] == 0 {
                total += 1.0;
                if s[i] > s[j] {
                    wins += 1.0;
                } else if s[i] == s[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / total
}

pub fn auc_matches_pair_counting() {
    let mut rng = seeded(9, 9);
    for trial in 0..100 {
        let n = rng.random_range(2..=500);
        let mut y: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
        y[0] = 1;
        y[1] = 0;
        // coarse scores so ties are common
        let levels = if trial % 2 == 0 { 7 } else { 1000 };
        let s: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0..levels) as f64 / levels as f64)
            .collect();
        let got = auc(&y, &s).unwrap();
        assert!((got - auc_oracle(&y, &s)).abs() < 1e-12);
        let cubed: Vec<f64> = s.iter().map(|v| v * v * v + 2.0).collect();
        assert!((auc(&y, &cubed).unwrap() - got).abs() < 1e-12);
        let flipped: Vec<u8> = y.iter().map(|v| 1 - v).collect();
        assert!((auc(&flipped, &s).unwrap() - (1.0 - got)).abs() < 1e-12);
    }
}

pub fn confusion_and_rates_hand_fixtures() {
    let y = [1, 1, 1, 1, 1, 0, 0, 0, 0, 0];
    let p = [1, 1, 1, 0, 0, 1, 0, 0, 0, 0];
    let cm = confusion(&y, &p).unwrap();
    assert_eq!((cm.tp, cm.fp, cm.tn, cm.fn_), (3, 1, 4, 2));
    let m = classification_metrics(&cm);
    assert_eq!(m.precision, 0.75);
    assert_eq!(m.recall, 0.6);
    assert_eq!(m.f1, 2.0 * 0.75 * 0.6 / (0.75 + 0.6));
}

mod tests {
    #[test]
    fn heuristics_match_set_arithmetic() {
        super::heuristics_match_set_arithmetic();
    }

    #[test]
    fn modularity_reference_values() {
        super::modularity_reference_values();
    }

    #[test]
    fn louvain_reaches_exhaustive_optimum_on_clique_fixtures() {
        super::louvain_reaches_exhaustive_optimum_on_clique_fixtures();
    }

    #[test]
    fn louvain_recovers_planted_blocks() {
        super::louvain_recovers_planted_blocks();
    }

    #[test]
    fn tfidf_matches_dense_formula() {
        super::tfidf_matches_dense_formula();
    }

    #[test]
    fn community_augmentation_appends_exactly_k_columns() {
        super::community_augmentation_appends_exactly_k_columns();
    }

    #[test]
    fn auc_matches_pair_counting() {
        super::auc_matches_pair_counting();
    }

    #[test]
    fn confusion_and_rates_hand_fixtures() {
        super::confusion_and_rates_hand_fixtures();
    }
}
