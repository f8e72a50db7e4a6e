use std::collections::HashSet;

use linkpred_core::autodiff::Matrix;
use linkpred_core::features::{FeatureMatrix, Provenance};
use linkpred_core::gnn::{train, Architecture, GnnModel, MessageGraph, ModelConfig};
use linkpred_core::metrics::auc;
use linkpred_core::sampler::{build_datasets, canonical, positive_graph};
use linkpred_core::Graph;
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (4..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |raw| {
            let pairs: Vec<_> = raw.into_iter().filter(|(u, v)| u != v).collect();
            Graph::with_nodes(n, &pairs).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn adjacency_is_symmetric_and_loop_free(g in graph_strategy(20)) {
        prop_assert!(g.check_invariants());
        for u in 0..g.node_count() {
            prop_assert!(!g.has_edge(u, u));
            for v in 0..g.node_count() {
                prop_assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
            }
        }
        let degree_sum: usize = (0..g.node_count()).map(|u| g.degree(u).unwrap()).sum();
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn datasets_are_balanced_and_disjoint(g in graph_strategy(30), seed in 0u64..1000) {
        prop_assume!(g.edge_count() >= 5);
        let non_edges = g.node_count() * (g.node_count() - 1) / 2 - g.edge_count();
        prop_assume!(non_edges >= g.edge_count());
        let (tr, te) = build_datasets(&g, 0.2, seed).unwrap();
        prop_assert!(tr.check_invariants(&g));
        prop_assert!(te.check_invariants(&g));
        prop_assert_eq!(tr.positives().count() + te.positives().count(), g.edge_count());
        prop_assert_eq!(tr.positives().count(), tr.negatives().count());
        prop_assert_eq!(te.positives().count(), te.negatives().count());
        let train_pairs: HashSet<_> = tr.pairs.iter().copied().collect();
        prop_assert!(te.pairs.iter().all(|p| !train_pairs.contains(p)));
        for (u, v) in tr.negatives().chain(te.negatives()) {
            prop_assert!(!g.has_edge(u, v));
            prop_assert_eq!((u, v), canonical(u, v));
        }
        // the message-passing graph never sees a test edge
        let tg = positive_graph(g.node_count(), &tr).unwrap();
        prop_assert!(te.positives().all(|(u, v)| !tg.has_edge(u, v)));
    }

    #[test]
    fn auc_ignores_monotone_transforms(
        data in proptest::collection::vec((0u8..2, -50i32..50), 2..200),
    ) {
        let y: Vec<u8> = data.iter().map(|d| d.0).collect();
        prop_assume!(y.contains(&0) && y.contains(&1));
        let s: Vec<f64> = data.iter().map(|d| d.1 as f64 / 10.0).collect();
        let a = auc(&y, &s).unwrap();
        let squashed: Vec<f64> = s.iter().map(|v| 1.0 / (1.0 + (-v).exp())).collect();
        prop_assert!((auc(&y, &squashed).unwrap() - a).abs() < 1e-12);
        let flipped: Vec<u8> = y.iter().map(|v| 1 - v).collect();
        prop_assert!((auc(&flipped, &s).unwrap() - (1.0 - a)).abs() < 1e-12);
    }
}

fn small_config(arch: Architecture) -> ModelConfig {
    let mut cfg = ModelConfig::defaults_for(arch);
    match arch {
        Architecture::Gat | Architecture::GatV2 => {
            cfg.hidden = vec![4, 3];
            cfg.heads = vec![2, 1];
        }
        Architecture::GcnV2 => cfg.hidden = vec![4],
        _ => cfg.hidden = vec![6, 3],
    }
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn encoders_are_permutation_equivariant(g in graph_strategy(10), shift in 1usize..9, arch_ix in 0usize..5) {
        let arch = Architecture::ALL[arch_ix];
        let n = g.node_count();
        let perm: Vec<usize> = (0..n).map(|i| (i * 7 + shift) % n).collect();
        prop_assume!({
            let mut seen = perm.clone();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == n
        });
        let x = Matrix::from_fn(n, 3, |i, j| ((i * 3 + j) as f64 * 0.37).sin());
        let px = Matrix::from_fn(n, 3, |i, j| {
            let src = perm.iter().position(|&p| p == i).unwrap();
            x[(src, j)]
        });
        let pg = Graph::with_nodes(n, &g.edges().map(|(u, v)| (perm[u], perm[v])).collect::<Vec<_>>()).unwrap();
        let model = GnnModel::new(small_config(arch), 3).unwrap();
        let z = model.embed(&x, &MessageGraph::new(&g)).unwrap();
        let pz = model.embed(&px, &MessageGraph::new(&pg)).unwrap();
        for i in 0..n {
            for j in 0..z.cols() {
                prop_assert!((z[(i, j)] - pz[(perm[i], j)]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn training_does_not_depend_on_test_edges() {
    let pairs: Vec<_> = (0..40).flat_map(|i| [(i, (i + 1) % 40), (i, (i + 5) % 40)]).collect();
    let g = Graph::with_nodes(40, &pairs).unwrap();
    let (tr, te) = build_datasets(&g, 0.2, 42).unwrap();
    let features = FeatureMatrix::from_dense_rows(
        &(0..40)
            .map(|i| vec![(i % 4) as f64, (i % 3) as f64])
            .collect::<Vec<_>>(),
        Provenance::Numeric,
    )
    .unwrap();
    let mut cfg = small_config(Architecture::Gcn);
    cfg.max_epochs = 20;

    let fit = |graph: &Graph| train(&cfg, &features, &tr, graph).unwrap();
    let (a, la) = fit(&positive_graph(40, &tr).unwrap());

    // drop a test edge from the full graph; the train graph and so training are unchanged
    let (du, dv) = te.positives().next().unwrap();
    let reduced: Vec<_> = g.edges().filter(|&e| e != canonical(du, dv)).collect();
    let reduced = Graph::with_nodes(40, &reduced).unwrap();
    let train_only: Vec<_> = tr.positives().filter(|&(u, v)| reduced.has_edge(u, v)).collect();
    let (b, lb) = fit(&Graph::with_nodes(40, &train_only).unwrap());

    assert_eq!(la.losses.len(), lb.losses.len());
    assert!(la
        .losses
        .iter()
        .zip(&lb.losses)
        .all(|(x, y)| x.to_bits() == y.to_bits()));
    assert!(a
        .embeddings
        .data()
        .iter()
        .zip(b.embeddings.data())
        .all(|(x, y)| x.to_bits() == y.to_bits()));
}
