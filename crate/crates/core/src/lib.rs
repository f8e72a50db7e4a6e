//! Link prediction on undirected simple graphs.
//!
//! The crate is `no_std` (with `alloc`) so the algorithms can be embedded
//! anywhere; file formats, configuration and the command line live in the
//! `linkpred` companion crate.
//!
//! Pipeline building blocks:
//!
//! * [`graph`] and [`sbm`]: immutable graphs, node attribute tables and a
//!   seeded stochastic block model generator.
//! * [`sampler`]: train/test edge split with balanced synthetic non-links.
//! * [`heuristics`]: common neighbours, Jaccard, Adamic/Adar, resource
//!   allocation and a random baseline.
//! * [`louvain`]: modularity and Louvain community detection.
//! * [`features`]: scaling, one-hot, TF-IDF and community augmentation.
//! * [`autodiff`]: a small reverse-mode tape and the Adam optimizer.
//! * [`gnn`]: GAT, GATv2, GCN, GCNII and GraphSAGE link predictors.
//! * [`linear`]: logistic regression on pair features.
//! * [`metrics`]: confusion matrices, precision/recall/F1, AUC and ARI.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod autodiff;
mod error;
pub mod features;
pub mod gnn;
pub mod graph;
pub mod heuristics;
pub mod linear;
pub mod louvain;
pub(crate) mod math;
pub mod metrics;
pub mod rng;
pub mod sampler;
pub mod sbm;

pub use error::{Error, Result};
pub use graph::{Graph, NodeTable};
pub use louvain::Partition;
