//! File formats, configuration and the experiment runner behind the
//! `linkpred` command.
//!
//! ```no_run
//! use linkpred::{emit_report, run_experiment, ExperimentConfig};
//!
//! let config = ExperimentConfig::from_json(r#"{
//!     "input": {"kind": "sbm", "blocks": [50, 50, 50], "p_in": 0.1, "p_out": 0.005},
//!     "methods": ["common_neighbors", "gcn", "gcn+louvain"]
//! }"#).unwrap();
//! let report = run_experiment(&config).unwrap();
//! emit_report(&report, std::path::Path::new("out")).unwrap();
//! ```

pub mod checkpoint;
pub mod config;
pub mod error;
pub mod experiment;
pub mod io;
pub mod report;

pub use config::{ExperimentConfig, InputSpec, Method, MethodOverride};
pub use error::{HarnessError, Stage};
pub use experiment::{run_experiment, ExperimentReport, MethodResult};
pub use report::emit_report;
