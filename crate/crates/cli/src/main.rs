use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use linkpred::error::{Result, Stage, StageExt};
use linkpred::experiment::run_config_file;
use linkpred::{emit_report, io};
use linkpred_core::sampler::build_datasets;
use linkpred_core::sbm::{generate_sbm, BlockModelSpec};
use linkpred_core::{Graph, NodeTable};

#[derive(Parser)]
#[command(
    name = "linkpred",
    version,
    about = "Link prediction with heuristics, logistic regression and GNNs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write the report.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Replaces the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sample a stochastic block model and write its edge list.
    GenerateSbm {
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        #[arg(long)]
        p_in: f64,
        #[arg(long)]
        p_out: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split an edge list into balanced train and test pairs.
    Split {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        test_fraction: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, seed } => {
            let report = run_config_file(&config, seed)?;
            emit_report(&report, &out)?;
            for row in &report.rows {
                match (&row.metrics, row.auc) {
                    (Some(m), Some(auc)) => println!(
                        "{:<30} precision {:.3}  recall {:.3}  f1 {:.3}  auc {:.3}",
                        row.label, m.precision, m.recall, m.f1, auc
                    ),
                    _ => println!("{:<30} not implemented", row.label),
                }
            }
            Ok(())
        }
        Command::GenerateSbm {
            blocks,
            p_in,
            p_out,
            seed,
            out,
        } => {
            let spec = BlockModelSpec {
                block_sizes: blocks,
                p_in,
                p_out,
                seed,
            };
            let (g, _) = generate_sbm(&spec).stage(Stage::Config)?;
            let table = NodeTable::from_ids((0..g.node_count()).map(|i| format!("n{i}"))).stage(Stage::Ingest)?;
            io::write_edges(&out, &g, &table)
        }
        Command::Split {
            edges,
            test_fraction,
            seed,
            out,
        } => {
            let mut table = NodeTable::new();
            let pairs = io::read_edges(&edges, &mut table, false)?;
            let g = Graph::with_nodes(table.len(), &pairs).stage(Stage::Ingest)?;
            let (train, test) = build_datasets(&g, test_fraction, seed).stage(Stage::Split)?;
            io::write_split(&out, &table, &[&train, &test])
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("linkpred: {e}");
            ExitCode::from(2)
        }
    }
}
