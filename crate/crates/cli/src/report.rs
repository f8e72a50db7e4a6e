//! Writes an experiment report to a directory.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::checkpoint;
use crate::error::{Result, Stage, StageExt};
use crate::experiment::ExperimentReport;
use crate::io;

pub const NOT_IMPLEMENTED: &str = "not implemented";

fn file_stem(method: &str) -> String {
    method.replace('+', "_")
}

/// `method,precision,recall,f1,auc` with one row per method.
pub fn metrics_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("method,precision,recall,f1,auc\n");
    for row in &report.rows {
        match (&row.metrics, row.auc) {
            (Some(m), Some(auc)) => {
                let _ = writeln!(
                    out,
                    "{},{:.6},{:.6},{:.6},{:.6}",
                    row.method, m.precision, m.recall, m.f1, auc
                );
            }
            _ => {
                let _ = writeln!(out, "{0},{1},{1},{1},{1}", row.method, NOT_IMPLEMENTED);
            }
        }
    }
    out
}

/// Writes `metrics.csv`, `confusion_<method>.csv`, `loss_<method>.csv`,
/// `manifest.json`, the split, the community assignment, the fitted
/// feature pipeline and model checkpoints.
pub fn emit_report(report: &ExperimentReport, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).stage_with(Stage::Output, || out_dir.display().to_string())?;
    let write = |name: &str, text: &str| {
        let path = out_dir.join(name);
        fs::write(&path, text).stage_with(Stage::Output, || path.display().to_string())
    };
    write("metrics.csv", &metrics_csv(report))?;
    for row in &report.rows {
        let stem = file_stem(&row.method.to_string());
        if let Some(cm) = &row.confusion {
            let text = format!(
                "actual,predicted_0,predicted_1\n0,{},{}\n1,{},{}\n",
                cm.tn, cm.fp, cm.fn_, cm.tp
            );
            write(&format!("confusion_{stem}.csv"), &text)?;
        }
        if let Some(loss) = &row.loss {
            let mut text = String::from("epoch,loss\n");
            for (i, l) in loss.iter().enumerate() {
                let _ = writeln!(text, "{},{l}", i + 1);
            }
            write(&format!("loss_{stem}.csv"), &text)?;
        }
        if let Some(model) = &row.model {
            let dir = out_dir.join("checkpoints");
            fs::create_dir_all(&dir).stage(Stage::Output)?;
            checkpoint::save(&dir.join(format!("{stem}.json")), &model.model)?;
        }
    }
    io::write_split(
        &out_dir.join("split.csv"),
        &report.table,
        &[&report.train, &report.test],
    )?;
    if let Some(p) = &report.partition {
        io::write_communities(&out_dir.join("communities.csv"), &report.table, p)?;
    }
    if let Some(pipeline) = &report.pipeline {
        io::write_json(&out_dir.join("features.json"), pipeline)?;
    }
    let results: Vec<_> = report.rows.iter().collect();
    io::write_json(&out_dir.join("results.json"), &results)?;
    io::write_json(&out_dir.join("manifest.json"), &report.manifest)
}
