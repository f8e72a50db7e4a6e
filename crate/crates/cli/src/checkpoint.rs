//! Model checkpoints: a JSON header plus a little-endian `f64` blob.

use std::fs;
use std::path::{Path, PathBuf};

use linkpred_core::autodiff::Matrix;
use linkpred_core::gnn::{Architecture, GnnModel, ModelConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result, Stage, StageExt};

pub const FORMAT: &str = "linkpred-checkpoint";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    /// Offset into the blob in values, not bytes.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub format: String,
    pub version: u32,
    pub architecture: Architecture,
    pub seed: u64,
    pub in_dim: usize,
    pub config: ModelConfig,
    pub tensors: Vec<TensorEntry>,
    /// File name of the blob, next to the header.
    pub blob: String,
    pub blob_sha256: String,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn blob_path(header_path: &Path) -> PathBuf {
    header_path.with_extension("bin")
}

/// Writes `<path>` (JSON) and `<path>.bin` beside it.
pub fn save(path: &Path, model: &GnnModel) -> Result<()> {
    let mut blob = Vec::with_capacity(model.parameter_count() * 8);
    let mut tensors = Vec::with_capacity(model.params.len());
    let mut offset = 0;
    for (name, p) in model.names.iter().zip(&model.params) {
        tensors.push(TensorEntry {
            name: name.clone(),
            rows: p.rows(),
            cols: p.cols(),
            offset,
        });
        offset += p.data().len();
        for v in p.data() {
            blob.extend_from_slice(&v.to_le_bytes());
        }
    }
    let bin = blob_path(path);
    let header = CheckpointHeader {
        format: FORMAT.into(),
        version: VERSION,
        architecture: model.config.architecture,
        seed: model.config.seed,
        in_dim: model.in_dim,
        config: model.config.clone(),
        tensors,
        blob: bin.file_name().and_then(|s| s.to_str()).unwrap_or_default().to_owned(),
        blob_sha256: hex(&Sha256::digest(&blob)),
    };
    fs::write(&bin, &blob).stage_with(Stage::Output, || bin.display().to_string())?;
    crate::io::write_json(path, &header)
}

pub fn load(path: &Path) -> Result<GnnModel> {
    let bad = |msg: String| HarnessError::new(Stage::Ingest, format!("{}: {msg}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let header: CheckpointHeader = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if header.format != FORMAT || header.version != VERSION {
        return Err(bad(format!(
            "unsupported checkpoint {} v{}",
            header.format, header.version
        )));
    }
    let bin = path.with_file_name(&header.blob);
    let blob = fs::read(&bin).map_err(|e| bad(format!("{}: {e}", bin.display())))?;
    if hex(&Sha256::digest(&blob)) != header.blob_sha256 {
        return Err(bad("parameter blob checksum mismatch".into()));
    }
    if blob.len() % 8 != 0 {
        return Err(bad("parameter blob length is not a multiple of 8".into()));
    }
    let values: Vec<f64> = blob
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    let mut model = GnnModel::new(header.config.clone(), header.in_dim).map_err(|e| bad(e.to_string()))?;
    if model.params.len() != header.tensors.len() {
        return Err(bad("tensor count does not match the architecture".into()));
    }
    for (slot, entry) in model.params.iter_mut().zip(&header.tensors) {
        let len = entry.rows * entry.cols;
        let data = values
            .get(entry.offset..entry.offset + len)
            .ok_or_else(|| bad(format!("tensor {} runs past the blob", entry.name)))?;
        if slot.shape() != (entry.rows, entry.cols) {
            return Err(bad(format!(
                "tensor {} has shape {:?}, expected {:?}",
                entry.name,
                (entry.rows, entry.cols),
                slot.shape()
            )));
        }
        *slot = Matrix::from_vec(entry.rows, entry.cols, data.to_vec()).map_err(|e| bad(e.to_string()))?;
    }
    Ok(model)
}
