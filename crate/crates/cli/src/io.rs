//! File formats: edge lists, node attribute tables, splits and community dumps.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use linkpred_core::graph::{ColumnData, ColumnKind};
use linkpred_core::sampler::{canonical, LabeledPairSet, Pair, Role};
use linkpred_core::{Graph, NodeTable, Partition};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result, Stage, StageExt};

fn ingest_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::new(Stage::Ingest, format!("{}: {e}", path.display()))
}

/// Reads a `source,target` edge list. Ids already present in `table` keep
/// their index; new ids are appended unless `table` is frozen.
pub fn read_edges(path: &Path, table: &mut NodeTable, frozen: bool) -> Result<Vec<Pair>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| ingest_err(path, e))?;
    let headers = reader.headers().map_err(|e| ingest_err(path, e))?.clone();
    if headers.len() < 2 || &headers[0] != "source" || &headers[1] != "target" {
        return Err(ingest_err(path, "expected header `source,target`"));
    }
    let mut pairs = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ingest_err(path, e))?;
        let mut ends = [0usize; 2];
        for (slot, id) in ends.iter_mut().zip([&record[0], &record[1]]) {
            *slot = match table.index_of(id) {
                Some(i) => i,
                None if frozen => {
                    return Err(ingest_err(path, format!("row {}: unknown node id {id:?}", line + 2)));
                }
                None => table.intern(id),
            };
        }
        if ends[0] == ends[1] {
            return Err(ingest_err(
                path,
                format!("row {}: self-loop on {:?}", line + 2, &record[0]),
            ));
        }
        pairs.push((ends[0], ends[1]));
    }
    Ok(pairs)
}

pub fn write_edges(path: &Path, g: &Graph, table: &NodeTable) -> Result<()> {
    let mut w = csv::Writer::from_path(path).stage(Stage::Output)?;
    w.write_record(["source", "target"]).stage(Stage::Output)?;
    for (u, v) in g.edges() {
        w.write_record([id(table, u), id(table, v)]).stage(Stage::Output)?;
    }
    w.flush().stage(Stage::Output)
}

fn id(table: &NodeTable, i: usize) -> &str {
    table.external_id(i).expect("node index within table")
}

/// Sidecar schema for a node TSV: column name to kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSchema {
    pub columns: BTreeMap<String, ColumnKind>,
}

/// `nodes.tsv` -> `nodes.schema.json`.
pub fn default_schema_path(nodes: &Path) -> PathBuf {
    nodes.with_extension("schema.json")
}

pub fn read_schema(path: &Path) -> Result<NodeSchema> {
    let file = File::open(path).map_err(|e| ingest_err(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| ingest_err(path, e))
}

/// Reads a node attribute TSV whose first column holds node ids.
pub fn read_nodes(path: &Path, schema: &NodeSchema) -> Result<NodeTable> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .from_path(path)
        .map_err(|e| ingest_err(path, e))?;
    let headers = reader.headers().map_err(|e| ingest_err(path, e))?.clone();
    if headers.is_empty() {
        return Err(ingest_err(path, "missing header row"));
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_owned).collect();
    let kinds = names
        .iter()
        .map(|name| {
            schema
                .columns
                .get(name)
                .copied()
                .ok_or_else(|| ingest_err(path, format!("column {name:?} has no kind in the schema")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ids = Vec::new();
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); names.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ingest_err(path, e))?;
        if record.len() != headers.len() {
            return Err(ingest_err(
                path,
                format!("row {}: {} fields, expected {}", line + 2, record.len(), headers.len()),
            ));
        }
        ids.push(record[0].to_owned());
        for (c, value) in record.iter().skip(1).enumerate() {
            cells[c].push(value.to_owned());
        }
    }
    let mut table = NodeTable::from_ids(ids).map_err(|e| ingest_err(path, e))?;
    for ((name, kind), values) in names.into_iter().zip(kinds).zip(cells) {
        let data = match kind {
            ColumnKind::Numeric => ColumnData::Numeric(
                values
                    .iter()
                    .enumerate()
                    .map(|(row, v)| {
                        v.trim().parse::<f64>().map_err(|_| {
                            ingest_err(path, format!("row {}: column {name:?}: {v:?} is not a number", row + 2))
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            ColumnKind::Categorical => ColumnData::Categorical(values),
            ColumnKind::Text => ColumnData::Text(values),
        };
        table.push_column(name, data).map_err(|e| ingest_err(path, e))?;
    }
    Ok(table)
}

pub fn write_nodes(path: &Path, table: &NodeTable) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(b'\t')
        .quote_style(csv::QuoteStyle::Never)
        .from_path(path)
        .stage(Stage::Output)?;
    let mut header = vec!["id".to_owned()];
    header.extend(table.columns().iter().map(|c| c.name.clone()));
    w.write_record(&header).stage(Stage::Output)?;
    for (i, ext) in table.external_ids().iter().enumerate() {
        let mut row = vec![ext.clone()];
        for col in table.columns() {
            row.push(match &col.data {
                ColumnData::Numeric(v) => v[i].to_string(),
                ColumnData::Categorical(v) | ColumnData::Text(v) => v[i].replace(['\t', '\n'], " "),
            });
        }
        w.write_record(&row).stage(Stage::Output)?;
    }
    w.flush().stage(Stage::Output)?;
    let schema = NodeSchema {
        columns: table
            .columns()
            .iter()
            .map(|c| (c.name.clone(), c.data.kind()))
            .collect(),
    };
    write_json(&default_schema_path(path), &schema)
}

fn role_name(role: Role) -> &'static str {
    match role {
        Role::Train => "train",
        Role::Test => "test",
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SplitRow {
    u: String,
    v: String,
    label: u8,
    role: String,
}

pub fn write_split(path: &Path, table: &NodeTable, sets: &[&LabeledPairSet]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).stage(Stage::Output)?;
    for set in sets {
        for ((u, v), label) in set.iter() {
            w.serialize(SplitRow {
                u: id(table, u).to_owned(),
                v: id(table, v).to_owned(),
                label,
                role: role_name(set.role).to_owned(),
            })
            .stage(Stage::Output)?;
        }
    }
    w.flush().stage(Stage::Output)
}

/// Reads a `u,v,label,role` file back into train and test sets.
pub fn read_split(path: &Path, table: &NodeTable) -> Result<(LabeledPairSet, LabeledPairSet)> {
    let split_err = |e: &dyn std::fmt::Display| HarnessError::new(Stage::Split, format!("{}: {e}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| split_err(&e))?;
    let mut train = LabeledPairSet {
        pairs: vec![],
        labels: vec![],
        role: Role::Train,
    };
    let mut test = LabeledPairSet {
        pairs: vec![],
        labels: vec![],
        role: Role::Test,
    };
    for row in reader.deserialize::<SplitRow>() {
        let row = row.map_err(|e| split_err(&e))?;
        let lookup = |ext: &str| {
            table
                .index_of(ext)
                .ok_or_else(|| split_err(&format!("unknown node id {ext:?}")))
        };
        let pair = canonical(lookup(&row.u)?, lookup(&row.v)?);
        if row.label > 1 {
            return Err(split_err(&format!("label {} is not binary", row.label)));
        }
        let set = match row.role.as_str() {
            "train" => &mut train,
            "test" => &mut test,
            other => return Err(split_err(&format!("unknown role {other:?}"))),
        };
        set.pairs.push(pair);
        set.labels.push(row.label);
    }
    Ok((train, test))
}

pub fn write_communities(path: &Path, table: &NodeTable, p: &Partition) -> Result<()> {
    let mut w = csv::Writer::from_path(path).stage(Stage::Output)?;
    w.write_record(["node", "community"]).stage(Stage::Output)?;
    for (i, &c) in p.labels().iter().enumerate() {
        w.write_record([id(table, i), &c.to_string()]).stage(Stage::Output)?;
    }
    w.flush().stage(Stage::Output)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).stage_with(Stage::Output, || path.display().to_string())?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).stage(Stage::Output)?;
    w.write_all(b"\n").stage(Stage::Output)?;
    w.flush().stage(Stage::Output)
}
