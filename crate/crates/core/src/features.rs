//! Node feature engineering.
//!
//! Numeric columns are standard-scaled, categorical columns one-hot encoded
//! and text columns TF-IDF vectorised; the blocks are concatenated in that
//! order. Transformers are fitted on a subset of rows (the training nodes)
//! and then applied to every node.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use crate::autodiff::Matrix;
use crate::graph::{ColumnData, ColumnKind, NodeTable};
use crate::louvain::{one_hot_communities, Partition};
use crate::math::{ln, sqrt};
use crate::sampler::Pair;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Numeric,
    Categorical,
    Text,
    Community,
    /// One-hot node identity.
    Identity,
}

impl From<ColumnKind> for Provenance {
    fn from(kind: ColumnKind) -> Self {
        match kind {
            ColumnKind::Numeric => Provenance::Numeric,
            ColumnKind::Categorical => Provenance::Categorical,
            ColumnKind::Text => Provenance::Text,
        }
    }
}

/// Row-major sparse matrix (CSR). Stores no explicit zeros; column indices
/// increase strictly within a row; values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n_cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    provenance: Vec<Provenance>,
}

impl FeatureMatrix {
    pub fn empty(n_rows: usize) -> Self {
        FeatureMatrix {
            n_cols: 0,
            indptr: vec![0; n_rows + 1],
            indices: Vec::new(),
            values: Vec::new(),
            provenance: Vec::new(),
        }
    }

    /// Builds from per-row `(column, value)` entries; zeros are dropped.
    pub fn from_sparse_rows<I, R>(n_cols: usize, rows: I, provenance: Provenance) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = (usize, f64)>,
    {
        let mut m = FeatureMatrix {
            n_cols,
            indptr: vec![0],
            indices: Vec::new(),
            values: Vec::new(),
            provenance: vec![provenance; n_cols],
        };
        for row in rows {
            let start = m.indices.len();
            for (c, v) in row {
                if c >= n_cols {
                    return Err(Error::InvalidParameter(format!("column {c} out of range {n_cols}")));
                }
                if !v.is_finite() {
                    return Err(Error::NonFinite("feature matrix"));
                }
                if m.indices.len() > start && m.indices[m.indices.len() - 1] >= c {
                    return Err(Error::InvalidParameter("row columns must strictly increase".into()));
                }
                if v != 0.0 {
                    m.indices.push(c);
                    m.values.push(v);
                }
            }
            m.indptr.push(m.indices.len());
        }
        Ok(m)
    }

    pub fn from_dense_rows(rows: &[Vec<f64>], provenance: Provenance) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::LengthMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        Self::from_sparse_rows(n_cols, rows.iter().map(|r| r.iter().copied().enumerate()), provenance)
    }

    pub fn n_rows(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn dense_row(&self, r: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n_cols];
        let (idx, val) = self.row(r);
        for (&c, &v) in idx.iter().zip(val) {
            out[c] = v;
        }
        out
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows()).map(|r| self.dense_row(r)).collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n_rows(), self.n_cols);
        for r in 0..self.n_rows() {
            let (idx, val) = self.row(r);
            for (&c, &v) in idx.iter().zip(val) {
                m[(r, c)] = v;
            }
        }
        m
    }

    /// Horizontal concatenation; `other`'s columns follow `self`'s.
    pub fn hstack(&self, other: &FeatureMatrix) -> Result<FeatureMatrix> {
        if self.n_rows() != other.n_rows() {
            return Err(Error::LengthMismatch {
                expected: self.n_rows(),
                found: other.n_rows(),
            });
        }
        let mut out = FeatureMatrix {
            n_cols: self.n_cols + other.n_cols,
            indptr: vec![0],
            indices: Vec::with_capacity(self.nnz() + other.nnz()),
            values: Vec::with_capacity(self.nnz() + other.nnz()),
            provenance: self.provenance.iter().chain(&other.provenance).copied().collect(),
        };
        for r in 0..self.n_rows() {
            let (i1, v1) = self.row(r);
            let (i2, v2) = other.row(r);
            out.indices.extend_from_slice(i1);
            out.values.extend_from_slice(v1);
            out.indices.extend(i2.iter().map(|&c| c + self.n_cols));
            out.values.extend_from_slice(v2);
            out.indptr.push(out.indices.len());
        }
        Ok(out)
    }

    pub fn check_invariants(&self) -> bool {
        (0..self.n_rows()).all(|r| {
            let (idx, val) = self.row(r);
            idx.windows(2).all(|w| w[0] < w[1])
                && idx.iter().all(|&c| c < self.n_cols)
                && val.iter().all(|v| v.is_finite() && *v != 0.0)
        }) && self.provenance.len() == self.n_cols
    }
}

/// Mean and population standard deviation of a numeric column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardScaler {
    pub mean: f64,
    pub std: f64,
}

impl StandardScaler {
    pub fn fit(values: &[f64]) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("numeric column"));
        }
        if values.is_empty() {
            return Ok(StandardScaler { mean: 0.0, std: 0.0 });
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Ok(StandardScaler { mean, std: sqrt(var) })
    }

    /// Zero-variance columns map to zero.
    pub fn transform(&self, values: &[f64]) -> Result<Vec<f64>> {
        values
            .iter()
            .map(|&v| {
                if !v.is_finite() {
                    Err(Error::NonFinite("numeric column"))
                } else if self.std == 0.0 {
                    Ok(0.0)
                } else {
                    Ok((v - self.mean) / self.std)
                }
            })
            .collect()
    }
}

pub fn standard_scale(column: &[f64]) -> Result<Vec<f64>> {
    StandardScaler::fit(column)?.transform(column)
}

/// Sorted category list; unseen categories encode to an all-zero row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneHotEncoder {
    pub categories: Vec<String>,
}

impl OneHotEncoder {
    pub fn fit<'a>(values: impl IntoIterator<Item = &'a str>) -> Self {
        let mut categories: Vec<String> = values.into_iter().map(String::from).collect();
        categories.sort_unstable();
        categories.dedup();
        OneHotEncoder { categories }
    }

    pub fn transform<S: AsRef<str>>(&self, values: &[S]) -> FeatureMatrix {
        let rows = values.iter().map(|v| {
            self.categories
                .binary_search_by(|c| c.as_str().cmp(v.as_ref()))
                .ok()
                .map(|c| (c, 1.0))
        });
        FeatureMatrix::from_sparse_rows(self.categories.len(), rows, Provenance::Categorical)
            .expect("category index in range")
    }
}

pub fn one_hot_encode<S: AsRef<str>>(column: &[S]) -> FeatureMatrix {
    OneHotEncoder::fit(column.iter().map(AsRef::as_ref)).transform(column)
}

/// Lowercases, splits on non-alphanumeric runs and drops tokens shorter
/// than two characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(|t| t.to_lowercase())
        .collect()
}

/// TF-IDF with raw counts, smoothed idf `ln((1 + N) / (1 + df)) + 1` and
/// L2-normalised rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfVectorizer {
    pub vocabulary: Vec<String>,
    pub idf: Vec<f64>,
}

impl TfidfVectorizer {
    /// `max_vocabulary` keeps the terms with the highest document frequency
    /// (ties broken lexicographically).
    pub fn fit<S: AsRef<str>>(documents: &[Vec<S>], max_vocabulary: Option<usize>) -> Self {
        let mut df: alloc::collections::BTreeMap<&str, usize> = Default::default();
        for doc in documents {
            let mut terms: Vec<&str> = doc.iter().map(AsRef::as_ref).collect();
            terms.sort_unstable();
            terms.dedup();
            for t in terms {
                *df.entry(t).or_insert(0) += 1;
            }
        }
        let mut entries: Vec<(&str, usize)> = df.into_iter().collect();
        if let Some(limit) = max_vocabulary {
            if entries.len() > limit {
                entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
                entries.truncate(limit);
                entries.sort_by(|a, b| a.0.cmp(b.0));
            }
        }
        let n = documents.len() as f64;
        TfidfVectorizer {
            vocabulary: entries.iter().map(|(t, _)| t.to_string()).collect(),
            idf: entries
                .iter()
                .map(|&(_, d)| ln((1.0 + n) / (1.0 + d as f64)) + 1.0)
                .collect(),
        }
    }

    pub fn transform<S: AsRef<str>>(&self, documents: &[Vec<S>]) -> FeatureMatrix {
        let rows = documents.iter().map(|doc| {
            let mut counts: Vec<(usize, f64)> = Vec::new();
            let mut ids: Vec<usize> = doc
                .iter()
                .filter_map(|t| self.vocabulary.binary_search_by(|v| v.as_str().cmp(t.as_ref())).ok())
                .collect();
            ids.sort_unstable();
            for id in ids {
                match counts.last_mut() {
                    Some((c, n)) if *c == id => *n += 1.0,
                    _ => counts.push((id, 1.0)),
                }
            }
            for (c, v) in counts.iter_mut() {
                *v *= self.idf[*c];
            }
            let norm = sqrt(counts.iter().map(|(_, v)| v * v).sum::<f64>());
            if norm > 0.0 {
                for (_, v) in counts.iter_mut() {
                    *v /= norm;
                }
            }
            counts
        });
        FeatureMatrix::from_sparse_rows(self.vocabulary.len(), rows, Provenance::Text)
            .expect("vocabulary index in range")
    }
}

pub fn tfidf<S: AsRef<str>>(documents: &[Vec<S>]) -> FeatureMatrix {
    TfidfVectorizer::fit(documents, None).transform(documents)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Transformer {
    Numeric(StandardScaler),
    Categorical(OneHotEncoder),
    Text(TfidfVectorizer),
}

impl Transformer {
    pub fn width(&self) -> usize {
        match self {
            Transformer::Numeric(_) => 1,
            Transformer::Categorical(e) => e.categories.len(),
            Transformer::Text(t) => t.vocabulary.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedColumn {
    pub name: String,
    pub transformer: Transformer,
}

/// Fitted column transformers in output order, persisted for exact replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturePipeline {
    pub columns: Vec<FittedColumn>,
}

fn kind_rank(kind: ColumnKind) -> u8 {
    match kind {
        ColumnKind::Numeric => 0,
        ColumnKind::Categorical => 1,
        ColumnKind::Text => 2,
    }
}

fn select<T: Clone>(values: &[T], rows: Option<&[usize]>) -> Vec<T> {
    match rows {
        Some(rows) => rows.iter().map(|&r| values[r].clone()).collect(),
        None => values.to_vec(),
    }
}

impl FeaturePipeline {
    /// Fits every column on `fit_rows` (all rows when `None`).
    pub fn fit(table: &NodeTable, fit_rows: Option<&[usize]>, max_vocabulary: Option<usize>) -> Result<Self> {
        if table.is_empty() || table.columns().is_empty() {
            return Err(Error::EmptyTable);
        }
        if let Some(rows) = fit_rows {
            if let Some(&bad) = rows.iter().find(|&&r| r >= table.len()) {
                return Err(Error::NodeOutOfRange {
                    index: bad,
                    n: table.len(),
                });
            }
        }
        let mut ordered: Vec<_> = table.columns().iter().collect();
        ordered.sort_by_key(|c| kind_rank(c.data.kind()));
        let columns = ordered
            .into_iter()
            .map(|col| {
                let transformer = match &col.data {
                    ColumnData::Numeric(v) => Transformer::Numeric(StandardScaler::fit(&select(v, fit_rows))?),
                    ColumnData::Categorical(v) => {
                        let subset = select(v, fit_rows);
                        Transformer::Categorical(OneHotEncoder::fit(subset.iter().map(String::as_str)))
                    }
                    ColumnData::Text(v) => {
                        let docs: Vec<Vec<String>> = select(v, fit_rows).iter().map(|d| tokenize(d)).collect();
                        Transformer::Text(TfidfVectorizer::fit(&docs, max_vocabulary))
                    }
                };
                Ok(FittedColumn {
                    name: col.name.clone(),
                    transformer,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FeaturePipeline { columns })
    }

    pub fn n_cols(&self) -> usize {
        self.columns.iter().map(|c| c.transformer.width()).sum()
    }

    pub fn transform(&self, table: &NodeTable) -> Result<FeatureMatrix> {
        if table.is_empty() {
            return Err(Error::EmptyTable);
        }
        let mut out = FeatureMatrix::empty(table.len());
        for fitted in &self.columns {
            let col = table
                .columns()
                .iter()
                .find(|c| c.name == fitted.name)
                .ok_or_else(|| Error::InvalidParameter(format!("missing column {:?}", fitted.name)))?;
            let block = match (&fitted.transformer, &col.data) {
                (Transformer::Numeric(s), ColumnData::Numeric(v)) => {
                    let scaled = s.transform(v)?;
                    FeatureMatrix::from_sparse_rows(1, scaled.iter().map(|&x| Some((0, x))), Provenance::Numeric)?
                }
                (Transformer::Categorical(e), ColumnData::Categorical(v)) => e.transform(v),
                (Transformer::Text(t), ColumnData::Text(v)) => {
                    let docs: Vec<Vec<String>> = v.iter().map(|d| tokenize(d)).collect();
                    t.transform(&docs)
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "column {:?} changed kind since fitting",
                        fitted.name
                    )))
                }
            };
            out = out.hstack(&block)?;
        }
        Ok(out)
    }
}

/// Fits on every node and transforms the table.
pub fn node_feature_matrix(table: &NodeTable) -> Result<FeatureMatrix> {
    FeaturePipeline::fit(table, None, None)?.transform(table)
}

/// One-hot node identity, `n x n`.
pub fn identity_features(n: usize) -> FeatureMatrix {
    FeatureMatrix::from_sparse_rows(n, (0..n).map(|i| Some((i, 1.0))), Provenance::Identity)
        .expect("diagonal entries are in range")
}

/// Appends the one-hot community block; the original columns are untouched.
pub fn augment_with_communities(x: &FeatureMatrix, p: &Partition) -> Result<FeatureMatrix> {
    if x.n_rows() != p.len() {
        return Err(Error::LengthMismatch {
            expected: x.n_rows(),
            found: p.len(),
        });
    }
    x.hstack(&one_hot_communities(p))
}

/// Elementwise product of two node feature vectors.
pub fn pair_features(x_u: &[f64], x_v: &[f64]) -> Result<Vec<f64>> {
    if x_u.len() != x_v.len() {
        return Err(Error::LengthMismatch {
            expected: x_u.len(),
            found: x_v.len(),
        });
    }
    Ok(x_u.iter().zip(x_v).map(|(a, b)| a * b).collect())
}

/// Sparse pair-feature rows, one per pair.
pub fn pair_feature_matrix(x: &FeatureMatrix, pairs: &[Pair]) -> Result<FeatureMatrix> {
    for &(u, v) in pairs {
        for node in [u, v] {
            if node >= x.n_rows() {
                return Err(Error::NodeOutOfRange {
                    index: node,
                    n: x.n_rows(),
                });
            }
        }
    }
    let rows = pairs.iter().map(|&(u, v)| {
        let (iu, vu) = x.row(u);
        let (iv, vv) = x.row(v);
        let mut out = Vec::new();
        let (mut a, mut b) = (0, 0);
        while a < iu.len() && b < iv.len() {
            match iu[a].cmp(&iv[b]) {
                core::cmp::Ordering::Less => a += 1,
                core::cmp::Ordering::Greater => b += 1,
                core::cmp::Ordering::Equal => {
                    out.push((iu[a], vu[a] * vv[b]));
                    a += 1;
                    b += 1;
                }
            }
        }
        out
    });
    let mut m = FeatureMatrix::from_sparse_rows(x.n_cols(), rows, Provenance::Numeric)?;
    m.provenance = x.provenance.clone();
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn scaling() {
        let s = standard_scale(&[1.0, 2.0, 3.0]).unwrap();
        let z = sqrt(1.5);
        assert!(close(&s, &[-z, 0.0, z], 1e-12));
        assert!((z - 1.224745).abs() < 1e-6);
        assert_eq!(standard_scale(&[5.0, 5.0, 5.0]).unwrap(), [0.0, 0.0, 0.0]);
        assert!(standard_scale(&[]).unwrap().is_empty());
        assert_eq!(
            standard_scale(&[1.0, f64::NAN]).unwrap_err(),
            Error::NonFinite("numeric column")
        );
    }

    #[test]
    fn one_hot() {
        let m = one_hot_encode(&["x", "y", "x"]);
        assert_eq!(m.to_dense_rows(), [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]);
        let single = one_hot_encode(&["a", "a"]);
        assert_eq!(single.to_dense_rows(), [[1.0], [1.0]]);
        let enc = OneHotEncoder::fit(["b", "a"]);
        assert_eq!(enc.transform(&["c", "b"]).to_dense_rows(), [[0.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn tfidf_two_docs() {
        let docs = [vec!["a", "b"], vec!["a", "c"]];
        let v = TfidfVectorizer::fit(&docs, None);
        assert_eq!(v.vocabulary, ["a", "b", "c"]);
        assert_eq!(v.idf[0], 1.0);
        assert!((v.idf[1] - (ln(1.5) + 1.0)).abs() < 1e-15);
        assert!((v.idf[1] - 1.405465).abs() < 1e-6);
        let row = v.transform(&docs).dense_row(0);
        assert!(close(&row, &[0.579739, 0.814802, 0.0], 1e-6));
    }

    #[test]
    fn tfidf_rows_unit_norm_or_empty() {
        let docs = [vec!["x", "y", "y"], vec![], vec!["z"]];
        let m = tfidf(&docs);
        for r in 0..3 {
            let (_, v) = m.row(r);
            let norm: f64 = v.iter().map(|x| x * x).sum();
            assert!(v.is_empty() || (norm.sqrt() - 1.0).abs() < 1e-9);
        }
        assert_eq!(m.row(1).0.len(), 0);
    }

    #[test]
    fn vocabulary_cap_keeps_frequent_terms() {
        let docs = [vec!["a", "b"], vec!["b", "c"], vec!["b", "a"]];
        let v = TfidfVectorizer::fit(&docs, Some(2));
        assert_eq!(v.vocabulary, ["a", "b"]);
    }

    #[test]
    fn tokenizer() {
        assert_eq!(
            tokenize("Graph-based A/B link_prediction 42x"),
            ["graph", "based", "link", "prediction", "42x"]
        );
    }

    fn table() -> NodeTable {
        let mut t = NodeTable::from_ids(["a", "b", "c"]).unwrap();
        t.push_column(
            "doc",
            ColumnData::Text(vec!["red fish".into(), "blue fish".into(), "red".into()]),
        )
        .unwrap();
        t.push_column(
            "kind",
            ColumnData::Categorical(vec!["p".into(), "q".into(), "p".into()]),
        )
        .unwrap();
        t.push_column("year", ColumnData::Numeric(vec![1.0, 2.0, 3.0])).unwrap();
        t
    }

    #[test]
    fn node_features_concatenate_in_kind_order() {
        let x = node_feature_matrix(&table()).unwrap();
        // 1 numeric + 2 categories + vocabulary {blue, fish, red}
        assert_eq!(x.n_cols(), 6);
        assert_eq!(
            x.provenance(),
            &[
                Provenance::Numeric,
                Provenance::Categorical,
                Provenance::Categorical,
                Provenance::Text,
                Provenance::Text,
                Provenance::Text
            ]
        );
        assert!(x.check_invariants());
        assert!(node_feature_matrix(&NodeTable::new()).is_err());
        let no_columns = NodeTable::from_ids(["a"]).unwrap();
        assert_eq!(node_feature_matrix(&no_columns).unwrap_err(), Error::EmptyTable);
    }

    #[test]
    fn fit_on_subset_then_transform_all() {
        let t = table();
        let pipe = FeaturePipeline::fit(&t, Some(&[0, 2]), None).unwrap();
        // category "q" and token "blue" are unseen during fitting
        assert_eq!(pipe.n_cols(), 1 + 1 + 2);
        let x = pipe.transform(&t).unwrap();
        assert_eq!(x.n_rows(), 3);
        let refit = FeaturePipeline::fit(&t, None, None).unwrap();
        assert_eq!(refit.transform(&t).unwrap(), node_feature_matrix(&t).unwrap());
    }

    #[test]
    fn augmentation_grows_by_k() {
        let x = node_feature_matrix(&table()).unwrap();
        let p = Partition::from_labels(&[0, 1, 0]);
        let aug = augment_with_communities(&x, &p).unwrap();
        assert_eq!(aug.n_cols(), x.n_cols() + 2);
        for r in 0..3 {
            assert_eq!(&aug.dense_row(r)[..x.n_cols()], &x.dense_row(r)[..]);
        }
        let one = augment_with_communities(&x, &Partition::single(3)).unwrap();
        assert_eq!(one.n_cols(), x.n_cols() + 1);
        assert!(augment_with_communities(&x, &Partition::single(4)).is_err());
    }

    #[test]
    fn hadamard_pairs() {
        assert_eq!(pair_features(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), [3.0, 8.0]);
        assert_eq!(pair_features(&[1.0, 2.0], &[0.0, 0.0]).unwrap(), [0.0, 0.0]);
        assert!(pair_features(&[1.0], &[1.0, 2.0]).is_err());
        let x =
            FeatureMatrix::from_dense_rows(&[vec![1.0, 0.0, 2.0], vec![3.0, 5.0, 4.0]], Provenance::Numeric).unwrap();
        let pm = pair_feature_matrix(&x, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(pm.to_dense_rows(), [[3.0, 0.0, 8.0], [3.0, 0.0, 8.0]]);
    }
}
