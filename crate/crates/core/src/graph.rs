//! Undirected simple graphs and node attribute tables.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[inline]
fn edge_key(u: usize, v: usize) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

/// Immutable undirected simple graph over dense node indices `0..n`.
///
/// Adjacency rows are sorted; an auxiliary hash set answers edge queries in
/// constant time.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    edge_set: HashSet<u64>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph whose node count is one past the largest index seen.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::with_nodes(n, pairs)
    }

    /// Builds a graph with exactly `n` nodes; trailing isolated nodes are kept.
    ///
    /// Duplicate and reversed pairs collapse into one undirected edge.
    pub fn with_nodes(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter("node count exceeds u32 range".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_set = HashSet::with_capacity(pairs.len());
        for &(u, v) in pairs {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { index: x, n });
                }
            }
            if edge_set.insert(edge_key(u, v)) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        let graph = Graph {
            edge_count: edge_set.len(),
            adjacency,
            edge_set,
        };
        debug_assert!(graph.check_invariants());
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, u: usize) -> Result<&[usize]> {
        self.adjacency.get(u).map(Vec::as_slice).ok_or(Error::NodeOutOfRange {
            index: u,
            n: self.node_count(),
        })
    }

    pub fn degree(&self, u: usize) -> Result<usize> {
        self.neighbors(u).map(<[usize]>::len)
    }

    /// Adjacency row without bounds reporting; panics when `u >= n`.
    #[inline]
    pub fn row(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edge_set.contains(&edge_key(u, v))
    }

    /// Canonical edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, row)| {
            let start = row.partition_point(|&v| v <= u);
            row[start..].iter().map(move |&v| (u, v))
        })
    }

    /// Symmetry, no self-loops, no duplicates and the handshake identity.
    pub fn check_invariants(&self) -> bool {
        let mut degree_sum = 0;
        for (u, row) in self.adjacency.iter().enumerate() {
            degree_sum += row.len();
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &v in row {
                if v == u || v >= self.node_count() || self.adjacency[v].binary_search(&u).is_err() {
                    return false;
                }
            }
        }
        degree_sum == 2 * self.edge_count && self.edge_set.len() == self.edge_count
    }
}

/// How a node attribute column is interpreted by the feature pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ColumnData {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
    Text(Vec<String>),
}

impl ColumnData {
    pub fn kind(&self) -> ColumnKind {
        match self {
            ColumnData::Numeric(_) => ColumnKind::Numeric,
            ColumnData::Categorical(_) => ColumnKind::Categorical,
            ColumnData::Text(_) => ColumnKind::Text,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Categorical(v) | ColumnData::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeColumn {
    pub name: String,
    pub data: ColumnData,
}

/// External node ids, their dense indices, and typed attribute columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeTable {
    external_ids: Vec<String>,
    index_of: BTreeMap<String, usize>,
    columns: Vec<AttributeColumn>,
}

impl NodeTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the dense index for `id`, assigning the next one if unseen.
    pub fn intern(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index_of.get(id) {
            return i;
        }
        let i = self.external_ids.len();
        self.external_ids.push(id.into());
        self.index_of.insert(id.into(), i);
        i
    }

    /// Builds a table from ids that must be unique.
    pub fn from_ids<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = Self::new();
        for id in ids {
            let before = table.len();
            if table.intern(id.as_ref()) != before {
                return Err(Error::InvalidParameter(alloc::format!(
                    "duplicate node id {:?}",
                    id.as_ref()
                )));
            }
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.external_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.external_ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index_of.get(id).copied()
    }

    pub fn external_id(&self, index: usize) -> Option<&str> {
        self.external_ids.get(index).map(String::as_str)
    }

    pub fn external_ids(&self) -> &[String] {
        &self.external_ids
    }

    pub fn columns(&self) -> &[AttributeColumn] {
        &self.columns
    }

    /// Appends a column; its length must equal the number of nodes.
    pub fn push_column(&mut self, name: impl Into<String>, data: ColumnData) -> Result<()> {
        if data.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: data.len(),
            });
        }
        self.columns.push(AttributeColumn {
            name: name.into(),
            data,
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> Graph {
        Graph::from_pairs(&[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn build_path() {
        let g = Graph::from_pairs(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(1).unwrap(), 2);
    }

    #[test]
    fn symmetric_duplicate_collapses() {
        let g = Graph::from_pairs(&[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn self_loop_rejected() {
        let err = Graph::from_pairs(&[(0, 0)]).unwrap_err();
        assert_eq!(err, Error::SelfLoop(0));
        assert!(alloc::format!("{err}").contains("self-loop"));
    }

    #[test]
    fn neighbors_and_degree() {
        let g = path4();
        assert_eq!(g.neighbors(1).unwrap(), &[0, 2]);
        assert_eq!(g.neighbors(0).unwrap(), &[1]);
        assert!(matches!(g.neighbors(5), Err(Error::NodeOutOfRange { index: 5, n: 4 })));
        assert_eq!(g.degree(1).unwrap(), 2);
        assert_eq!(g.degree(0).unwrap(), 1);
        assert!(g.degree(4).is_err());
        let k3 = Graph::from_pairs(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!((0..3).all(|u| k3.degree(u).unwrap() == 2));
    }

    #[test]
    fn isolated_trailing_nodes_kept() {
        let g = Graph::with_nodes(6, &[(0, 1)]).unwrap();
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.degree(5).unwrap(), 0);
        assert!(Graph::with_nodes(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn edges_are_canonical_and_sorted() {
        let g = Graph::from_pairs(&[(3, 2), (1, 0), (2, 1), (0, 3)]).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn node_table_rejects_duplicates() {
        assert!(NodeTable::from_ids(["a", "b", "a"]).is_err());
        let mut t = NodeTable::from_ids(["a", "b"]).unwrap();
        assert_eq!(t.index_of("b"), Some(1));
        assert!(t.push_column("x", ColumnData::Numeric(vec![1.0])).is_err());
        t.push_column("x", ColumnData::Numeric(vec![1.0, 2.0])).unwrap();
        assert_eq!(t.columns()[0].data.kind(), ColumnKind::Numeric);
    }
}
