use std::collections::BTreeSet;

use itertools::Itertools;

use super::Hypergraph;
use crate::error::{Error, Result};

/// A directed hypergraph on `1..=n` whose edges are tuples of distinct
/// vertices. Tuples of different lengths may coexist; a `(k, l)`-digraph
/// holds only `k`-tuples and `l`-tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, tuples: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut edges = BTreeSet::new();
        for t in tuples {
            Self::check_tuple(n, &t)?;
            edges.insert(t);
        }
        Ok(Digraph { n, edges })
    }

    fn check_tuple(n: usize, t: &[usize]) -> Result<()> {
        if t.iter().any(|&v| v == 0 || v > n) {
            return Err(Error::param(format!("tuple {t:?} leaves the vertex range 1..={n}")));
        }
        if t.iter().duplicates().next().is_some() {
            return Err(Error::param(format!("tuple {t:?} repeats a vertex")));
        }
        Ok(())
    }

    pub fn empty(n: usize) -> Self {
        Digraph { n, edges: BTreeSet::new() }
    }

    /// Every tuple of distinct vertices whose length is listed in `lengths`.
    pub fn complete(n: usize, lengths: &[usize]) -> Self {
        let mut edges = BTreeSet::new();
        for &len in lengths {
            if len == 0 || len > n {
                continue;
            }
            edges.extend((1..=n).permutations(len));
        }
        Digraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Vec<usize>> + '_ {
        self.edges.iter()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.edges.contains(tuple)
    }

    pub fn insert(&mut self, tuple: Vec<usize>) -> Result<bool> {
        Self::check_tuple(self.n, &tuple)?;
        Ok(self.edges.insert(tuple))
    }

    pub fn remove(&mut self, tuple: &[usize]) -> bool {
        self.edges.remove(tuple)
    }

    /// Tuple lengths present.
    pub fn uniformities(&self) -> BTreeSet<usize> {
        self.edges.iter().map(Vec::len).collect()
    }

    /// `G^(len)`: only the tuples of the given length.
    pub fn restrict(&self, len: usize) -> Digraph {
        Digraph {
            n: self.n,
            edges: self.edges.iter().filter(|t| t.len() == len).cloned().collect(),
        }
    }

    pub fn tuples_of_len(&self, len: usize) -> impl Iterator<Item = &Vec<usize>> + '_ {
        self.edges.iter().filter(move |t| t.len() == len)
    }

    /// Induced subgraph on the original labels.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut inside = vec![false; self.n + 1];
        for &v in vertices {
            if v <= self.n {
                inside[v] = true;
            }
        }
        Digraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .filter(|t| t.iter().all(|&v| inside[v]))
                .cloned()
                .collect(),
        }
    }

    /// Induced subgraph relabelled so that `vertices[i]` becomes `i + 1`.
    pub fn induced_relabeled(&self, vertices: &[usize]) -> Digraph {
        let mut label = vec![0usize; self.n + 1];
        for (i, &v) in vertices.iter().enumerate() {
            if v <= self.n {
                label[v] = i + 1;
            }
        }
        Digraph {
            n: vertices.len(),
            edges: self
                .edges
                .iter()
                .filter(|t| t.iter().all(|&v| label[v] != 0))
                .map(|t| t.iter().map(|&v| label[v]).collect())
                .collect(),
        }
    }

    pub fn union(&self, other: &Digraph) -> Result<Digraph> {
        if self.n != other.n {
            return Err(Error::param("union of digraphs on different vertex ranges"));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().cloned());
        Ok(Digraph { n: self.n, edges })
    }

    /// Removes every tuple that contains `v`.
    pub fn without_vertex(&self, v: usize) -> Digraph {
        Digraph {
            n: self.n,
            edges: self.edges.iter().filter(|t| !t.contains(&v)).cloned().collect(),
        }
    }

    /// The underlying undirected hypergraph of the `len`-tuples.
    pub fn underlying(&self, len: usize) -> Result<Hypergraph> {
        Hypergraph::new(self.n, len, self.tuples_of_len(len).cloned())
    }

    pub fn is_subgraph_of(&self, other: &Digraph) -> bool {
        self.n <= other.n && self.edges.is_subset(&other.edges)
    }
}
