use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::components::{union_find_blocks, EdgePartition};
use super::digraph::Digraph;
use crate::error::{Error, Result};
use crate::util::{binomial_sat, for_each_subset};

/// A `k`-uniform hypergraph on vertices `1..=n`. Edges are stored as sorted
/// vertex lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge. Repeated edges are merged.
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::param(format!("uniformity must be at least 2, got {k}")));
        }
        let mut set = BTreeSet::new();
        for mut edge in edges {
            Self::check_edge(n, k, &mut edge)?;
            set.insert(edge);
        }
        Ok(Hypergraph { n, k, edges: set })
    }

    fn check_edge(n: usize, k: usize, edge: &mut [usize]) -> Result<()> {
        if edge.len() != k {
            return Err(Error::param(format!("edge {edge:?} does not have {k} vertices")));
        }
        edge.sort_unstable();
        if edge.iter().any(|&v| v == 0 || v > n) {
            return Err(Error::param(format!("edge {edge:?} leaves the vertex range 1..={n}")));
        }
        if edge.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param(format!("edge {edge:?} repeats a vertex")));
        }
        Ok(())
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, std::iter::empty())
    }

    /// The complete `k`-graph `K_n^(k)`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, (1..=n).combinations(k))
    }

    /// The tight cycle on `1..=n`: every `k` cyclically consecutive vertices
    /// form an edge. Requires `n > k`.
    pub fn tight_cycle(n: usize, k: usize) -> Result<Self> {
        if n <= k {
            return Err(Error::param(format!("tight cycle needs n > k, got n={n}, k={k}")));
        }
        Self::new(n, k, (0..n).map(|i| (0..k).map(|j| (i + j) % n + 1).collect()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
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

    pub fn edge_set(&self) -> &BTreeSet<Vec<usize>> {
        &self.edges
    }

    /// Membership test for a sorted vertex list.
    pub fn contains(&self, sorted_edge: &[usize]) -> bool {
        self.edges.contains(sorted_edge)
    }

    /// Membership test for an arbitrary ordering of the vertices.
    pub fn contains_set(&self, vertices: &[usize]) -> bool {
        let mut e = vertices.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn insert(&mut self, mut edge: Vec<usize>) -> Result<bool> {
        Self::check_edge(self.n, self.k, &mut edge)?;
        Ok(self.edges.insert(edge))
    }

    pub fn remove(&mut self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.remove(&e)
    }

    /// Vertex degrees indexed by vertex (index 0 unused).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n + 1];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Vertices that lie in at least one edge, ascending.
    pub fn support(&self) -> Vec<usize> {
        let deg = self.degrees();
        (1..=self.n).filter(|&v| deg[v] > 0).collect()
    }

    /// `G[S]` on the original labels: edges entirely inside `vertices`.
    pub fn induced(&self, vertices: &[usize]) -> Hypergraph {
        let mut inside = vec![false; self.n + 1];
        for &v in vertices {
            if v <= self.n {
                inside[v] = true;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| inside[v]))
            .cloned()
            .collect();
        Hypergraph { n: self.n, k: self.k, edges }
    }

    /// `G[S]` relabelled onto `1..=|S|` following the order of `vertices`.
    pub fn induced_relabeled(&self, vertices: &[usize]) -> Hypergraph {
        let mut label = vec![0usize; self.n + 1];
        for (i, &v) in vertices.iter().enumerate() {
            label[v] = i + 1;
        }
        let mut edges = BTreeSet::new();
        if vertices.len() >= self.k {
            // Enumerate k-subsets of S when that is cheaper than scanning all edges.
            if binomial_sat(vertices.len() as u64, self.k as u64) < self.edges.len() as u128 {
                let mut sorted = vertices.to_vec();
                sorted.sort_unstable();
                for_each_subset(&sorted, self.k, |sub| {
                    if self.edges.contains(sub) {
                        let mut e: Vec<usize> = sub.iter().map(|&v| label[v]).collect();
                        e.sort_unstable();
                        edges.insert(e);
                    }
                    true
                });
            } else {
                for e in &self.edges {
                    if e.iter().all(|&v| label[v] != 0) {
                        let mut mapped: Vec<usize> = e.iter().map(|&v| label[v]).collect();
                        mapped.sort_unstable();
                        edges.insert(mapped);
                    }
                }
            }
        }
        Hypergraph { n: vertices.len(), k: self.k, edges }
    }

    /// Minimum `d`-degree: the least number of edges containing a `d`-set.
    pub fn degree_min(&self, d: usize) -> Result<usize> {
        if d == 0 || d >= self.k {
            return Err(Error::param(format!("degree order d={d} must satisfy 1 <= d < k={}", self.k)));
        }
        if self.n < self.k {
            return Err(Error::param(format!("n={} is smaller than k={}", self.n, self.k)));
        }
        let mut counter: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for e in &self.edges {
            for_each_subset(e, d, |sub| {
                *counter.entry(sub.to_vec()).or_insert(0) += 1;
                true
            });
        }
        if (counter.len() as u128) < binomial_sat(self.n as u64, d as u64) {
            return Ok(0);
        }
        Ok(counter.values().copied().min().unwrap_or(0))
    }

    /// The `ell`-shadow: `ell`-sets contained in some edge.
    pub fn l_shadow(&self, ell: usize) -> Result<Hypergraph> {
        if ell == 0 || ell >= self.k {
            return Err(Error::param(format!("shadow order {ell} must satisfy 1 <= ell < k={}", self.k)));
        }
        let mut edges = BTreeSet::new();
        for e in &self.edges {
            for_each_subset(e, ell, |sub| {
                edges.insert(sub.to_vec());
                true
            });
        }
        // Uniformity 1 is allowed for shadows; bypass the k >= 2 constructor check.
        Ok(Hypergraph { n: self.n, k: ell, edges })
    }

    /// Line graph on edge indices `1..=e(G)` (edges in sorted order);
    /// two edges are adjacent when they share `k - 1` vertices.
    pub fn line_graph(&self) -> Hypergraph {
        let edges: Vec<&Vec<usize>> = self.edges.iter().collect();
        let mut by_ridge: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            for_each_subset(e, self.k - 1, |ridge| {
                by_ridge.entry(ridge.to_vec()).or_default().push(i + 1);
                true
            });
        }
        let mut adj = BTreeSet::new();
        for members in by_ridge.values() {
            for (a, b) in members.iter().tuple_combinations() {
                adj.insert(vec![*a, *b]);
            }
        }
        Hypergraph { n: edges.len(), k: 2, edges: adj }
    }

    /// Tight components: connected components of the line graph.
    pub fn tight_components(&self) -> EdgePartition {
        let edges: Vec<Vec<usize>> = self.edges.iter().cloned().collect();
        let mut by_ridge: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut links = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            for_each_subset(e, self.k - 1, |ridge| {
                match by_ridge.get(ridge) {
                    Some(&j) => links.push((j, i)),
                    None => {
                        by_ridge.insert(ridge.to_vec(), i);
                    }
                }
                true
            });
        }
        union_find_blocks(edges, links)
    }

    /// Whether the edge set is non-empty and forms a single tight component.
    pub fn is_tightly_connected(&self) -> bool {
        self.tight_components().blocks.len() == 1
    }

    /// The clique graph `K_t(G)`: `t`-sets whose every `k`-subset is an edge.
    pub fn clique_graph(&self, t: usize) -> Result<Hypergraph> {
        if t < self.k {
            return Err(Error::param(format!("clique order t={t} is below k={}", self.k)));
        }
        let mut cliques: Vec<Vec<usize>> = self.edges.iter().cloned().collect();
        // Grow cliques one vertex at a time, always appending a larger vertex.
        for _ in self.k..t {
            let mut next = Vec::new();
            for c in &cliques {
                let last = *c.last().expect("cliques are non-empty");
                for v in last + 1..=self.n {
                    let mut ok = true;
                    for_each_subset(c, self.k - 1, |sub| {
                        let mut e = sub.to_vec();
                        e.push(v);
                        ok = self.edges.contains(&e);
                        ok
                    });
                    if ok {
                        let mut grown = c.clone();
                        grown.push(v);
                        next.push(grown);
                    }
                }
            }
            cliques = next;
        }
        Ok(Hypergraph { n: self.n, k: t, edges: cliques.into_iter().collect() })
    }

    /// All orientations of every edge: the digraph with every permutation of
    /// every edge as a tuple.
    pub fn orient_all(&self) -> Digraph {
        let tuples = self
            .edges
            .iter()
            .flat_map(|e| e.iter().copied().permutations(e.len()))
            .collect::<Vec<_>>();
        Digraph::new(self.n, tuples).expect("orientations of valid edges are valid tuples")
    }

    /// Disjoint union of edge sets on the same vertex range and uniformity.
    pub fn union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::param("union of hypergraphs with different n or k"));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().cloned());
        Ok(Hypergraph { n: self.n, k: self.k, edges })
    }

    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.k == other.k && self.n <= other.n && self.edges.is_subset(&other.edges)
    }
}
