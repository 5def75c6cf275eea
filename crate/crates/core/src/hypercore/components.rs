use std::collections::BTreeSet;

use super::{Digraph, Hypergraph};

/// Read access to the edges of a hypergraph or digraph, with orientation
/// ignored by the consumers in this module.
pub trait EdgeSource {
    fn vertex_count(&self) -> usize;
    fn edge_lists(&self) -> Box<dyn Iterator<Item = &[usize]> + '_>;
}

impl EdgeSource for Hypergraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn edge_lists(&self) -> Box<dyn Iterator<Item = &[usize]> + '_> {
        Box::new(self.edges().map(|e| e.as_slice()))
    }
}

impl EdgeSource for Digraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn edge_lists(&self) -> Box<dyn Iterator<Item = &[usize]> + '_> {
        Box::new(self.edges().map(|e| e.as_slice()))
    }
}

/// One block of an [`EdgePartition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Vertices covered by the block's edges, ascending.
    pub vertices: Vec<usize>,
    /// Edges (sets or tuples, as stored in the source), ascending.
    pub edges: Vec<Vec<usize>>,
}

/// A partition of an edge set into disjoint non-empty blocks, ordered by
/// their smallest edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgePartition {
    pub blocks: Vec<Block>,
}

impl EdgePartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups `edges` into blocks given pairs of edge indices known to be linked.
pub(crate) fn union_find_blocks(edges: Vec<Vec<usize>>, links: Vec<(usize, usize)>) -> EdgePartition {
    let mut uf = UnionFind::new(edges.len());
    for (a, b) in links {
        uf.union(a, b);
    }
    let mut blocks: Vec<(usize, Block)> = Vec::new();
    let mut slot = vec![usize::MAX; edges.len()];
    for (i, e) in edges.into_iter().enumerate() {
        let root = uf.find(i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push((root, Block { vertices: Vec::new(), edges: Vec::new() }));
        }
        blocks[slot[root]].1.edges.push(e);
    }
    let blocks = blocks
        .into_iter()
        .map(|(_, mut b)| {
            let vs: BTreeSet<usize> = b.edges.iter().flatten().copied().collect();
            b.vertices = vs.into_iter().collect();
            b.edges.sort();
            b
        })
        .collect();
    EdgePartition { blocks }
}

/// The 2-shadow: pairs of vertices that lie together in some edge.
pub fn shadow2<G: EdgeSource + ?Sized>(graph: &G) -> Hypergraph {
    let mut pairs = BTreeSet::new();
    for e in graph.edge_lists() {
        for (i, &a) in e.iter().enumerate() {
            for &b in &e[i + 1..] {
                pairs.insert(if a < b { vec![a, b] } else { vec![b, a] });
            }
        }
    }
    Hypergraph::new(graph.vertex_count(), 2, pairs).expect("pairs of distinct in-range vertices")
}

/// Components in the 2-shadow sense: edges are grouped by the connected
/// component of the 2-shadow containing them. An edgeless graph has zero
/// components. Edges of size one form their own singleton-vertex component
/// unless another edge touches that vertex.
pub fn components2<G: EdgeSource + ?Sized>(graph: &G) -> EdgePartition {
    let edges: Vec<Vec<usize>> = graph.edge_lists().map(|e| e.to_vec()).collect();
    let mut owner = vec![usize::MAX; graph.vertex_count() + 1];
    let mut links = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            if owner[v] == usize::MAX {
                owner[v] = i;
            } else {
                links.push((owner[v], i));
            }
        }
    }
    union_find_blocks(edges, links)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shadow_of_small_graphs() {
        let single = Hypergraph::new(3, 3, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(shadow2(&single), Hypergraph::complete(3, 2).unwrap());
        assert!(shadow2(&Hypergraph::empty(4, 3).unwrap()).is_empty());
        let two = Hypergraph::new(5, 3, vec![vec![1, 2, 3], vec![1, 4, 5]]).unwrap();
        let pairs: Vec<_> = shadow2(&two).edges().cloned().collect();
        assert_eq!(
            pairs,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![1, 5], vec![2, 3], vec![4, 5]]
        );
    }

    #[test]
    fn shadow_components() {
        let apart = Hypergraph::new(6, 3, vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert_eq!(components2(&apart).len(), 2);
        let touching = Hypergraph::new(5, 3, vec![vec![1, 2, 3], vec![3, 4, 5]]).unwrap();
        let parts = components2(&touching);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts.blocks[0].vertices, vec![1, 2, 3, 4, 5]);
        assert_eq!(components2(&Hypergraph::empty(5, 3).unwrap()).len(), 0);
    }

    #[test]
    fn digraph_components_ignore_orientation() {
        let d = Digraph::new(5, vec![vec![2, 1], vec![3, 2], vec![5, 4]]).unwrap();
        assert_eq!(components2(&d).len(), 2);
        assert_eq!(shadow2(&d).edge_count(), 3);
    }
}
