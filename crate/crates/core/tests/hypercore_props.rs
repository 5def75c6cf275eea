use std::collections::{BTreeMap, BTreeSet};

use chainforge::hypercore::{components2, parse, serialize, shadow2, Digraph, GraphFile, Hypergraph};
use chainforge::util::binomial;
use itertools::Itertools;
use proptest::prelude::*;

fn hypergraph() -> impl Strategy<Value = Hypergraph> {
    (2usize..=4)
        .prop_flat_map(|k| (Just(k), k..=9))
        .prop_flat_map(|(k, n)| {
            let m = binomial(n as u64, k as u64).unwrap() as usize;
            (Just(k), Just(n), prop::collection::vec(prop::bool::weighted(0.3), m))
        })
        .prop_map(|(k, n, keep)| {
            let edges = (1..=n).combinations(k).zip(keep).filter(|(_, b)| *b).map(|(e, _)| e);
            Hypergraph::new(n, k, edges).unwrap()
        })
}

fn digraph() -> impl Strategy<Value = Digraph> {
    (2usize..=7).prop_flat_map(|n| {
        let tuple = (1usize..=3.min(n)).prop_flat_map(move |len| Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |p| p[..len].to_vec()));
        (Just(n), prop::collection::vec(tuple, 0..20)).prop_map(|(n, ts)| Digraph::new(n, ts).unwrap())
    })
}

/// Components by brute force: repeatedly merge blocks that are related.
fn naive_blocks(edges: &[Vec<usize>], related: impl Fn(&[usize], &[usize]) -> bool) -> BTreeSet<BTreeSet<Vec<usize>>> {
    let mut blocks: Vec<BTreeSet<Vec<usize>>> = edges.iter().map(|e| BTreeSet::from([e.clone()])).collect();
    loop {
        let pair = (0..blocks.len()).tuple_combinations().find(|&(i, j)| {
            blocks[i].iter().any(|a| blocks[j].iter().any(|b| related(a, b)))
        });
        match pair {
            Some((i, j)) => {
                let b = blocks.remove(j);
                blocks[i].extend(b);
            }
            None => return blocks.into_iter().collect(),
        }
    }
}

fn shared(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|v| b.contains(v)).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn uniform_files_round_trip(g in hypergraph()) {
        let file = GraphFile::Uniform(g);
        prop_assert_eq!(parse(&serialize(&file)).unwrap(), file);
    }

    #[test]
    fn directed_files_round_trip(d in digraph()) {
        let file = GraphFile::Directed(d);
        prop_assert_eq!(parse(&serialize(&file)).unwrap(), file);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tight_components_partition_the_edges(g in hypergraph()) {
        let p = g.tight_components();
        let mut all: Vec<Vec<usize>> = p.blocks.iter().flat_map(|b| b.edges.clone()).collect();
        let total = all.len();
        all.sort();
        all.dedup();
        prop_assert_eq!(all.len(), total);
        prop_assert_eq!(all, g.edges().cloned().collect::<Vec<_>>());
        let k = g.k();
        let edges: Vec<Vec<usize>> = g.edges().cloned().collect();
        let expect = naive_blocks(&edges, |a, b| shared(a, b) == k - 1);
        let got: BTreeSet<BTreeSet<Vec<usize>>> = p.blocks.iter().map(|b| b.edges.iter().cloned().collect()).collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn vertex_components_partition_the_edges(g in hypergraph()) {
        let p = components2(&g);
        let edges: Vec<Vec<usize>> = g.edges().cloned().collect();
        let expect = naive_blocks(&edges, |a, b| shared(a, b) > 0);
        let got: BTreeSet<BTreeSet<Vec<usize>>> = p.blocks.iter().map(|b| b.edges.iter().cloned().collect()).collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn shadow_components_match(g in hypergraph()) {
        // Union-find over the pairs of the shadow.
        let sh = shadow2(&g);
        let mut root: Vec<usize> = (0..=g.n()).collect();
        fn find(root: &mut [usize], v: usize) -> usize {
            if root[v] != v {
                let r = find(root, root[v]);
                root[v] = r;
            }
            root[v]
        }
        for e in sh.edges() {
            let (a, b) = (find(&mut root, e[0]), find(&mut root, e[1]));
            root[a] = b;
        }
        let mut comps: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for v in sh.edges().flatten() {
            let r = find(&mut root, *v);
            comps.entry(r).or_default().insert(*v);
        }
        let expect: BTreeSet<BTreeSet<usize>> = comps.into_values().collect();
        let got: BTreeSet<BTreeSet<usize>> =
            components2(&g).blocks.iter().map(|b| b.vertices.iter().copied().collect()).collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn clique_graph_of_order_k_is_the_graph(g in hypergraph()) {
        prop_assert_eq!(g.clique_graph(g.k()).unwrap(), g);
    }
}

#[test]
fn complete_graph_degrees_are_binomials() {
    for n in 2..=8 {
        for k in 2..=n {
            let g = Hypergraph::complete(n, k).unwrap();
            for d in 1..k {
                let expect = binomial((n - d) as u64, (k - d) as u64).unwrap() as usize;
                assert_eq!(g.degree_min(d).unwrap(), expect, "n={n} k={k} d={d}");
            }
        }
    }
}
