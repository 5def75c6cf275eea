use std::collections::{HashMap, VecDeque};

use itertools::Itertools;
use num_rational::BigRational;
use serde::Serialize;

use super::lp::{has_perfect_fractional_matching, FractionalMatching};
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;

/// Default cap on (state, residue) pairs explored per aperiodicity search.
pub const DEFAULT_WALK_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct Aperiodicity {
    pub aperiodic: bool,
    /// Order of a shortest closed tight walk with order `≡ 1 (mod k)`.
    pub witness_order: Option<usize>,
    /// That walk as a cyclic vertex sequence.
    pub witness_walk: Option<Vec<usize>>,
}

/// Ordered `(k-1)`-tuples contained in edges, with their one-step
/// successors `(a_2, ..., a_{k-1}, x)`.
pub(crate) fn walk_states(g: &Hypergraph) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let k = g.k();
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states: Vec<Vec<usize>> = Vec::new();
    let mut id_of = |t: Vec<usize>, states: &mut Vec<Vec<usize>>| -> usize {
        *ids.entry(t.clone()).or_insert_with(|| {
            states.push(t);
            states.len() - 1
        })
    };
    let mut succ_pairs = Vec::new();
    for e in g.edges() {
        for perm in e.iter().copied().permutations(k) {
            let a = id_of(perm[..k - 1].to_vec(), &mut states);
            let b = id_of(perm[1..].to_vec(), &mut states);
            succ_pairs.push((a, b));
        }
    }
    let mut succ = vec![Vec::new(); states.len()];
    for (a, b) in succ_pairs {
        succ[a].push(b);
    }
    for s in succ.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    (states, succ)
}

/// Searches for a closed tight walk whose order is `1 (mod k)`: a walk in
/// the state graph of ordered `(k-1)`-tuples returning to its start with
/// length `≡ 1 (mod k)`. BFS from each state over (state, residue) pairs.
pub fn is_aperiodic(g: &Hypergraph) -> Result<Aperiodicity> {
    is_aperiodic_with(g, DEFAULT_WALK_BUDGET)
}

pub fn is_aperiodic_with(g: &Hypergraph, budget: u64) -> Result<Aperiodicity> {
    let k = g.k();
    let (states, succ) = walk_states(g);
    let s = states.len();
    let mut spent = 0u64;
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for start in 0..s {
        // dist and parent over index state * k + residue.
        let mut dist = vec![usize::MAX; s * k];
        let mut parent = vec![usize::MAX; s * k];
        let mut queue = VecDeque::new();
        dist[start * k] = 0;
        queue.push_back(start * k);
        let target = start * k + 1 % k;
        while let Some(x) = queue.pop_front() {
            spent += 1;
            if spent > budget {
                return Err(Error::Budget(format!("aperiodicity search exceeded {budget} steps")));
            }
            if best.as_ref().is_some_and(|b| dist[x] + 1 >= b.0) {
                break;
            }
            let (state, res) = (x / k, x % k);
            for &nx in &succ[state] {
                let y = nx * k + (res + 1) % k;
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
            if dist[target] != usize::MAX {
                break;
            }
        }
        if dist[target] != usize::MAX && best.as_ref().map_or(true, |b| dist[target] < b.0) {
            let mut path = vec![target];
            let mut cur = target;
            while parent[cur] != usize::MAX && parent[cur] != start * k {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            // Each step appends the last vertex of the new state.
            let walk: Vec<usize> = path.iter().map(|&x| *states[x / k].last().expect("states are nonempty")).collect();
            best = Some((dist[target], start, walk));
        }
    }
    Ok(match best {
        Some((order, _, walk)) => Aperiodicity { aperiodic: true, witness_order: Some(order), witness_walk: Some(walk) },
        None => Aperiodicity { aperiodic: false, witness_order: None, witness_walk: None },
    })
}

/// True iff every `k` cyclically consecutive entries of `walk` form an edge.
pub fn is_closed_tight_walk(g: &Hypergraph, walk: &[usize]) -> bool {
    let m = walk.len();
    m > 0 && (0..m).all(|i| {
        let window: Vec<usize> = (0..g.k()).map(|j| walk[(i + j) % m]).collect();
        window.iter().all_unique() && g.contains_set(&window)
    })
}

/// Chooses a sub-`k`-graph `F(H)` of each `s`-vertex graph `H = G - u`.
pub type Selector<'a> = dyn Fn(&Hypergraph, &[usize]) -> Result<Hypergraph> + 'a;

/// Largest tight component of `h` (vertices `vertices`) that has a perfect
/// fractional matching on those vertices; ties go to the lexicographically
/// smallest edge list. Empty when no component qualifies.
pub fn default_selector(h: &Hypergraph, vertices: &[usize]) -> Result<Hypergraph> {
    let mut candidates: Vec<Vec<Vec<usize>>> = h.tight_components().blocks.into_iter().map(|b| b.edges).collect();
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    for edges in candidates {
        let comp = Hypergraph::new(h.n(), h.k(), edges.clone())?;
        if has_perfect_fractional_matching(&comp.induced_relabeled(vertices))?.feasible {
            return Ok(comp);
        }
    }
    Hypergraph::empty(h.n(), h.k())
}

/// (F4) on an `(s+1)`-vertex graph: for all distinct `u, v`, the union
/// `F(G - u) ∪ F(G - v)` is tightly connected. `G - u` keeps the original
/// labels with `u` isolated.
pub fn check_consistency_pair(g_plus: &Hypergraph, selector: &Selector<'_>) -> Result<bool> {
    let n = g_plus.n();
    let mut chosen = Vec::with_capacity(n);
    for u in 1..=n {
        let rest: Vec<usize> = (1..=n).filter(|&v| v != u).collect();
        let minus = g_plus.induced(&rest);
        let f = selector(&minus, &rest)?;
        if f.k() != g_plus.k() || !f.is_subgraph_of(&minus) {
            return Err(Error::Precondition(format!("selector returned a non-subgraph of G - {u}")));
        }
        chosen.push(f);
    }
    for (a, b) in (0..n).tuple_combinations() {
        if !chosen[a].union(&chosen[b])?.is_tightly_connected() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameworkReport {
    /// (F1): the graph is a single tight component.
    pub tight_component: bool,
    pub tight_component_count: usize,
    /// (F2)
    pub perfect_fractional_matching: bool,
    pub matching: FractionalMatching,
    /// (F3)
    pub aperiodic: bool,
    pub witness_order: Option<usize>,
}

pub fn framework_report(g: &Hypergraph) -> Result<FrameworkReport> {
    let components = g.tight_components().len();
    let matching = has_perfect_fractional_matching(g)?;
    let ap = is_aperiodic(g)?;
    Ok(FrameworkReport {
        tight_component: components == 1,
        tight_component_count: components,
        perfect_fractional_matching: matching.feasible,
        matching,
        aperiodic: ap.aperiodic,
        witness_order: ap.witness_order,
    })
}

/// The weights of a feasible report, for callers that only need numbers.
pub fn weights_of(report: &FrameworkReport) -> Option<&[(Vec<usize>, BigRational)]> {
    report.matching.weights.as_deref()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_cycle_periodicity() {
        let c7 = Hypergraph::tight_cycle(7, 3).unwrap();
        let r = is_aperiodic(&c7).unwrap();
        assert!(r.aperiodic);
        assert_eq!(r.witness_order.unwrap() % 3, 1);
        assert!(is_closed_tight_walk(&c7, r.witness_walk.as_ref().unwrap()));
        assert_eq!(r.witness_walk.unwrap().len(), r.witness_order.unwrap());
        assert!(!is_aperiodic(&Hypergraph::tight_cycle(6, 3).unwrap()).unwrap().aperiodic);
        assert!(!is_aperiodic(&Hypergraph::complete(3, 3).unwrap()).unwrap().aperiodic);
    }

    #[test]
    fn graphs_with_odd_cycles_are_aperiodic() {
        let tri = Hypergraph::complete(3, 2).unwrap();
        assert_eq!(is_aperiodic(&tri).unwrap().witness_order, Some(3));
        let c4 = Hypergraph::tight_cycle(4, 2).unwrap();
        assert!(!is_aperiodic(&c4).unwrap().aperiodic);
    }

    #[test]
    fn consistency() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        let whole = |h: &Hypergraph, _: &[usize]| Ok(h.clone());
        assert!(check_consistency_pair(&k6, &whole).unwrap());
        let c7 = Hypergraph::tight_cycle(7, 3).unwrap();
        assert!(check_consistency_pair(&c7, &default_selector).unwrap());
        let bad = |h: &Hypergraph, _: &[usize]| Hypergraph::new(h.n(), 3, vec![vec![1, 2, 3]]);
        assert!(check_consistency_pair(&Hypergraph::tight_cycle(7, 3).unwrap(), &bad).is_err());
    }

    #[test]
    fn alternating_cliques_break_consistency() {
        // Two disjoint K_4^(3) on 1..4 and 5..8 plus vertex 9; the selector
        // keeps the clique on the side of the parity of the deleted vertex.
        let mut edges: Vec<Vec<usize>> = (1..=4).combinations(3).collect();
        edges.extend((5..=8).combinations(3));
        let g = Hypergraph::new(9, 3, edges).unwrap();
        let pick = |h: &Hypergraph, rest: &[usize]| {
            let u = (1..=9).find(|v| !rest.contains(v)).unwrap();
            let side: Vec<usize> = if u % 2 == 0 { (1..=4).collect() } else { (5..=8).collect() };
            Ok(h.induced(&side))
        };
        assert!(!check_consistency_pair(&g, &pick).unwrap());
    }

    #[test]
    fn framework_of_tight_cycles() {
        let r = framework_report(&Hypergraph::tight_cycle(7, 3).unwrap()).unwrap();
        assert!(r.tight_component && r.perfect_fractional_matching && r.aperiodic);
        let r = framework_report(&Hypergraph::tight_cycle(6, 3).unwrap()).unwrap();
        assert!(r.tight_component && r.perfect_fractional_matching && !r.aperiodic);
    }
}
