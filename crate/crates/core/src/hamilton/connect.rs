use serde::Serialize;

use super::search::{ChainSearcher, SearchOptions, SearchOutcome};
use crate::error::{Error, Result};
use crate::hypercore::{Digraph, Hypergraph};
use crate::linkchain::{builtin_link, open_shape_ok, BuiltinLink, Link};

/// Three-valued answer of a decider whose search may run out of budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| !b.contains(v))
}

/// Hamilton `L`-connectedness: `D^(ℓ)` holds two disjoint `ℓ`-tuples and
/// every ordered pair `X, Y` of disjoint `ℓ`-tuples of `D^(ℓ)` is joined by
/// an open Hamilton `L`-chain starting with `X` and ending with `Y`.
///
/// For `ℓ = 0` the tuple condition is vacuous and the answer is whether a
/// spanning open `L`-chain exists. `budget` applies to each search.
pub fn is_hamilton_l_connected(d: &Digraph, link: &Link, budget: u64) -> Result<Verdict> {
    let ell = link.ell();
    let opts = SearchOptions { budget, ..SearchOptions::default() };
    if open_shape_ok(link, d.n()).is_err() {
        return Ok(Verdict::No);
    }
    let searcher = ChainSearcher::new(d, link, false)?;
    if ell == 0 {
        return Ok(match searcher.find(None, None, &opts)? {
            SearchOutcome::Found(_) => Verdict::Yes,
            SearchOutcome::NotFound => Verdict::No,
            SearchOutcome::Unknown => Verdict::Unknown,
        });
    }
    let tuples: Vec<&Vec<usize>> = d.tuples_of_len(ell).collect();
    let any_pair = tuples.iter().enumerate().any(|(i, x)| tuples[i + 1..].iter().any(|y| disjoint(x, y)));
    if !any_pair {
        return Ok(Verdict::No);
    }
    let mut unknown = false;
    for x in &tuples {
        for y in &tuples {
            if !disjoint(x, y) {
                continue;
            }
            match searcher.find(Some(x), Some(y), &opts)? {
                SearchOutcome::Found(_) => {}
                SearchOutcome::NotFound => return Ok(Verdict::No),
                SearchOutcome::Unknown => unknown = true,
            }
        }
    }
    Ok(if unknown { Verdict::Unknown } else { Verdict::Yes })
}

/// Strong Hamilton `ℓ`-connectedness of a `k`-graph: `δ_ℓ(G) > 0` and any
/// two disjoint ordered `ℓ`-sets of `∂_ℓ G` are the ends of a Hamilton
/// `ℓ`-path. Decided on `C→(G) ∪ C→(∂_ℓ G)` with the `ℓ`-cycle link.
pub fn is_strongly_hamilton_l_connected(g: &Hypergraph, ell: usize, budget: u64) -> Result<Verdict> {
    if ell == 0 || ell >= g.k() {
        return Err(Error::param(format!("ℓ must satisfy 1 <= ℓ < k = {}, got {ell}", g.k())));
    }
    if g.n() < g.k() || g.degree_min(ell)? == 0 {
        return Ok(Verdict::No);
    }
    let d = strong_digraph(g, ell)?;
    let link = builtin_link(BuiltinLink::EllCycle { k: g.k(), ell })?;
    is_hamilton_l_connected(&d, &link, budget)
}

/// `C→(G) ∪ C→(∂_ℓ G)`.
pub fn strong_digraph(g: &Hypergraph, ell: usize) -> Result<Digraph> {
    g.orient_all().union(&g.l_shadow(ell)?.orient_all())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamilton::DEFAULT_SEARCH_BUDGET;

    const B: u64 = DEFAULT_SEARCH_BUDGET;

    #[test]
    fn complete_loose_host() {
        let d = Digraph::complete(7, &[3, 1]);
        let link = builtin_link(BuiltinLink::EllCycle { k: 3, ell: 1 }).unwrap();
        assert_eq!(is_hamilton_l_connected(&d, &link, B).unwrap(), Verdict::Yes);
    }

    #[test]
    fn one_end_tuple_is_not_enough() {
        let mut d = Digraph::complete(7, &[3]);
        d.insert(vec![1]).unwrap();
        let link = builtin_link(BuiltinLink::EllCycle { k: 3, ell: 1 }).unwrap();
        assert_eq!(is_hamilton_l_connected(&d, &link, B).unwrap(), Verdict::No);
    }

    #[test]
    fn k4_is_hamilton_connected() {
        let d = Digraph::complete(4, &[2, 1]);
        let link = builtin_link(BuiltinLink::EllCycle { k: 2, ell: 1 }).unwrap();
        assert_eq!(is_hamilton_l_connected(&d, &link, B).unwrap(), Verdict::Yes);
        // A 4-cycle is not: opposite corners have no Hamilton path.
        let mut c4 = Digraph::new(4, (1..=4).flat_map(|i| [vec![i, i % 4 + 1], vec![i % 4 + 1, i]])).unwrap();
        for v in 1..=4 {
            c4.insert(vec![v]).unwrap();
        }
        assert_eq!(is_hamilton_l_connected(&c4, &link, B).unwrap(), Verdict::No);
    }

    #[test]
    fn matching_links_need_a_spanning_chain() {
        let link = builtin_link(BuiltinLink::Matching { k: 2 }).unwrap();
        assert_eq!(is_hamilton_l_connected(&Digraph::complete(4, &[2]), &link, B).unwrap(), Verdict::Yes);
        assert_eq!(is_hamilton_l_connected(&Digraph::complete(5, &[2]), &link, B).unwrap(), Verdict::No);
        let star = Digraph::new(4, vec![vec![1, 2], vec![1, 3], vec![1, 4]]).unwrap();
        assert_eq!(is_hamilton_l_connected(&star, &link, B).unwrap(), Verdict::No);
    }

    #[test]
    fn strong_connectedness() {
        let k5 = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(is_strongly_hamilton_l_connected(&k5, 1, B).unwrap(), Verdict::Yes);
        let isolated = Hypergraph::new(5, 3, vec![vec![1, 2, 3], vec![2, 3, 4], vec![1, 2, 4]]).unwrap();
        assert_eq!(is_strongly_hamilton_l_connected(&isolated, 1, B).unwrap(), Verdict::No);
        let two = Hypergraph::new(7, 3, vec![vec![1, 2, 3], vec![4, 5, 6], vec![4, 5, 7], vec![4, 6, 7], vec![5, 6, 7]]).unwrap();
        assert_eq!(is_strongly_hamilton_l_connected(&two, 1, B).unwrap(), Verdict::No);
        assert!(is_strongly_hamilton_l_connected(&k5, 3, B).is_err());
    }
}
