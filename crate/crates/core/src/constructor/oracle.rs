use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hamilton::{is_hamilton_l_connected, Verdict};
use crate::hypercore::Digraph;
use crate::linkchain::Link;
use crate::util::mask_of;

/// Memoised membership test for `PG(D, HamConn_L, s)` over every `s` at
/// once: a set is an edge iff `D[set]` is Hamilton `L`-connected.
pub struct PropertyOracle {
    d: Digraph,
    link: Link,
    lens: Vec<usize>,
    search_budget: u64,
    cache: HashMap<u128, bool>,
}

impl PropertyOracle {
    pub fn new(d: &Digraph, link: &Link, search_budget: u64) -> Result<Self> {
        if d.n() > 127 {
            return Err(Error::param("the constructor supports at most 127 vertices"));
        }
        Ok(PropertyOracle {
            d: d.clone(),
            link: link.clone(),
            lens: d.uniformities().into_iter().collect(),
            search_budget,
            cache: HashMap::new(),
        })
    }

    pub fn host(&self) -> &Digraph {
        &self.d
    }

    pub fn link(&self) -> &Link {
        &self.link
    }

    /// Number of distinct sets evaluated so far.
    pub fn evaluations(&self) -> usize {
        self.cache.len()
    }

    /// `D[set]` relabelled so that the `i`-th smallest vertex becomes
    /// `i + 1`. Labels keep their relative order.
    pub fn sub(&self, set: &[usize]) -> Digraph {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let cost: usize = self.lens.iter().map(|&l| if l <= sorted.len() { sorted.len().pow(l as u32) } else { 0 }).sum();
        if cost >= self.d.edge_count() {
            return self.d.induced_relabeled(&sorted);
        }
        let mut tuples = Vec::new();
        for &len in &self.lens {
            if len > sorted.len() {
                continue;
            }
            for t in (0..sorted.len()).permutations(len) {
                let original: Vec<usize> = t.iter().map(|&i| sorted[i]).collect();
                if self.d.contains(&original) {
                    tuples.push(t.iter().map(|&i| i + 1).collect());
                }
            }
        }
        Digraph::new(sorted.len(), tuples).expect("relabelled tuples stay in range")
    }

    pub fn holds(&mut self, set: &[usize]) -> Result<bool> {
        let key = mask_of(set);
        if let Some(&b) = self.cache.get(&key) {
            return Ok(b);
        }
        let verdict = is_hamilton_l_connected(&self.sub(set), &self.link, self.search_budget)?;
        let b = match verdict {
            Verdict::Yes => true,
            Verdict::No => false,
            Verdict::Unknown => {
                return Err(Error::Budget(format!("Hamilton connectedness of {set:?} ran out of search budget")))
            }
        };
        self.cache.insert(key, b);
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkchain::BuiltinLink;

    #[test]
    fn sub_matches_induced_relabeled() {
        let d = Digraph::complete(9, &[3, 1]);
        let mut d = d;
        d.remove(&[2, 5, 7]);
        let link = BuiltinLink::EllCycle { k: 3, ell: 1 }.link().unwrap();
        let oracle = PropertyOracle::new(&d, &link, 1000).unwrap();
        let set = [7, 2, 5, 4];
        assert_eq!(oracle.sub(&set), d.induced_relabeled(&[2, 4, 5, 7]));
    }

    #[test]
    fn caches_results() {
        let d = Digraph::complete(7, &[2, 1]);
        let link = BuiltinLink::EllCycle { k: 2, ell: 1 }.link().unwrap();
        let mut oracle = PropertyOracle::new(&d, &link, 100_000).unwrap();
        assert!(oracle.holds(&[1, 2, 3, 4]).unwrap());
        assert!(oracle.holds(&[4, 3, 2, 1]).unwrap());
        assert_eq!(oracle.evaluations(), 1);
        let empty = Digraph::empty(7);
        let mut oracle = PropertyOracle::new(&empty, &link, 100_000).unwrap();
        assert!(!oracle.holds(&[1, 2, 3, 4]).unwrap());
    }
}
