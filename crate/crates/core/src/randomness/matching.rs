use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use super::spread::Sampler;
use super::SeededStream;
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;
use crate::util::mask_of;

/// Default cap on the number of memoised vertex-cover states.
pub const DEFAULT_MATCHING_BUDGET: usize = 1 << 22;

/// Exact perfect-matching counts for every reachable set of covered
/// vertices, used to draw perfect matchings uniformly at random.
///
/// The recursion always covers the lowest uncovered vertex next, so each
/// matching corresponds to exactly one descent path.
#[derive(Clone, Debug)]
pub struct PerfectMatchingTable {
    n: usize,
    full: u128,
    /// `by_min[v]`: edges whose smallest vertex is `v`, with their masks.
    by_min: Vec<Vec<(u128, usize)>>,
    edges: Vec<Vec<usize>>,
    memo: HashMap<u128, u128>,
    budget: usize,
}

impl PerfectMatchingTable {
    /// `partite`, when given, must partition the vertex set; only edges
    /// meeting every part exactly once are used.
    pub fn new(h: &Hypergraph, partite: Option<&[Vec<usize>]>, budget: usize) -> Result<Self> {
        if h.n() > 127 {
            return Err(Error::param("perfect matching tables support at most 127 vertices"));
        }
        let mut owner = vec![usize::MAX; h.n() + 1];
        if let Some(parts) = partite {
            for (i, part) in parts.iter().enumerate() {
                for &v in part {
                    if v == 0 || v > h.n() || owner[v] != usize::MAX {
                        return Err(Error::param("partite classes must partition the vertex set"));
                    }
                    owner[v] = i;
                }
            }
            if owner[1..].iter().any(|&o| o == usize::MAX) {
                return Err(Error::param("partite classes must cover every vertex"));
            }
        }
        let mut by_min = vec![Vec::new(); h.n() + 1];
        let mut edges = Vec::new();
        for e in h.edges() {
            if let Some(parts) = partite {
                let hit: BTreeSet<usize> = e.iter().map(|&v| owner[v]).collect();
                if hit.len() != parts.len() || e.len() != parts.len() {
                    continue;
                }
            }
            by_min[e[0]].push((mask_of(e), edges.len()));
            edges.push(e.clone());
        }
        let mut table = PerfectMatchingTable {
            n: h.n(),
            full: crate::util::full_mask(h.n()),
            by_min,
            edges,
            memo: HashMap::new(),
            budget,
        };
        if h.n() % h.k() == 0 {
            table.count_from(0)?;
        }
        Ok(table)
    }

    fn count_from(&mut self, covered: u128) -> Result<u128> {
        if covered == self.full {
            return Ok(1);
        }
        if let Some(&c) = self.memo.get(&covered) {
            return Ok(c);
        }
        if self.memo.len() >= self.budget {
            return Err(Error::Budget(format!(
                "perfect matching count needs more than {} states",
                self.budget
            )));
        }
        let v = (!covered & self.full).trailing_zeros() as usize;
        let mut total: u128 = 0;
        for i in 0..self.by_min[v].len() {
            let (m, _) = self.by_min[v][i];
            if m & covered == 0 {
                let c = self.count_from(covered | m)?;
                total = total
                    .checked_add(c)
                    .ok_or_else(|| Error::Budget("perfect matching count overflows u128".into()))?;
            }
        }
        self.memo.insert(covered, total);
        Ok(total)
    }

    fn lookup(&self, covered: u128) -> u128 {
        if covered == self.full {
            1
        } else {
            self.memo.get(&covered).copied().unwrap_or(0)
        }
    }

    /// Number of perfect matchings.
    pub fn count(&self) -> u128 {
        if self.n == 0 {
            return 1;
        }
        self.lookup(0)
    }

    /// A uniformly random perfect matching (edges sorted), or `None` when
    /// there is none.
    pub fn sample(&self, stream: &mut SeededStream) -> Option<Vec<Vec<usize>>> {
        if self.count() == 0 {
            return None;
        }
        let mut covered = 0u128;
        let mut out = Vec::new();
        while covered != self.full {
            let v = (!covered & self.full).trailing_zeros() as usize;
            let mut pick = stream.gen_range(0..self.lookup(covered));
            for &(m, idx) in &self.by_min[v] {
                if m & covered != 0 {
                    continue;
                }
                let c = self.lookup(covered | m);
                if pick < c {
                    covered |= m;
                    out.push(self.edges[idx].clone());
                    break;
                }
                pick -= c;
            }
        }
        out.sort();
        Some(out)
    }

    /// Every perfect matching, in descent order.
    pub fn enumerate(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        if self.count() > 0 {
            self.enumerate_from(0, &mut current, &mut out);
        }
        out
    }

    fn enumerate_from(&self, covered: u128, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if covered == self.full {
            let mut m = current.clone();
            m.sort();
            out.push(m);
            return;
        }
        let v = (!covered & self.full).trailing_zeros() as usize;
        for &(m, idx) in &self.by_min[v] {
            if m & covered == 0 && self.lookup(covered | m) > 0 {
                current.push(self.edges[idx].clone());
                self.enumerate_from(covered | m, current, out);
                current.pop();
            }
        }
    }
}

pub fn count_perfect_matchings(h: &Hypergraph) -> Result<u128> {
    Ok(PerfectMatchingTable::new(h, None, DEFAULT_MATCHING_BUDGET)?.count())
}

/// Draws one uniform perfect matching. Repeated draws from the same host
/// should build a [`PerfectMatchingTable`] once instead.
pub fn sample_perfect_matching_uniform(
    h: &Hypergraph,
    partite: Option<&[Vec<usize>]>,
    stream: &mut SeededStream,
) -> Result<Option<Vec<Vec<usize>>>> {
    let table = PerfectMatchingTable::new(h, partite, DEFAULT_MATCHING_BUDGET)?;
    Ok(table.sample(stream))
}

/// The uniform distribution on perfect matchings of a fixed host; the
/// ground set is its edge set.
pub struct MatchingSampler {
    table: PerfectMatchingTable,
    ground: BTreeSet<Vec<usize>>,
}

impl MatchingSampler {
    pub fn new(h: &Hypergraph, partite: Option<&[Vec<usize>]>) -> Result<Self> {
        let table = PerfectMatchingTable::new(h, partite, DEFAULT_MATCHING_BUDGET)?;
        if table.count() == 0 {
            return Err(Error::Precondition("host has no perfect matching".into()));
        }
        let ground = table.edges.iter().cloned().collect();
        Ok(MatchingSampler { table, ground })
    }

    pub fn table(&self) -> &PerfectMatchingTable {
        &self.table
    }
}

impl Sampler for MatchingSampler {
    fn vertex_count(&self) -> usize {
        self.table.n
    }

    fn in_ground(&self, element: &[usize]) -> bool {
        self.ground.contains(element)
    }

    fn sample(&mut self, stream: &mut SeededStream) -> Result<Vec<Vec<usize>>> {
        self.table
            .sample(stream)
            .ok_or_else(|| Error::Internal("matching table lost its matchings".into()))
    }
}
