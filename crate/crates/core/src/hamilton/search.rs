use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypercore::Digraph;
use crate::linkchain::Link;

/// Default cap on search nodes (vertex placements tried).
pub const DEFAULT_SEARCH_BUDGET: u64 = 5_000_000;

/// Result of a Hamilton chain search. `Unknown` means the node budget ran
/// out before the search space was exhausted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    Found(Vec<usize>),
    NotFound,
    Unknown,
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ValueOrder {
    /// Try candidates with the fewest valid successors first (fail-first).
    FewestExtensions,
    /// Smallest label first; finds the lexicographically least ordering.
    Lexicographic,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub budget: u64,
    pub order: ValueOrder,
    /// For closed chains, pin the smallest vertex to the first `r`
    /// positions (every closed chain has such a rotation).
    pub break_symmetry: bool,
    /// Prune when an unplaced vertex cannot collect enough edges among the
    /// vertices still able to share an edge with it.
    pub forward_check: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_SEARCH_BUDGET,
            order: ValueOrder::FewestExtensions,
            break_symmetry: true,
            forward_check: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EnumerationEnd {
    /// Every ordering was visited.
    Complete,
    /// The visitor asked to stop.
    Stopped,
    BudgetExhausted,
}

/// Membership test for `k`-tuples of a digraph, keyed by base-`(n+1)` codes.
enum TupleIndex {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl TupleIndex {
    fn contains(&self, code: u64) -> bool {
        match self {
            TupleIndex::Dense(bits) => bits[(code >> 6) as usize] >> (code & 63) & 1 == 1,
            TupleIndex::Sparse(set) => set.contains(&code),
        }
    }
}

/// Precomputed state for repeated Hamilton `L`-chain searches in one
/// digraph over a fixed vertex set.
pub struct ChainSearcher {
    link: Link,
    closed: bool,
    verts: Vec<usize>,
    base: u64,
    index: TupleIndex,
    /// `checks[p]`: position tuples of chain edges completed at position `p`.
    checks: Vec<Vec<Vec<usize>>>,
    /// `need[p]`: least number of distinct chain edge sets through any
    /// position `>= p`.
    need: Vec<usize>,
    /// Distinct vertex masks of `k`-edges of `D` through each vertex.
    incident: Vec<Vec<u128>>,
}

struct Run<'a, F: FnMut(&[usize]) -> bool> {
    s: &'a ChainSearcher,
    opts: SearchOptions,
    ordering: Vec<usize>,
    placed: Vec<bool>,
    reserved: Vec<bool>,
    forced: Vec<usize>,
    nodes: u64,
    out_of_budget: bool,
    stopped: bool,
    visit: F,
}

impl ChainSearcher {
    /// Searches over all vertices `1..=v(D)`.
    pub fn new(d: &Digraph, link: &Link, closed: bool) -> Result<Self> {
        let verts: Vec<usize> = (1..=d.n()).collect();
        Self::on_vertices(d, link, closed, &verts)
    }

    /// Searches for chains spanning exactly `vertices` (original labels).
    pub fn on_vertices(d: &Digraph, link: &Link, closed: bool, vertices: &[usize]) -> Result<Self> {
        let n = vertices.len();
        if closed {
            crate::linkchain::closed_shape_ok(link, n)?;
        } else {
            crate::linkchain::open_shape_ok(link, n)?;
        }
        if d.n() > 127 {
            return Err(Error::param("chain search supports at most 127 vertices"));
        }
        let k = link.k();
        if k > 9 {
            return Err(Error::param("chain search supports edges of at most 9 vertices"));
        }
        let mut verts = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() != n || verts.iter().any(|&v| v == 0 || v > d.n()) {
            return Err(Error::param("search vertices must be distinct vertices of D"));
        }
        let mut inside = vec![false; d.n() + 1];
        for &v in &verts {
            inside[v] = true;
        }
        let base = d.n() as u64 + 1;
        let encode = |t: &[usize]| t.iter().fold(0u64, |c, &v| c * base + v as u64);
        let tuples: Vec<&Vec<usize>> = d
            .tuples_of_len(k)
            .filter(|t| t.iter().all(|&v| inside[v]))
            .collect();
        let space = base.checked_pow(k as u32).unwrap_or(u64::MAX);
        let index = if space <= 1 << 26 {
            let mut bits = vec![0u64; (space as usize >> 6) + 1];
            for t in &tuples {
                let c = encode(t);
                bits[(c >> 6) as usize] |= 1 << (c & 63);
            }
            TupleIndex::Dense(bits)
        } else {
            TupleIndex::Sparse(tuples.iter().map(|t| encode(t)).collect())
        };
        let mut incident: Vec<Vec<u128>> = vec![Vec::new(); d.n() + 1];
        for t in &tuples {
            let m = t.iter().fold(0u128, |m, &v| m | 1 << v);
            for &v in t.iter() {
                incident[v].push(m);
            }
        }
        for list in incident.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }

        let windows = if closed { n / link.r() } else { (n - link.ell()) / link.r() };
        let mut checks: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
        let mut through: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); n];
        for w in 0..windows {
            for e in link.edges() {
                let pos: Vec<usize> = e.iter().map(|&j| (w * link.r() + j - 1) % n).collect();
                let last = *pos.iter().max().expect("link edges are nonempty");
                let mut set = pos.clone();
                set.sort_unstable();
                for &p in &pos {
                    through[p].insert(set.clone());
                }
                checks[last].push(pos);
            }
        }
        let mut need = vec![0usize; n + 1];
        need[n] = usize::MAX;
        for p in (0..n).rev() {
            need[p] = need[p + 1].min(through[p].len());
        }
        Ok(ChainSearcher { link: link.clone(), closed, verts, base, index, checks, need, incident })
    }

    pub fn link(&self) -> &Link {
        &self.link
    }

    fn check_ends(&self, start: Option<&[usize]>, end: Option<&[usize]>) -> Result<()> {
        let ell = self.link.ell();
        for t in [start, end].into_iter().flatten() {
            if self.closed && !t.is_empty() {
                return Err(Error::param("closed chains take no end tuples"));
            }
            if t.len() != ell {
                return Err(Error::param(format!("end tuple {t:?} does not have ℓ = {ell} vertices")));
            }
            if t.iter().any(|v| self.verts.binary_search(v).is_err()) {
                return Err(Error::param(format!("end tuple {t:?} leaves the search vertices")));
            }
        }
        let mut all: Vec<usize> = start.unwrap_or(&[]).iter().chain(end.unwrap_or(&[])).copied().collect();
        let len = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != len {
            return Err(Error::param("end tuples must consist of distinct vertices and be disjoint"));
        }
        Ok(())
    }

    /// Finds one chain ordering (start tuple first, end tuple last).
    pub fn find(&self, start: Option<&[usize]>, end: Option<&[usize]>, opts: &SearchOptions) -> Result<SearchOutcome> {
        let mut found = None;
        let end_state = self.enumerate(start, end, opts, |o| {
            found = Some(o.to_vec());
            false
        })?;
        Ok(match (found, end_state) {
            (Some(o), _) => SearchOutcome::Found(o),
            (None, EnumerationEnd::BudgetExhausted) => SearchOutcome::Unknown,
            (None, _) => SearchOutcome::NotFound,
        })
    }

    /// Calls `visit` on every chain ordering found; `visit` returns false
    /// to stop. With `break_symmetry` off, each ordering of a closed chain
    /// is visited separately (rotations and reflections included).
    pub fn enumerate(
        &self,
        start: Option<&[usize]>,
        end: Option<&[usize]>,
        opts: &SearchOptions,
        visit: impl FnMut(&[usize]) -> bool,
    ) -> Result<EnumerationEnd> {
        self.check_ends(start, end)?;
        let n = self.verts.len();
        let size = self.verts.last().map_or(1, |&v| v + 1);
        let mut forced = vec![0usize; n];
        let mut reserved = vec![false; size];
        if let Some(s) = start {
            forced[..s.len()].copy_from_slice(s);
        }
        if let Some(e) = end {
            forced[n - e.len()..].copy_from_slice(e);
            for &v in e {
                reserved[v] = true;
            }
        }
        if let Some(s) = start {
            for &v in s {
                reserved[v] = true;
            }
        }
        let mut run = Run {
            s: self,
            opts: *opts,
            ordering: Vec::with_capacity(n),
            placed: vec![false; size],
            reserved,
            forced,
            nodes: 0,
            out_of_budget: false,
            stopped: false,
            visit,
        };
        run.extend();
        Ok(if run.out_of_budget {
            EnumerationEnd::BudgetExhausted
        } else if run.stopped {
            EnumerationEnd::Stopped
        } else {
            EnumerationEnd::Complete
        })
    }

    fn code(&self, positions: &[usize], ordering: &[usize]) -> u64 {
        positions.iter().fold(0u64, |c, &p| c * self.base + ordering[p] as u64)
    }

    /// Checks at position `p`, with `ordering[p]` already written.
    fn position_ok(&self, p: usize, ordering: &[usize]) -> bool {
        self.checks[p].iter().all(|t| self.index.contains(self.code(t, ordering)))
    }
}

impl<F: FnMut(&[usize]) -> bool> Run<'_, F> {
    fn extend(&mut self) {
        let s = self.s;
        let n = s.verts.len();
        let p = self.ordering.len();
        if p == n {
            if !(self.visit)(&self.ordering) {
                self.stopped = true;
            }
            return;
        }
        if s.closed && self.opts.break_symmetry && p == s.link.r() && !self.placed[s.verts[0]] {
            return;
        }
        if self.opts.forward_check && !self.forward_ok(p) {
            return;
        }
        let candidates = self.candidates(p);
        for v in candidates {
            if self.stopped || self.out_of_budget {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.opts.budget {
                self.out_of_budget = true;
                return;
            }
            self.ordering.push(v);
            self.placed[v] = true;
            self.extend();
            self.placed[v] = false;
            self.ordering.pop();
        }
    }

    fn is_free(&self, v: usize) -> bool {
        !self.placed[v] && !self.reserved[v]
    }

    /// Valid vertices for position `p` in the order they should be tried.
    fn candidates(&mut self, p: usize) -> Vec<usize> {
        let s = self.s;
        let n = s.verts.len();
        let pool: Vec<usize> = if self.forced[p] != 0 {
            vec![self.forced[p]]
        } else {
            s.verts.iter().copied().filter(|&v| self.is_free(v)).collect()
        };
        let mut valid = Vec::with_capacity(pool.len());
        for v in pool {
            self.ordering.push(v);
            let ok = s.position_ok(p, &self.ordering);
            self.ordering.pop();
            if ok {
                valid.push(v);
            }
        }
        if self.opts.order == ValueOrder::Lexicographic || valid.len() <= 1 || p + 1 >= n {
            return valid;
        }
        let mut scored: Vec<(usize, usize)> = Vec::with_capacity(valid.len());
        for v in valid {
            self.ordering.push(v);
            self.placed[v] = true;
            let next_pool: Vec<usize> = if self.forced[p + 1] != 0 {
                vec![self.forced[p + 1]]
            } else {
                s.verts.iter().copied().filter(|&w| self.is_free(w)).collect()
            };
            let mut count = 0;
            for w in next_pool {
                self.ordering.push(w);
                if s.position_ok(p + 1, &self.ordering) {
                    count += 1;
                }
                self.ordering.pop();
            }
            self.placed[v] = false;
            self.ordering.pop();
            if count > 0 {
                scored.push((count, v));
            }
        }
        scored.sort_unstable();
        scored.into_iter().map(|(_, v)| v).collect()
    }

    /// Every vertex still to be placed must see at least `need[p]` distinct
    /// edges whose other vertices could still share a window with it.
    fn forward_ok(&self, p: usize) -> bool {
        let s = self.s;
        let need = s.need[p];
        if need == 0 {
            return true;
        }
        let span = s.link.order() - 1;
        let mut allowed: u128 = 0;
        for &v in &s.verts {
            if !self.placed[v] {
                allowed |= 1 << v;
            }
        }
        for &v in &self.ordering[p.saturating_sub(span)..] {
            allowed |= 1 << v;
        }
        if s.closed {
            for &v in self.ordering.iter().take(s.link.ell()) {
                allowed |= 1 << v;
            }
        }
        s.verts.iter().filter(|&&u| !self.placed[u]).all(|&u| {
            s.incident[u].iter().filter(|&&m| m & allowed == m).take(need).count() >= need
        })
    }
}

/// One-shot search over all vertices of `D`.
pub fn find_hamilton_chain(
    d: &Digraph,
    link: &Link,
    start: Option<&[usize]>,
    end: Option<&[usize]>,
    closed: bool,
    budget: u64,
) -> Result<SearchOutcome> {
    let searcher = ChainSearcher::new(d, link, closed)?;
    searcher.find(start, end, &SearchOptions { budget, ..SearchOptions::default() })
}

/// Calls `visit` on every closed (or open) Hamilton chain ordering of `D`
/// without symmetry breaking.
pub fn enumerate_hamilton_chains(
    d: &Digraph,
    link: &Link,
    closed: bool,
    budget: u64,
    visit: impl FnMut(&[usize]) -> bool,
) -> Result<EnumerationEnd> {
    let searcher = ChainSearcher::new(d, link, closed)?;
    let opts = SearchOptions { budget, order: ValueOrder::Lexicographic, break_symmetry: false, forward_check: true };
    searcher.enumerate(None, None, &opts, visit)
}
