use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;
use crate::rational::Rational;

/// Default cap on backtracking nodes for the F-copy search.
pub const DEFAULT_COPY_BUDGET: u64 = 50_000_000;

/// `d_1(F) = e(F) / (v(F) - 1)`.
pub fn one_density(f: &Hypergraph) -> Result<Rational> {
    if f.n() < 2 {
        return Err(Error::param("1-density needs at least 2 vertices"));
    }
    Ok(Rational::new(f.edge_count() as i64, f.n() as i64 - 1))
}

/// True iff every proper subgraph with at least one edge (taken on the
/// support of its edges) has 1-density strictly below `d_1(F)`.
///
/// Scans vertex sets: an edge subset on support `U` is dominated by the
/// edges induced on `U`, so checking induced subgraphs suffices.
pub fn is_strictly_one_balanced(f: &Hypergraph) -> Result<bool> {
    let d1 = one_density(f)?;
    if f.n() > 24 {
        return Err(Error::Budget(format!("strict 1-balance is enumerated for at most 24 vertices, got {}", f.n())));
    }
    let masks: Vec<u32> = f.edges().map(|e| e.iter().fold(0u32, |m, &v| m | 1 << (v - 1))).collect();
    let full: u32 = if f.n() == 32 { u32::MAX } else { (1u32 << f.n()) - 1 };
    for s in 1..=full {
        let mut e = 0i64;
        let mut support = 0u32;
        for &m in &masks {
            if m & s == m {
                e += 1;
                support |= m;
            }
        }
        if e == 0 {
            continue;
        }
        let whole = support == full && e as usize == f.edge_count();
        if !whole && Rational::new(e, support.count_ones() as i64 - 1) >= d1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `v(F)`-graph on `V(G)` whose edges are the sets `Y` such that `G[Y]`
/// contains a copy of `F`. Its perfect matchings are the perfect `F`-tilings
/// of `G`.
pub fn f_copy_hypergraph(g: &Hypergraph, f: &Hypergraph, budget: u64) -> Result<Hypergraph> {
    if g.k() != f.k() {
        return Err(Error::param(format!("uniformities differ: G is {}-uniform, F is {}-uniform", g.k(), f.k())));
    }
    let m = f.n();
    if m > g.n() {
        return Err(Error::param(format!("F has {m} vertices but G only {}", g.n())));
    }
    if m < f.k() {
        return Err(Error::param("F needs at least k vertices"));
    }
    // Place high-degree vertices of F first so edges close early.
    let fdeg = f.degrees();
    let mut order: Vec<usize> = (1..=m).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(fdeg[v]));
    let mut pos = vec![0usize; m + 1];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // checks[i]: F-edges whose last placed vertex is order[i].
    let mut checks: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m];
    for e in f.edges() {
        let last = e.iter().map(|&v| pos[v]).max().unwrap_or(0);
        checks[last].push(e.iter().map(|&v| pos[v]).collect());
    }
    let need = f.edge_count();
    let mut nodes = 0u64;
    let mut found = BTreeSet::new();
    for y in (1..=g.n()).combinations(m) {
        if g.induced(&y).edge_count() < need {
            continue;
        }
        let gy = g.induced(&y);
        let ydeg = gy.degrees();
        let mut image = vec![0usize; m];
        let mut used = vec![false; g.n() + 1];
        if embed(0, &order, &fdeg, &ydeg, &y, &checks, &gy, &mut image, &mut used, &mut nodes, budget)? {
            found.insert(y);
        }
    }
    Hypergraph::new(g.n(), m, found)
}

#[allow(clippy::too_many_arguments)]
fn embed(
    i: usize,
    order: &[usize],
    fdeg: &[usize],
    ydeg: &[usize],
    y: &[usize],
    checks: &[Vec<Vec<usize>>],
    gy: &Hypergraph,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    if i == order.len() {
        return Ok(true);
    }
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::Budget(format!("F-copy search exceeded {budget} nodes")));
    }
    for &w in y {
        if used[w] || ydeg[w] < fdeg[order[i]] {
            continue;
        }
        image[i] = w;
        let ok = checks[i].iter().all(|e| gy.contains_set(&e.iter().map(|&p| image[p]).collect::<Vec<_>>()));
        if !ok {
            continue;
        }
        used[w] = true;
        let done = embed(i + 1, order, fdeg, ydeg, y, checks, gy, image, used, nodes, budget)?;
        used[w] = false;
        if done {
            return Ok(true);
        }
    }
    Ok(false)
}
