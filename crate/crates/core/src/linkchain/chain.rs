use serde::Serialize;

use super::Link;
use crate::error::{Error, Result};
use crate::hypercore::Digraph;

/// A closed `L`-chain: window `i` covers the cyclic positions
/// `ir, ..., ir + r + ℓ - 1` of `ordering` and carries a copy of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedChain {
    pub link: Link,
    pub ordering: Vec<usize>,
    #[serde(skip)]
    pub edges: Digraph,
}

/// An open `L`-chain on `n ≡ ℓ (mod r)` vertices, without wraparound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenChain {
    pub link: Link,
    pub ordering: Vec<usize>,
    #[serde(skip)]
    pub edges: Digraph,
}

impl ClosedChain {
    pub fn n(&self) -> usize {
        self.ordering.len()
    }
}

impl OpenChain {
    pub fn n(&self) -> usize {
        self.ordering.len()
    }

    /// The first `ℓ` vertices.
    pub fn start(&self) -> &[usize] {
        &self.ordering[..self.link.ell()]
    }

    /// The last `ℓ` vertices.
    pub fn end(&self) -> &[usize] {
        &self.ordering[self.n() - self.link.ell()..]
    }
}

fn is_permutation(ordering: &[usize]) -> bool {
    let n = ordering.len();
    let mut seen = vec![false; n + 1];
    ordering.iter().all(|&v| {
        if v == 0 || v > n || seen[v] {
            return false;
        }
        seen[v] = true;
        true
    })
}

pub(crate) fn closed_shape_ok(link: &Link, n: usize) -> Result<()> {
    if n % link.r() != 0 {
        return Err(Error::param(format!("closed chains need r = {} to divide n = {n}", link.r())));
    }
    if n < 2 * link.order() {
        return Err(Error::param(format!("closed chains need n >= 2(r+ℓ) = {}, got {n}", 2 * link.order())));
    }
    Ok(())
}

pub(crate) fn open_shape_ok(link: &Link, n: usize) -> Result<()> {
    if n < link.order() || (n - link.ell()) % link.r() != 0 {
        return Err(Error::param(format!(
            "open chains need n >= r+ℓ and n ≡ ℓ (mod r); got n={n}, r={}, ℓ={}",
            link.r(),
            link.ell()
        )));
    }
    Ok(())
}

/// Edge tuples of every window copy, in window order.
pub(crate) fn window_edges(link: &Link, ordering: &[usize], closed: bool) -> Vec<Vec<usize>> {
    let n = ordering.len();
    let windows = if closed { n / link.r() } else { (n - link.ell()) / link.r() };
    let mut out = Vec::with_capacity(windows * link.edge_count());
    for w in 0..windows {
        let base = w * link.r();
        for e in link.edges() {
            out.push(e.iter().map(|&j| ordering[(base + j - 1) % n]).collect());
        }
    }
    out
}

pub fn build_closed_chain(link: &Link, ordering: &[usize]) -> Result<ClosedChain> {
    let n = ordering.len();
    closed_shape_ok(link, n)?;
    if !is_permutation(ordering) {
        return Err(Error::param("ordering is not a permutation of 1..=n"));
    }
    let tuples = window_edges(link, ordering, true);
    let expected = tuples.len();
    let edges = Digraph::new(n, tuples)?;
    if edges.edge_count() != expected {
        return Err(Error::Internal(format!(
            "window copies collided: {} distinct edges, expected {expected}",
            edges.edge_count()
        )));
    }
    Ok(ClosedChain { link: link.clone(), ordering: ordering.to_vec(), edges })
}

/// Builds an open chain on the vertices of `ordering`, which may be any
/// list of distinct vertices of `1..=n`.
pub fn build_open_chain(link: &Link, n: usize, ordering: &[usize]) -> Result<OpenChain> {
    open_shape_ok(link, ordering.len())?;
    let tuples = window_edges(link, ordering, false);
    let expected = tuples.len();
    let edges = Digraph::new(n, tuples)?;
    if edges.edge_count() != expected {
        return Err(Error::Internal("window copies collided".into()));
    }
    Ok(OpenChain { link: link.clone(), ordering: ordering.to_vec(), edges })
}

/// True iff `ordering` is a permutation of `1..=v(D)` and `D` contains
/// every edge of the closed chain it spans.
pub fn validate_closed_chain(link: &Link, d: &Digraph, ordering: &[usize]) -> bool {
    ordering.len() == d.n()
        && closed_shape_ok(link, ordering.len()).is_ok()
        && is_permutation(ordering)
        && window_edges(link, ordering, true).iter().all(|e| d.contains(e))
}

/// True iff `ordering` lists distinct vertices of `D` of a valid open-chain
/// length and `D` contains every edge of the chain.
pub fn validate_open_chain(link: &Link, d: &Digraph, ordering: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::new();
    open_shape_ok(link, ordering.len()).is_ok()
        && ordering.iter().all(|&v| v >= 1 && v <= d.n() && seen.insert(v))
        && window_edges(link, ordering, false).iter().all(|e| d.contains(e))
}
