use serde::Serialize;

use super::chain::{build_closed_chain, closed_shape_ok};
use super::Link;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest chain edge count enumerated subset by subset by default.
pub const DEFAULT_MAX_EDGES: usize = 24;

/// Largest `n` for which vertex subsets are enumerated.
const VERTEX_ROUTE_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BalanceMethod {
    /// Edge subsets when `e(C) <= max_edges`, vertex subsets otherwise.
    Auto,
    EdgeSubsets,
    /// For each vertex set, its induced edges (restricted to their support).
    /// Any violating edge subset is dominated by the induced subgraph on its
    /// support, so both routes find a violation in the same cases.
    VertexSubsets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `e > d v`.
    B1,
    /// `v <= n / (2 v(L))` and `e > d v - λ`.
    B2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceWitness {
    pub vertices: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
    pub violation: Violation,
}

#[derive(Clone, Debug, Serialize)]
pub struct BalanceReport {
    #[serde(serialize_with = "rational::serialize")]
    pub d: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub lambda: Rational,
    pub n: usize,
    pub link_order: usize,
    pub holds: bool,
    pub witness: Option<BalanceWitness>,
    pub method: BalanceMethod,
    pub subsets_checked: u64,
}

impl BalanceReport {
    /// Re-evaluates the witness inequality from scratch; true when the
    /// witness really violates it (or there is no witness and `holds`).
    pub fn recheck(&self) -> bool {
        match &self.witness {
            None => self.holds,
            Some(w) => {
                let v = Rational::from_integer(w.vertices.len() as i64);
                let e = Rational::from_integer(w.edges.len() as i64);
                let small = 2 * self.link_order * w.vertices.len() <= self.n;
                !self.holds
                    && match w.violation {
                        Violation::B1 => e > self.d * v,
                        Violation::B2 => small && e > self.d * v - self.lambda,
                    }
            }
        }
    }
}

struct Inequalities {
    da: i128,
    db: i128,
    la: i128,
    lb: i128,
    n: usize,
    order: usize,
}

impl Inequalities {
    fn violated(&self, e: usize, v: usize) -> Option<Violation> {
        let (e, vv) = (e as i128, v as i128);
        if e * self.db > self.da * vv {
            return Some(Violation::B1);
        }
        if 2 * self.order * v <= self.n && e * self.db * self.lb > self.da * self.lb * vv - self.la * self.db {
            return Some(Violation::B2);
        }
        None
    }
}

pub fn check_balanced(link: &Link, n: usize, d: Rational, lambda: Rational, max_edges: usize) -> Result<BalanceReport> {
    check_balanced_with(link, n, d, lambda, max_edges, BalanceMethod::Auto)
}

/// Checks (B1) `e <= d v` for every nonempty subgraph of the canonical
/// closed chain on `n` vertices, and (B2) `e <= d v - λ` for those with
/// `v <= n / (2 v(L))`.
pub fn check_balanced_with(
    link: &Link,
    n: usize,
    d: Rational,
    lambda: Rational,
    max_edges: usize,
    method: BalanceMethod,
) -> Result<BalanceReport> {
    closed_shape_ok(link, n)?;
    if n > 63 {
        return Err(Error::param("balance checks support at most 63 vertices"));
    }
    let identity: Vec<usize> = (1..=n).collect();
    let chain = build_closed_chain(link, &identity)?;
    let edges: Vec<Vec<usize>> = chain.edges.edges().cloned().collect();
    let masks: Vec<u64> = edges.iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << (v - 1))).collect();
    let ineq = Inequalities {
        da: *d.numer() as i128,
        db: *d.denom() as i128,
        la: *lambda.numer() as i128,
        lb: *lambda.denom() as i128,
        n,
        order: link.order(),
    };
    let method = match method {
        BalanceMethod::Auto if edges.len() <= max_edges => BalanceMethod::EdgeSubsets,
        BalanceMethod::Auto => BalanceMethod::VertexSubsets,
        m => m,
    };
    let (witness, checked) = match method {
        BalanceMethod::EdgeSubsets => {
            if edges.len() > max_edges || edges.len() > 40 {
                return Err(Error::Budget(format!(
                    "chain has {} edges; edge-subset enumeration is capped at {}",
                    edges.len(),
                    max_edges.min(40)
                )));
            }
            by_edge_subsets(&edges, n, &ineq)
        }
        _ => {
            if n > VERTEX_ROUTE_LIMIT {
                return Err(Error::Budget(format!(
                    "vertex-subset enumeration is capped at n = {VERTEX_ROUTE_LIMIT}, got {n}"
                )));
            }
            by_vertex_subsets(&edges, &masks, n, &ineq)
        }
    };
    Ok(BalanceReport {
        d,
        lambda,
        n,
        link_order: link.order(),
        holds: witness.is_none(),
        witness,
        method,
        subsets_checked: checked,
    })
}

fn witness_from(edges: &[Vec<usize>], chosen: impl Iterator<Item = usize>, violation: Violation) -> BalanceWitness {
    let edges: Vec<Vec<usize>> = chosen.map(|i| edges[i].clone()).collect();
    let mut vertices: Vec<usize> = edges.iter().flatten().copied().collect();
    vertices.sort_unstable();
    vertices.dedup();
    BalanceWitness { vertices, edges, violation }
}

/// Gray-code walk over all edge subsets, tracking vertex multiplicities.
fn by_edge_subsets(edges: &[Vec<usize>], n: usize, ineq: &Inequalities) -> (Option<BalanceWitness>, u64) {
    let m = edges.len();
    let mut count = vec![0u32; n + 1];
    let mut support = 0usize;
    let mut chosen = 0u64;
    let mut size = 0usize;
    let total: u64 = 1 << m;
    for step in 1..total {
        let bit = step.trailing_zeros() as usize;
        chosen ^= 1 << bit;
        let adding = chosen >> bit & 1 == 1;
        for &v in &edges[bit] {
            if adding {
                count[v] += 1;
                if count[v] == 1 {
                    support += 1;
                }
            } else {
                count[v] -= 1;
                if count[v] == 0 {
                    support -= 1;
                }
            }
        }
        if adding {
            size += 1;
        } else {
            size -= 1;
        }
        if let Some(violation) = ineq.violated(size, support) {
            let w = witness_from(edges, (0..m).filter(|i| chosen >> i & 1 == 1), violation);
            return (Some(w), step);
        }
    }
    (None, total - 1)
}

fn by_vertex_subsets(edges: &[Vec<usize>], masks: &[u64], n: usize, ineq: &Inequalities) -> (Option<BalanceWitness>, u64) {
    let total: u64 = 1 << n;
    for s in 1..total {
        let mut e = 0usize;
        let mut support = 0u64;
        for &m in masks {
            if m & s == m {
                e += 1;
                support |= m;
            }
        }
        if e == 0 {
            continue;
        }
        if let Some(violation) = ineq.violated(e, support.count_ones() as usize) {
            let chosen = (0..masks.len()).filter(|&i| masks[i] & s == masks[i]);
            return (Some(witness_from(edges, chosen, violation)), s);
        }
    }
    (None, total - 1)
}
