use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypercore::{io_join, parse_digraph, Digraph};

/// A `(k, ℓ, r)`-link: a directed `k`-graph on template vertices
/// `1..=r+ℓ` whose last `ℓ` vertices are independent. Chains are built by
/// stepping copies of the link by `r` positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Link {
    k: usize,
    ell: usize,
    r: usize,
    edges: Vec<Vec<usize>>,
}

impl Link {
    pub fn new(k: usize, ell: usize, r: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(k, ell, r, edges, false)
    }

    /// Like [`Link::new`] but accepts an edgeless link.
    pub fn new_allow_empty(k: usize, ell: usize, r: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(k, ell, r, edges, true)
    }

    fn build(k: usize, ell: usize, r: usize, edges: Vec<Vec<usize>>, allow_empty: bool) -> Result<Self> {
        if k < 2 || r < 1 {
            return Err(Error::param(format!("link needs k >= 2 and r >= 1, got k={k}, r={r}")));
        }
        let order = r + ell;
        if order < k {
            return Err(Error::param(format!("link order r+ℓ = {order} is smaller than k = {k}")));
        }
        if edges.is_empty() && !allow_empty {
            return Err(Error::param("link has no edges"));
        }
        for e in &edges {
            if !e.is_empty() && e.iter().all(|&v| v > r && v <= order) {
                return Err(Error::param(format!(
                    "edge {e:?} lies inside the last {ell} vertices, which must be independent"
                )));
            }
            if e.len() != k {
                return Err(Error::param(format!("edge {e:?} is not a {k}-tuple")));
            }
            if e.iter().any(|&v| v == 0 || v > order) {
                return Err(Error::param(format!("edge {e:?} leaves the template 1..={order}")));
            }
            if e.iter().duplicates().next().is_some() {
                return Err(Error::param(format!("edge {e:?} repeats a vertex")));
            }
        }
        let mut edges = edges;
        edges.sort();
        edges.dedup();
        Ok(Link { k, ell, r, edges })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `v(L) = r + ℓ`.
    pub fn order(&self) -> usize {
        self.r + self.ell
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn as_digraph(&self) -> Digraph {
        Digraph::new(self.order(), self.edges.iter().cloned()).expect("link edges are validated")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BuiltinLink {
    /// Single edge `(1..k)` with `r = k - ℓ`: its chains are ℓ-cycles.
    EllCycle { k: usize, ell: usize },
    /// `ℓ = 0`: chains are perfect matchings.
    Matching { k: usize },
    /// The `(k, t-1, 1)`-link with every edge `(1, i_1, ..., i_{k-1})`,
    /// `2 <= i_1 < ... < i_{k-1} <= t`; chains are powers of tight cycles.
    Power { k: usize, t: usize },
}

pub fn builtin_link(kind: BuiltinLink) -> Result<Link> {
    match kind {
        BuiltinLink::EllCycle { k, ell } => {
            if k < 2 || ell >= k {
                return Err(Error::param(format!("ell_cycle needs k >= 2 and 0 <= ℓ < k, got k={k}, ℓ={ell}")));
            }
            Link::new(k, ell, k - ell, vec![(1..=k).collect()])
        }
        BuiltinLink::Matching { k } => builtin_link(BuiltinLink::EllCycle { k, ell: 0 }),
        BuiltinLink::Power { k, t } => {
            if k < 2 || t < k {
                return Err(Error::param(format!("power link needs 2 <= k <= t, got k={k}, t={t}")));
            }
            let edges = (2..=t)
                .combinations(k - 1)
                .map(|rest| std::iter::once(1).chain(rest).collect())
                .collect();
            Link::new(k, t - 1, 1, edges)
        }
    }
}

impl BuiltinLink {
    pub fn link(self) -> Result<Link> {
        builtin_link(self)
    }
}

impl fmt::Display for BuiltinLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinLink::EllCycle { k, ell } => write!(f, "ell_cycle:{k}:{ell}"),
            BuiltinLink::Matching { k } => write!(f, "matching:{k}"),
            BuiltinLink::Power { k, t } => write!(f, "power:{k}:{t}"),
        }
    }
}

/// Parses `ell_cycle:K:ELL`, `matching:K` or `power:K:T`.
impl FromStr for BuiltinLink {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::param(format!("bad link spec {s:?}")))
        };
        let link = match (parts[0], parts.len()) {
            ("ell_cycle", 3) => BuiltinLink::EllCycle { k: num(1)?, ell: num(2)? },
            ("matching", 2) => BuiltinLink::Matching { k: num(1)? },
            ("power", 3) => BuiltinLink::Power { k: num(1)?, t: num(2)? },
            _ => {
                return Err(Error::param(format!(
                    "bad link spec {s:?}; expected ell_cycle:K:ELL, matching:K or power:K:T"
                )))
            }
        };
        link.link()?;
        Ok(link)
    }
}

/// `L <k> <ell> <r>` followed by the link's digraph in the graph format.
pub fn serialize_link(link: &Link) -> String {
    let mut out = format!("L {} {} {}\nD {}\n", link.k, link.ell, link.r, link.order());
    for e in &link.edges {
        out.push_str(&format!("{}: {}\n", e.len(), io_join(e)));
    }
    out
}

pub fn parse_link(text: &str) -> Result<Link> {
    let mut header = None;
    let mut rest = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if header.is_none() {
            if line.is_empty() {
                rest.push('\n');
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let nums: Option<Vec<usize>> = fields.iter().skip(1).map(|f| f.parse().ok()).collect();
            match (fields.first(), nums) {
                (Some(&"L"), Some(v)) if v.len() == 3 => header = Some((v[0], v[1], v[2])),
                _ => return Err(Error::parse(i + 1, "expected `L <k> <ell> <r>`")),
            }
            // Keep line numbers aligned for the digraph parser.
            rest.push_str("# link header\n");
        } else {
            rest.push_str(raw);
            rest.push('\n');
        }
    }
    let (k, ell, r) = header.ok_or_else(|| Error::parse(1, "missing link header"))?;
    let d = parse_digraph(&rest)?;
    if d.n() != r + ell {
        return Err(Error::param(format!("link digraph has {} vertices, expected r+ℓ = {}", d.n(), r + ell)));
    }
    Link::new(k, ell, r, d.edges().cloned().collect())
}
