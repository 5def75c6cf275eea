use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::index::sample;
use serde::Serialize;

use super::connect::{is_hamilton_l_connected, is_strongly_hamilton_l_connected, Verdict};
use crate::error::{Error, Result};
use crate::hypercore::{Digraph, GraphFile, Hypergraph};
use crate::linkchain::{BuiltinLink, Link};
use crate::randomness::{count_perfect_matchings, SeededStream, GENERATOR};
use crate::rational::{self, Rational};
use crate::util::binomial;

/// Default cap on the number of `s`-sets examined exhaustively.
pub const DEFAULT_PROPERTY_BUDGET: u128 = 2_000_000;

pub type CustomTest = Arc<dyn Fn(&GraphFile) -> Result<bool> + Send + Sync>;

/// A property of small induced subgraphs `G[S]`, evaluated on `G[S]`
/// relabelled to `1..=|S|`.
#[derive(Clone)]
pub enum Predicate {
    /// Hamilton `L`-connectedness. Uniform hosts are read as
    /// `C→(G) ∪ C→(∂_ℓ G)` (just `C→(G)` when `ℓ` is `0` or `k`).
    HamiltonLConnected(Link),
    StronglyHamiltonConnected { ell: usize },
    HasPerfectMatching,
    /// `δ_d(G[S]) >= ratio * binom(s - d, k - d)`.
    MinDegreeAtLeast { d: usize, ratio: Rational },
    Custom { name: String, test: CustomTest },
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Predicate {
    /// Parses `perfect_matching`, `hamilton_connected:<link>`,
    /// `strongly_connected:<ell>` or `min_degree:<d>:<ratio>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "perfect_matching" {
            return Ok(Predicate::HasPerfectMatching);
        }
        if let Some(rest) = spec.strip_prefix("hamilton_connected:") {
            let link: BuiltinLink = rest.parse()?;
            return Ok(Predicate::HamiltonLConnected(link.link()?));
        }
        if let Some(rest) = spec.strip_prefix("strongly_connected:") {
            let ell = rest.parse().map_err(|_| Error::param(format!("bad ℓ in {spec:?}")))?;
            return Ok(Predicate::StronglyHamiltonConnected { ell });
        }
        if let Some(rest) = spec.strip_prefix("min_degree:") {
            if let Some((d, ratio)) = rest.split_once(':') {
                let d = d.parse().map_err(|_| Error::param(format!("bad d in {spec:?}")))?;
                return Ok(Predicate::MinDegreeAtLeast { d, ratio: rational::parse_rational(ratio)? });
            }
        }
        Err(Error::param(format!(
            "unknown predicate {spec:?}; expected perfect_matching, hamilton_connected:<link>, \
             strongly_connected:<ell> or min_degree:<d>:<ratio>"
        )))
    }

    pub fn name(&self) -> String {
        match self {
            Predicate::HamiltonLConnected(l) => {
                format!("hamilton_connected:L({},{},{};{} edges)", l.k(), l.ell(), l.r(), l.edge_count())
            }
            Predicate::StronglyHamiltonConnected { ell } => format!("strongly_connected:{ell}"),
            Predicate::HasPerfectMatching => "perfect_matching".into(),
            Predicate::MinDegreeAtLeast { d, ratio } => format!("min_degree:{d}:{ratio}"),
            Predicate::Custom { name, .. } => name.clone(),
        }
    }

    /// Evaluates the predicate on `G[set]`. A search that runs out of
    /// `budget` is reported as a Budget error.
    pub fn eval(&self, host: &GraphFile, set: &[usize], budget: u64) -> Result<bool> {
        let sub = match host {
            GraphFile::Uniform(g) => GraphFile::Uniform(g.induced_relabeled(set)),
            GraphFile::Directed(d) => GraphFile::Directed(d.induced_relabeled(set)),
        };
        self.eval_on(&sub, budget)
    }

    /// Evaluates the predicate on a whole graph.
    pub fn eval_on(&self, graph: &GraphFile, budget: u64) -> Result<bool> {
        let verdict = match (self, graph) {
            (Predicate::Custom { test, .. }, g) => return test(g),
            (Predicate::HamiltonLConnected(link), GraphFile::Directed(d)) => is_hamilton_l_connected(d, link, budget)?,
            (Predicate::HamiltonLConnected(link), GraphFile::Uniform(g)) => {
                is_hamilton_l_connected(&uniform_as_digraph(g, link)?, link, budget)?
            }
            (Predicate::StronglyHamiltonConnected { ell }, GraphFile::Uniform(g)) => {
                is_strongly_hamilton_l_connected(g, *ell, budget)?
            }
            (Predicate::HasPerfectMatching, GraphFile::Uniform(g)) => Verdict::from_bool(count_perfect_matchings(g)? > 0),
            (Predicate::MinDegreeAtLeast { d, ratio }, GraphFile::Uniform(g)) => {
                if *d == 0 || *d >= g.k() {
                    return Err(Error::param(format!("min_degree needs 1 <= d < k = {}", g.k())));
                }
                if g.n() < g.k() {
                    return Ok(false);
                }
                let have = Rational::from_integer(g.degree_min(*d)? as i64);
                let full = binomial((g.n() - d) as u64, (g.k() - d) as u64).unwrap_or(u128::MAX);
                let full = i64::try_from(full).map_err(|_| Error::param("degree bound overflows"))?;
                Verdict::from_bool(have >= *ratio * Rational::from_integer(full))
            }
            (p, GraphFile::Directed(_)) => {
                return Err(Error::param(format!("predicate {} needs a uniform host", p.name())))
            }
        };
        match verdict {
            Verdict::Yes => Ok(true),
            Verdict::No => Ok(false),
            Verdict::Unknown => Err(Error::Budget(format!("predicate {} ran out of search budget", self.name()))),
        }
    }
}

/// `C→(G) ∪ C→(∂_ℓ G)`, the digraph a uniform host stands for under `link`.
pub fn uniform_as_digraph(g: &Hypergraph, link: &Link) -> Result<Digraph> {
    if link.k() != g.k() {
        return Err(Error::param(format!("link is {}-uniform but the host is {}-uniform", link.k(), g.k())));
    }
    let ell = link.ell();
    let d = g.orient_all();
    if ell == 0 || ell == g.k() {
        Ok(d)
    } else if ell < g.k() {
        d.union(&g.l_shadow(ell)?.orient_all())
    } else {
        Err(Error::param("uniform hosts support links with ℓ <= k"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PropertyMode {
    Exhaustive { budget: u128 },
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledProperty {
    pub samples: usize,
    pub hits: usize,
    /// Estimated fraction of `s`-sets that are edges.
    pub density: f64,
    pub generator: String,
}

/// `PG(G, P, s)`: the `s`-graph of sets `S` with `G[S]` satisfying `P`.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyGraph {
    pub predicate: String,
    pub n: usize,
    pub s: usize,
    pub mode: PropertyMode,
    #[serde(skip)]
    pub edges: Option<Hypergraph>,
    pub edge_count: Option<usize>,
    pub sampled: Option<SampledProperty>,
}

pub fn property_graph(
    host: &GraphFile,
    predicate: &Predicate,
    s: usize,
    mode: PropertyMode,
    search_budget: u64,
) -> Result<PropertyGraph> {
    let n = host.n();
    if s > n {
        return Err(Error::param(format!("s = {s} exceeds n = {n}")));
    }
    if s < 2 {
        return Err(Error::param("property graphs need s >= 2"));
    }
    match mode {
        PropertyMode::Exhaustive { budget } => {
            let total = binomial(n as u64, s as u64).unwrap_or(u128::MAX);
            if total > budget {
                return Err(Error::Budget(format!("{total} {s}-sets exceed the budget {budget}")));
            }
            let mut edges = Vec::new();
            for set in (1..=n).combinations(s) {
                if predicate.eval(host, &set, search_budget)? {
                    edges.push(set);
                }
            }
            let p = Hypergraph::new(n, s, edges)?;
            Ok(PropertyGraph {
                predicate: predicate.name(),
                n,
                s,
                mode,
                edge_count: Some(p.edge_count()),
                edges: Some(p),
                sampled: None,
            })
        }
        PropertyMode::Sampled { samples, seed } => {
            let mut stream = SeededStream::new(seed, 0);
            let mut hits = 0;
            for _ in 0..samples {
                let mut set: Vec<usize> = sample(&mut stream, n, s).iter().map(|i| i + 1).collect();
                set.sort_unstable();
                if predicate.eval(host, &set, search_budget)? {
                    hits += 1;
                }
            }
            Ok(PropertyGraph {
                predicate: predicate.name(),
                n,
                s,
                mode,
                edges: None,
                edge_count: None,
                sampled: Some(SampledProperty {
                    samples,
                    hits,
                    density: if samples == 0 { 0.0 } else { hits as f64 / samples as f64 },
                    generator: GENERATOR.to_string(),
                }),
            })
        }
    }
}

/// `δ_q(P)` and `δ_q(P) / binom(n - q, s - q)` for an exhaustive property
/// graph.
pub fn property_graph_min_degree(p: &PropertyGraph, q: usize) -> Result<(usize, Rational)> {
    if q == 0 || q >= p.s {
        return Err(Error::param(format!("q must satisfy 1 <= q < s = {}, got {q}", p.s)));
    }
    let edges = p
        .edges
        .as_ref()
        .ok_or_else(|| Error::Precondition("minimum degree needs an exhaustive property graph".into()))?;
    let delta = edges.degree_min(q)?;
    let full = binomial((p.n - q) as u64, (p.s - q) as u64).unwrap_or(u128::MAX);
    Ok((delta, rational::ratio_u128(delta as u128, full)))
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledDegree {
    /// For each sampled `q`-set, the fraction of sampled supersets in `P`.
    pub per_set: Vec<(Vec<usize>, f64)>,
    pub min_fraction: f64,
    pub generator: String,
}

/// Estimates the lower tail of `δ_q(P) / binom(n-q, s-q)` by sampling
/// `q_sets` random `q`-sets and `supersets` random `s`-supersets of each.
#[allow(clippy::too_many_arguments)]
pub fn estimate_min_degree_sampled(
    host: &GraphFile,
    predicate: &Predicate,
    s: usize,
    q: usize,
    q_sets: usize,
    supersets: usize,
    stream: &mut SeededStream,
    search_budget: u64,
) -> Result<SampledDegree> {
    let n = host.n();
    if q >= s || s > n {
        return Err(Error::param(format!("need q < s <= n, got q={q}, s={s}, n={n}")));
    }
    let mut per_set = Vec::with_capacity(q_sets);
    for _ in 0..q_sets {
        let mut base: Vec<usize> = sample(&mut *stream, n, q).iter().map(|i| i + 1).collect();
        base.sort_unstable();
        let rest: Vec<usize> = (1..=n).filter(|v| !base.contains(v)).collect();
        let mut hits = 0;
        for _ in 0..supersets {
            let mut set = base.clone();
            set.extend(sample(&mut *stream, rest.len(), s - q).iter().map(|i| rest[i]));
            set.sort_unstable();
            if predicate.eval(host, &set, search_budget)? {
                hits += 1;
            }
        }
        per_set.push((base, if supersets == 0 { 0.0 } else { hits as f64 / supersets as f64 }));
    }
    let min_fraction = per_set.iter().map(|(_, f)| *f).fold(f64::INFINITY, f64::min);
    Ok(SampledDegree {
        per_set,
        min_fraction: if min_fraction.is_finite() { min_fraction } else { 0.0 },
        generator: GENERATOR.to_string(),
    })
}
