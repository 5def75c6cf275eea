use std::collections::HashMap;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::oracle::PropertyOracle;
use super::plan::ConstructionPlan;
use crate::error::{Error, Result};
use crate::hamilton::DEFAULT_SEARCH_BUDGET;
use crate::hypercore::{Digraph, Hypergraph};
use crate::linkchain::Link;
use crate::randomness::{PerfectMatchingTable, SeededStream, DEFAULT_MATCHING_BUDGET};
use crate::util::{binomial, mask_of};

/// Stream word for the retries that split `V1 \ V0` into parts. The seed
/// is derived from `V0`, so the split is a function of `V0` alone.
const REST_STREAM: u64 = 0x5EED_0001;

/// How a degree condition `δ >= (1 - 1/(3s)) · full` came out.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeMargin {
    /// Smallest observed degree over the largest possible degree.
    pub ratio: f64,
    /// `1 - 1/(3s)`.
    pub threshold: f64,
    /// False when the ratio is a sampled estimate.
    pub exhaustive: bool,
    pub holds: bool,
}

impl DegreeMargin {
    fn exact(min: u128, full: u128, s: usize) -> Self {
        let threshold = 1.0 - 1.0 / (3.0 * s as f64);
        if full == 0 {
            return DegreeMargin { ratio: 1.0, threshold, exhaustive: true, holds: true };
        }
        let s3 = 3 * s as u128;
        let holds = match (min.checked_mul(s3), full.checked_mul(s3 - 1)) {
            (Some(a), Some(b)) => a >= b,
            _ => min as f64 / full as f64 >= threshold,
        };
        DegreeMargin { ratio: min as f64 / full as f64, threshold, exhaustive: true, holds }
    }

    fn sampled(ratio: f64, s: usize) -> Self {
        let threshold = 1.0 - 1.0 / (3.0 * s as f64);
        DegreeMargin { ratio, threshold, exhaustive: false, holds: ratio >= threshold }
    }

    fn failed(s: usize) -> Self {
        DegreeMargin { ratio: 0.0, threshold: 1.0 - 1.0 / (3.0 * s as f64), exhaustive: true, holds: false }
    }

    pub fn slack(&self) -> f64 {
        self.ratio - self.threshold
    }
}

/// The vertex partition of one construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionWitness {
    /// The `s2`-set covered by the long chain.
    pub v0: Vec<usize>,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    /// `V1^1..V1^{s1}`, each of size `m - 1`, partitioning `V1 \ V0`.
    pub parts1: Vec<Vec<usize>>,
    /// `V2^1..V2^{s1-2ℓ}`, each of size `m`.
    pub parts2: Vec<Vec<usize>>,
    pub d1: DegreeMargin,
    pub d2: DegreeMargin,
    pub d3: DegreeMargin,
    /// Attempts used for the `V1`/`V2` split and for the parts of `V1 \ V0`.
    pub attempts: (usize, usize),
}

impl PartitionWitness {
    /// Checks sizes, disjointness and coverage against the plan.
    pub fn check_shape(&self, plan: &ConstructionPlan) -> Result<()> {
        let bad = |what: &str| Err(Error::Precondition(format!("partition witness: {what}")));
        if self.v1.len() != plan.v1_size() || self.v2.len() != plan.v2_size() {
            return bad("V1/V2 sizes do not match the plan");
        }
        if self.v0.len() != plan.s2 {
            return bad("V0 does not have s2 vertices");
        }
        if self.parts1.len() != plan.s1 || self.parts1.iter().any(|p| p.len() != plan.m - 1) {
            return bad("V1 parts have the wrong count or size");
        }
        if self.parts2.len() != plan.s1 - 2 * plan.ell || self.parts2.iter().any(|p| p.len() != plan.m) {
            return bad("V2 parts have the wrong count or size");
        }
        let mut seen = vec![0u8; plan.n + 1];
        for &v in self.v1.iter().chain(&self.v2) {
            if v == 0 || v > plan.n || seen[v] != 0 {
                return bad("V1 and V2 do not partition the vertex set");
            }
            seen[v] = 1;
        }
        for &v in self.v0.iter().chain(self.parts1.iter().flatten()) {
            if !self.v1.contains(&v) || seen[v] != 1 {
                return bad("V0 and the V1 parts do not partition V1");
            }
            seen[v] = 2;
        }
        for &v in self.parts2.iter().flatten() {
            if seen[v] != 1 || !self.v2.contains(&v) {
                return bad("the V2 parts do not partition V2");
            }
            seen[v] = 2;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConstructOptions {
    /// Random attempts for each partition step.
    pub retries: usize,
    pub search_budget: u64,
    /// Largest number of sets a degree condition may evaluate exhaustively;
    /// beyond it the condition is estimated from samples.
    pub exhaustive_budget: u128,
    /// Samples per vertex (or per `2ℓ`-set) in sampled degree estimates.
    pub degree_samples: usize,
    pub matching_budget: usize,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            retries: 20,
            search_budget: DEFAULT_SEARCH_BUDGET,
            exhaustive_budget: 20_000,
            degree_samples: 32,
            matching_budget: DEFAULT_MATCHING_BUDGET,
        }
    }
}

/// A `V1`/`V2` split satisfying (D1) and (D3).
#[derive(Clone, Debug)]
pub(crate) struct Split {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub parts2: Vec<Vec<usize>>,
    pub d1: DegreeMargin,
    pub d3: DegreeMargin,
    /// Edges of `P2[V1]`, when enumerated.
    pub p2_edges: Option<Vec<Vec<usize>>>,
    pub attempts: usize,
}

/// The parts of `V1 \ V0` and the matching table of `P1^1`.
#[derive(Clone, Debug)]
pub(crate) struct Rest {
    pub parts1: Vec<Vec<usize>>,
    pub d2: DegreeMargin,
    /// `V1 \ V0` sorted; local vertex `i + 1` is `remaining[i]`.
    pub remaining: Vec<usize>,
    pub table: Option<PerfectMatchingTable>,
    pub attempts: usize,
}

fn sorted_chunks(order: &[usize], size: usize, count: usize) -> Vec<Vec<usize>> {
    (0..count)
        .map(|i| {
            let mut c = order[i * size..(i + 1) * size].to_vec();
            c.sort_unstable();
            c
        })
        .collect()
}

/// Every set with one vertex from each part.
pub(crate) fn transversals(parts: &[Vec<usize>]) -> Vec<Vec<usize>> {
    if parts.is_empty() || parts.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    parts.iter().map(|p| p.iter().copied()).multi_cartesian_product().collect()
}

fn transversal_count(parts: &[Vec<usize>]) -> u128 {
    parts.iter().fold(1u128, |acc, p| acc.saturating_mul(p.len() as u128))
}

pub(crate) fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u
}

fn random_subset(pool: &[usize], size: usize, stream: &mut SeededStream) -> Vec<usize> {
    let mut set: Vec<usize> = sample(stream, pool.len(), size).iter().map(|i| pool[i]).collect();
    set.sort_unstable();
    set
}

/// (D1): `δ_1(P2[V1]) >= (1 - 1/(3 s2)) binom(|V1| - 1, s2 - 1)`.
fn check_d1(
    oracle: &mut PropertyOracle,
    v1: &[usize],
    s2: usize,
    opts: &ConstructOptions,
    stream: &mut SeededStream,
) -> Result<(DegreeMargin, Option<Vec<Vec<usize>>>)> {
    let total = binomial(v1.len() as u64, s2 as u64).unwrap_or(u128::MAX);
    if total <= opts.exhaustive_budget {
        let mut degree: HashMap<usize, u128> = v1.iter().map(|&v| (v, 0)).collect();
        let mut edges = Vec::new();
        for set in v1.iter().copied().combinations(s2) {
            if oracle.holds(&set)? {
                for v in &set {
                    *degree.get_mut(v).expect("set lies in V1") += 1;
                }
                edges.push(set);
            }
        }
        let min = degree.values().copied().min().unwrap_or(0);
        let full = binomial(v1.len() as u64 - 1, s2 as u64 - 1).unwrap_or(u128::MAX);
        return Ok((DegreeMargin::exact(min, full, s2), Some(edges)));
    }
    let samples = opts.degree_samples.max(1);
    let mut worst = 1.0f64;
    for &v in v1 {
        let others: Vec<usize> = v1.iter().copied().filter(|&u| u != v).collect();
        let mut hits = 0;
        for _ in 0..samples {
            let mut set = random_subset(&others, s2 - 1, stream);
            set.push(v);
            if oracle.holds(&set)? {
                hits += 1;
            }
        }
        worst = worst.min(hits as f64 / samples as f64);
    }
    Ok((DegreeMargin::sampled(worst, s2), None))
}

/// (D3): every `2ℓ`-set `J ⊆ V1` and `v ∈ V2` lie in at least
/// `(1 - 1/(3 s1)) m^(s1-2ℓ-1)` edges `J ∪ T` of `P1^2`, `T` a transversal
/// of the `V2` parts.
fn check_d3(
    oracle: &mut PropertyOracle,
    plan: &ConstructionPlan,
    v1: &[usize],
    parts2: &[Vec<usize>],
    opts: &ConstructOptions,
    stream: &mut SeededStream,
) -> Result<DegreeMargin> {
    let j = 2 * plan.ell;
    let per_j = transversal_count(parts2);
    if per_j > opts.exhaustive_budget {
        return Err(Error::Budget(format!("{per_j} transversals of the V2 parts exceed the exhaustive budget")));
    }
    let j_sets = binomial(v1.len() as u64, j as u64).unwrap_or(u128::MAX);
    let exhaustive = j_sets.saturating_mul(per_j) <= opts.exhaustive_budget;
    let js: Vec<Vec<usize>> = if exhaustive {
        v1.iter().copied().combinations(j).collect()
    } else {
        (0..opts.degree_samples.max(1)).map(|_| random_subset(v1, j, stream)).collect()
    };
    let ts = transversals(parts2);
    let mut min = u128::MAX;
    for jset in &js {
        let mut count: HashMap<usize, u128> = parts2.iter().flatten().map(|&v| (v, 0)).collect();
        for t in &ts {
            if oracle.holds(&union_sorted(jset, t))? {
                for v in t {
                    *count.get_mut(v).expect("transversal lies in V2") += 1;
                }
            }
        }
        min = min.min(count.values().copied().min().unwrap_or(0));
    }
    let full = (plan.m as u128).pow((plan.s1 - j - 1) as u32);
    let margin = DegreeMargin::exact(if js.is_empty() { 0 } else { min }, full, plan.s1);
    Ok(if exhaustive { margin } else { DegreeMargin { exhaustive: false, ..margin } })
}

fn infeasible(what: &str, attempts: usize, margins: &[(&str, DegreeMargin)]) -> Error {
    let detail = margins
        .iter()
        .map(|(name, m)| format!("{name} ratio {:.4} (needs {:.4})", m.ratio, m.threshold))
        .join(", ");
    Error::Infeasible(format!("{what} after {attempts} attempts; best margins: {detail}"))
}

/// Splits `V(D)` into `V1`, `V2` and the parts of `V2`. The first attempt
/// uses the identity order, later ones random orders from `stream`.
pub(crate) fn find_split(
    oracle: &mut PropertyOracle,
    plan: &ConstructionPlan,
    opts: &ConstructOptions,
    stream: &mut SeededStream,
) -> Result<Split> {
    let n = plan.n;
    let attempts = opts.retries.max(1);
    let mut best: Option<(DegreeMargin, DegreeMargin)> = None;
    for attempt in 0..attempts {
        let mut order: Vec<usize> = (1..=n).collect();
        if attempt > 0 {
            order.shuffle(stream);
        }
        let (a, b) = order.split_at(plan.v1_size());
        let mut v1 = a.to_vec();
        v1.sort_unstable();
        let parts2 = sorted_chunks(b, plan.m, plan.s1 - 2 * plan.ell);
        let mut v2 = b.to_vec();
        v2.sort_unstable();
        let d3 = check_d3(oracle, plan, &v1, &parts2, opts, stream)?;
        let (d1, p2_edges) = check_d1(oracle, &v1, plan.s2, opts, stream)?;
        if d1.holds && d3.holds {
            return Ok(Split { v1, v2, parts2, d1, d3, p2_edges, attempts: attempt + 1 });
        }
        let score = d1.slack().min(d3.slack());
        if best.map_or(true, |(x, y)| x.slack().min(y.slack()) < score) {
            best = Some((d1, d3));
        }
    }
    let (d1, d3) = best.expect("at least one attempt");
    Err(infeasible("no V1/V2 split satisfied (D1) and (D3)", attempts, &[("D1", d1), ("D2", DegreeMargin::failed(plan.s1)), ("D3", d3)]))
}

/// Draws `V0` uniformly from the edges of `P2[V1]`: from the enumerated
/// edge list, or by rejection from uniform `s2`-subsets of `V1`.
pub(crate) fn choose_v0(
    oracle: &mut PropertyOracle,
    split: &Split,
    s2: usize,
    opts: &ConstructOptions,
    stream: &mut SeededStream,
) -> Result<Vec<usize>> {
    if let Some(edges) = &split.p2_edges {
        if edges.is_empty() {
            return Err(Error::Infeasible("P2[V1] has no edges".into()));
        }
        return Ok(edges[stream.gen_range(0..edges.len())].clone());
    }
    let draws = (opts.degree_samples.max(1) * 1000).max(10_000);
    for _ in 0..draws {
        let set = random_subset(&split.v1, s2, stream);
        if oracle.holds(&set)? {
            return Ok(set);
        }
    }
    Err(Error::Infeasible(format!("no edge of P2[V1] found in {draws} uniform draws")))
}

/// Splits `V1 \ V0` into `s1` parts of size `m - 1` satisfying (D2) and
/// builds the matching table of `P1^1`. Deterministic given `V0`.
pub(crate) fn split_rest(
    oracle: &mut PropertyOracle,
    plan: &ConstructionPlan,
    v1: &[usize],
    v0: &[usize],
    opts: &ConstructOptions,
) -> Result<Rest> {
    let remaining: Vec<usize> = v1.iter().copied().filter(|v| !v0.contains(v)).collect();
    let size = plan.m - 1;
    let total = (size as u128).saturating_pow(plan.s1 as u32);
    if total > opts.exhaustive_budget {
        return Err(Error::Budget(format!("P1^1 has {total} candidate edges, over the exhaustive budget")));
    }
    let key = mask_of(v0);
    let mut stream = SeededStream::new(key as u64 ^ (key >> 64) as u64, REST_STREAM);
    let attempts = opts.retries.max(1);
    let mut best = DegreeMargin::failed(plan.s1);
    for attempt in 0..attempts {
        let mut order = remaining.clone();
        if attempt > 0 {
            order.shuffle(&mut stream);
        }
        let parts1 = sorted_chunks(&order, size, plan.s1);
        let (d2, table) = cover_table(oracle, plan, &remaining, &parts1, opts)?;
        if d2.holds {
            return Ok(Rest { parts1, d2, remaining, table, attempts: attempt + 1 });
        }
        if d2.slack() > best.slack() {
            best = d2;
        }
    }
    Err(infeasible("no split of V1 \\ V0 satisfied (D2)", attempts, &[("D2", best)]))
}

/// (D2) for fixed parts of `V1 \ V0`, plus the matching table of `P1^1`
/// when it holds.
fn cover_table(
    oracle: &mut PropertyOracle,
    plan: &ConstructionPlan,
    remaining: &[usize],
    parts1: &[Vec<usize>],
    opts: &ConstructOptions,
) -> Result<(DegreeMargin, Option<PerfectMatchingTable>)> {
    let size = plan.m - 1;
    let mut degree: HashMap<usize, u128> = remaining.iter().map(|&v| (v, 0)).collect();
    let mut edges = Vec::new();
    for mut t in transversals(parts1) {
        t.sort_unstable();
        if oracle.holds(&t)? {
            for v in &t {
                *degree.get_mut(v).expect("transversal lies in V1 \\ V0") += 1;
            }
            edges.push(t);
        }
    }
    let min = degree.values().copied().min().unwrap_or(0);
    let d2 = DegreeMargin::exact(min, (size as u128).pow(plan.s1 as u32 - 1), plan.s1);
    if !d2.holds || remaining.is_empty() {
        return Ok((d2, None));
    }
    let local = |v: &usize| remaining.binary_search(v).expect("vertex of V1 \\ V0") + 1;
    let h = Hypergraph::new(remaining.len(), plan.s1, edges.iter().map(|e| e.iter().map(local).collect::<Vec<_>>()))?;
    let parts: Vec<Vec<usize>> = parts1.iter().map(|p| p.iter().map(local).collect()).collect();
    Ok((d2, Some(PerfectMatchingTable::new(&h, Some(&parts), opts.matching_budget)?)))
}

/// The `P1^1` table for the parts recorded in a witness.
pub(crate) fn rest_with_parts(
    oracle: &mut PropertyOracle,
    plan: &ConstructionPlan,
    witness: &PartitionWitness,
    opts: &ConstructOptions,
) -> Result<Rest> {
    let mut remaining: Vec<usize> = witness.parts1.iter().flatten().copied().collect();
    remaining.sort_unstable();
    let (d2, table) = cover_table(oracle, plan, &remaining, &witness.parts1, opts)?;
    if !d2.holds {
        return Err(Error::Infeasible(format!("recorded V1 parts violate (D2): ratio {:.4}", d2.ratio)));
    }
    Ok(Rest { parts1: witness.parts1.clone(), d2, remaining, table, attempts: 1 })
}

pub(crate) fn check_compatible(d: &Digraph, plan: &ConstructionPlan, link: &Link) -> Result<()> {
    if plan.n != d.n() || plan.ell != link.ell() || plan.r != link.r() {
        return Err(Error::param(format!(
            "plan (n={}, ℓ={}, r={}) does not match host n={} and link (ℓ={}, r={})",
            plan.n,
            plan.ell,
            plan.r,
            d.n(),
            link.ell(),
            link.r()
        )));
    }
    Ok(())
}

pub(crate) fn witness_of(split: &Split, v0: Vec<usize>, rest: &Rest) -> PartitionWitness {
    PartitionWitness {
        v0,
        v1: split.v1.clone(),
        v2: split.v2.clone(),
        parts1: rest.parts1.clone(),
        parts2: split.parts2.clone(),
        d1: split.d1,
        d2: rest.d2,
        d3: split.d3,
        attempts: (split.attempts, rest.attempts),
    }
}

/// Finds a partition satisfying (D1)–(D3) and draws `V0` uniformly from
/// `P2[V1]`. Split retries and the choice of `V0` use `stream`.
pub fn partition_vertices(
    d: &Digraph,
    plan: &ConstructionPlan,
    link: &Link,
    stream: &mut SeededStream,
    retries: usize,
) -> Result<PartitionWitness> {
    check_compatible(d, plan, link)?;
    let opts = ConstructOptions { retries, ..ConstructOptions::default() };
    let mut oracle = PropertyOracle::new(d, link, opts.search_budget)?;
    let split = find_split(&mut oracle, plan, &opts, stream)?;
    let v0 = choose_v0(&mut oracle, &split, plan.s2, &opts, stream)?;
    let rest = split_rest(&mut oracle, plan, &split.v1, &v0, &opts)?;
    Ok(witness_of(&split, v0, &rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::plan_parameters;
    use crate::linkchain::BuiltinLink;

    fn setup(n: usize, s1: usize) -> (ConstructionPlan, Link) {
        let link = BuiltinLink::EllCycle { k: 2, ell: 1 }.link().unwrap();
        (plan_parameters(n, s1, 1, 1).unwrap(), link)
    }

    #[test]
    fn complete_host_succeeds_first_try() {
        let (plan, link) = setup(14, 4);
        let d = Digraph::complete(14, &[2, 1]);
        let w = partition_vertices(&d, &plan, &link, &mut SeededStream::new(1, 0), 5).unwrap();
        assert_eq!(w.attempts, (1, 1));
        w.check_shape(&plan).unwrap();
        for m in [w.d1, w.d2, w.d3] {
            assert_eq!(m.ratio, 1.0);
            assert!(m.holds && m.exhaustive);
        }
    }

    #[test]
    fn edgeless_host_fails_with_zero_margins() {
        let (plan, link) = setup(14, 4);
        let err = partition_vertices(&Digraph::empty(14), &plan, &link, &mut SeededStream::new(1, 0), 3).unwrap_err();
        let Error::Infeasible(msg) = err else { panic!("expected infeasible") };
        assert!(msg.contains("D1 ratio 0.0000") && msg.contains("D3 ratio 0.0000"), "{msg}");
    }

    #[test]
    fn missing_one_vertex_singleton_keeps_full_margins() {
        // Dropping the 1-tuple (w) leaves every s-set Hamilton connected: w
        // is never an end tuple, and every other pair of ends is joined
        // inside a complete 2-digraph. So every degree equals its maximum.
        let (plan, link) = setup(14, 4);
        let mut d = Digraph::complete(14, &[2, 1]);
        d.remove(&[5]);
        let mut oracle = PropertyOracle::new(&d, &link, 100_000).unwrap();
        let brute = (1..=14).combinations(4).all(|s| oracle.holds(&s).unwrap());
        assert!(brute);
        let w = partition_vertices(&d, &plan, &link, &mut SeededStream::new(2, 0), 5).unwrap();
        for m in [w.d1, w.d2, w.d3] {
            assert_eq!(m.ratio, 1.0);
        }
    }

    #[test]
    fn d3_counts_match_a_direct_count() {
        // Host: complete (2,1)-digraph without the 2-tuples between 1 and 14.
        let (plan, link) = setup(14, 4);
        let mut d = Digraph::complete(14, &[2, 1]);
        d.remove(&[1, 14]);
        d.remove(&[14, 1]);
        let mut oracle = PropertyOracle::new(&d, &link, 100_000).unwrap();
        let opts = ConstructOptions::default();
        let v1: Vec<usize> = (1..=plan.v1_size()).collect();
        let v2: Vec<usize> = (plan.v1_size() + 1..=14).collect();
        let parts2 = sorted_chunks(&v2, plan.m, 2);
        let d3 = check_d3(&mut oracle, &plan, &v1, &parts2, &opts, &mut SeededStream::new(0, 0)).unwrap();
        // Direct count of the worst (J, v) over the chosen split.
        let mut worst = u128::MAX;
        for j in v1.iter().copied().combinations(2) {
            for &v in &v2 {
                let part = parts2.iter().position(|p| p.contains(&v)).unwrap();
                let others: Vec<Vec<usize>> =
                    parts2.iter().enumerate().filter(|(i, _)| *i != part).map(|(_, p)| p.clone()).collect();
                let mut count = 0u128;
                for t in transversals(&others) {
                    let mut s: Vec<usize> = j.iter().chain(&t).copied().collect();
                    s.push(v);
                    s.sort_unstable();
                    let sub = d.induced_relabeled(&s);
                    if crate::hamilton::is_hamilton_l_connected(&sub, &link, 100_000).unwrap().is_yes() {
                        count += 1;
                    }
                }
                worst = worst.min(count);
            }
        }
        let full = (plan.m as f64).powi((plan.s1 - 3) as i32);
        assert_eq!(d3.ratio, worst as f64 / full);
        assert!(d3.exhaustive && !d3.holds);
    }
}
