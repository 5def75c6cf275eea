use rand::seq::SliceRandom;

use super::oracle::PropertyOracle;
use super::partition::{rest_with_parts, transversals, union_sorted, ConstructOptions, PartitionWitness, Rest};
use super::plan::ConstructionPlan;
use crate::error::{Error, Result};
use crate::hamilton::{ChainSearcher, SearchOptions, SearchOutcome, ValueOrder};
use crate::hypercore::{Digraph, Hypergraph};
use crate::linkchain::{build_closed_chain, build_open_chain, validate_closed_chain, ClosedChain, Link, OpenChain};
use crate::randomness::{PerfectMatchingTable, SeededStream};

/// The deterministic open chain spanning `set`: for free ends, the
/// lexicographically least ordered pair of disjoint `ℓ`-tuples of
/// `D^(ℓ)[set]` as ends, then the lexicographically least ordering.
pub(crate) fn realize_chain(
    oracle: &PropertyOracle,
    set: &[usize],
    ends: Option<(&[usize], &[usize])>,
    search_budget: u64,
) -> Result<OpenChain> {
    let link = oracle.link();
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let local = |v: &usize| -> Result<usize> {
        sorted
            .binary_search(v)
            .map(|i| i + 1)
            .map_err(|_| Error::Internal(format!("end vertex {v} lies outside {sorted:?}")))
    };
    let sub = oracle.sub(&sorted);
    let searcher = ChainSearcher::new(&sub, link, false)?;
    let opts = SearchOptions {
        budget: search_budget,
        order: ValueOrder::Lexicographic,
        break_symmetry: false,
        forward_check: true,
    };
    let ell = link.ell();
    let (start, end): (Option<Vec<usize>>, Option<Vec<usize>>) = match ends {
        Some((a, b)) => (
            Some(a.iter().map(local).collect::<Result<_>>()?),
            Some(b.iter().map(local).collect::<Result<_>>()?),
        ),
        None if ell == 0 => (None, None),
        None => {
            let tuples: Vec<&Vec<usize>> = sub.tuples_of_len(ell).collect();
            let pair = tuples
                .iter()
                .flat_map(|a| tuples.iter().map(move |b| (*a, *b)))
                .find(|(a, b)| a.iter().all(|v| !b.contains(v)))
                .ok_or_else(|| Error::Internal(format!("no two disjoint ℓ-tuples inside {sorted:?}")))?;
            (Some(pair.0.clone()), Some(pair.1.clone()))
        }
    };
    match searcher.find(start.as_deref(), end.as_deref(), &opts)? {
        SearchOutcome::Found(o) => {
            let ordering: Vec<usize> = o.iter().map(|&i| sorted[i - 1]).collect();
            build_open_chain(link, oracle.host().n(), &ordering)
        }
        SearchOutcome::NotFound => Err(Error::Internal(format!(
            "property-graph edge {sorted:?} holds no open chain with the chosen ends"
        ))),
        SearchOutcome::Unknown => Err(Error::Budget(format!("chain search inside {sorted:?} ran out of budget"))),
    }
}

/// Samples a uniform perfect matching of `P1^1` from the table of `rest`.
pub(crate) fn sample_cover_matching(rest: &Rest, stream: &mut SeededStream) -> Result<Vec<Vec<usize>>> {
    let Some(table) = &rest.table else {
        return Ok(Vec::new());
    };
    let m = table
        .sample(stream)
        .ok_or_else(|| Error::Infeasible("P1^1 has no perfect matching".into()))?;
    let mut out: Vec<Vec<usize>> =
        m.into_iter().map(|e| e.into_iter().map(|i| rest.remaining[i - 1]).collect()).collect();
    out.sort();
    Ok(out)
}

/// One chain per matching edge, in matching order, then the chain on `V0`.
pub(crate) fn cover_chains(
    oracle: &PropertyOracle,
    witness: &PartitionWitness,
    matching: &[Vec<usize>],
    search_budget: u64,
) -> Result<Vec<OpenChain>> {
    let mut chains = Vec::with_capacity(matching.len() + 1);
    for edge in matching {
        chains.push(realize_chain(oracle, edge, None, search_budget)?);
    }
    chains.push(realize_chain(oracle, &witness.v0, None, search_budget)?);
    Ok(chains)
}

/// `T_i = R_i^+ ∪ R_{i+1}^-` for chains already in their random order.
fn t_sets(chains: &[OpenChain]) -> Vec<Vec<usize>> {
    let m = chains.len();
    (0..m)
        .map(|i| union_sorted(chains[i].end(), chains[(i + 1) % m].start()))
        .collect()
}

/// Samples the connecting matching of `P1''`: returns, for each `i`, the
/// transversal of the `V2` parts joined to `T_i`.
pub(crate) fn sample_connectors(
    oracle: &mut PropertyOracle,
    witness: &PartitionWitness,
    ordered: &[OpenChain],
    opts: &ConstructOptions,
    stream: &mut SeededStream,
) -> Result<Vec<Vec<usize>>> {
    let m = ordered.len();
    let flat: Vec<usize> = witness.parts2.iter().flatten().copied().collect();
    let v2n = flat.len();
    let local = |v: &usize| flat.iter().position(|u| u == v).expect("vertex of V2") + 1;
    let ts = t_sets(ordered);
    let arity = witness.parts2.len() + 1;
    let mut edges = Vec::new();
    for t in transversals(&witness.parts2) {
        for (i, ti) in ts.iter().enumerate() {
            if oracle.holds(&union_sorted(&t, ti))? {
                let mut e: Vec<usize> = t.iter().map(local).collect();
                e.push(v2n + i + 1);
                edges.push(e);
            }
        }
    }
    let h = Hypergraph::new(v2n + m, arity, edges)?;
    let mut parts: Vec<Vec<usize>> = witness.parts2.iter().map(|p| p.iter().map(local).collect()).collect();
    parts.push((v2n + 1..=v2n + m).collect());
    let table = PerfectMatchingTable::new(&h, Some(&parts), opts.matching_budget)?;
    let matching = table
        .sample(stream)
        .ok_or_else(|| Error::Infeasible("P1'' has no perfect matching".into()))?;
    let mut out = vec![Vec::new(); m];
    for e in matching {
        let (t, rest): (Vec<usize>, Vec<usize>) = e.into_iter().partition(|&x| x > v2n);
        let mut set: Vec<usize> = rest.iter().map(|&x| flat[x - 1]).collect();
        set.sort_unstable();
        out[t[0] - v2n - 1] = set;
    }
    Ok(out)
}

/// Realizes connector `i` from `R_i^+` to `R_{i+1}^-` through
/// `connectors[i]` and concatenates everything into one ordering.
pub(crate) fn assemble(
    oracle: &PropertyOracle,
    ordered: &[OpenChain],
    connectors: &[Vec<usize>],
    search_budget: u64,
) -> Result<Vec<usize>> {
    let m = ordered.len();
    let ell = oracle.link().ell();
    let mut ordering = Vec::with_capacity(oracle.host().n());
    for i in 0..m {
        let (from, to) = (ordered[i].end(), ordered[(i + 1) % m].start());
        let set = union_sorted(&union_sorted(from, to), &connectors[i]);
        let c = realize_chain(oracle, &set, Some((from, to)), search_budget)?;
        ordering.extend_from_slice(&ordered[i].ordering);
        ordering.extend_from_slice(&c.ordering[ell..c.n() - ell]);
    }
    Ok(ordering)
}

pub(crate) fn finish(link: &Link, d: &Digraph, ordering: &[usize]) -> Result<ClosedChain> {
    let n = d.n();
    let mut seen = vec![false; n + 1];
    for &v in ordering {
        if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::Internal(format!("vertex {v} is covered twice or lies outside 1..={n}")));
        }
    }
    if ordering.len() != n {
        return Err(Error::Internal(format!("the chains cover {} of {n} vertices", ordering.len())));
    }
    let chain = build_closed_chain(link, ordering)?;
    if !validate_closed_chain(link, d, ordering) {
        return Err(Error::Internal("assembled chain uses a tuple missing from the host".into()));
    }
    Ok(chain)
}

/// Step 2: a uniform perfect matching of `P1^1`, one fixed open chain per
/// matching edge and one on `V0`. The chain on `V0` comes last.
pub fn cover_phase(
    d: &Digraph,
    plan: &ConstructionPlan,
    witness: &PartitionWitness,
    link: &Link,
    stream: &mut SeededStream,
) -> Result<Vec<OpenChain>> {
    witness.check_shape(plan)?;
    let opts = ConstructOptions::default();
    let mut oracle = PropertyOracle::new(d, link, opts.search_budget)?;
    let rest = rest_with_parts(&mut oracle, plan, witness, &opts)?;
    let matching = sample_cover_matching(&rest, stream)?;
    cover_chains(&oracle, witness, &matching, opts.search_budget)
}

/// Step 3: orders the chains uniformly at random, samples the matching of
/// `P1''` and joins consecutive chains through `V2`.
pub fn connect_phase(
    d: &Digraph,
    plan: &ConstructionPlan,
    witness: &PartitionWitness,
    chains: Vec<OpenChain>,
    link: &Link,
    stream: &mut SeededStream,
) -> Result<ClosedChain> {
    witness.check_shape(plan)?;
    if chains.len() != plan.m {
        return Err(Error::param(format!("expected m = {} chains, got {}", plan.m, chains.len())));
    }
    let opts = ConstructOptions::default();
    let mut oracle = PropertyOracle::new(d, link, opts.search_budget)?;
    let mut ordered = chains;
    ordered.shuffle(stream);
    let connectors = sample_connectors(&mut oracle, witness, &ordered, &opts, stream)?;
    let ordering = assemble(&oracle, &ordered, &connectors, opts.search_budget)?;
    finish(link, d, &ordering)
}
