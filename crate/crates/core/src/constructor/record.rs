use serde::{Deserialize, Serialize};

use super::oracle::PropertyOracle;
use super::partition::{rest_with_parts, ConstructOptions, PartitionWitness};
use super::phases::{assemble, cover_chains, finish};
use super::plan::{plan_parameters, ConstructionPlan};
use crate::error::{Error, Result};
use crate::hypercore::Digraph;
use crate::linkchain::{parse_link, ClosedChain};

/// Everything needed to rebuild a construction without randomness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionRecord {
    /// The link in its text format.
    pub link: String,
    pub plan: ConstructionPlan,
    pub witness: PartitionWitness,
    /// The perfect matching of `P1^1`, edges sorted.
    pub cover_matching: Vec<Vec<usize>>,
    /// Chain `i` of the cycle is cover chain `chain_order[i]`; index
    /// `m - 1` is the chain on `V0`.
    pub chain_order: Vec<usize>,
    /// `connectors[i]`: the `V2` vertices joining chain `i` to chain `i+1`.
    pub connectors: Vec<Vec<usize>>,
    pub ordering: Vec<usize>,
    pub desk_scale: bool,
    pub seed: u64,
    pub stream_id: u64,
}

impl ConstructionRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn is_transversal(set: &[usize], parts: &[Vec<usize>]) -> bool {
    set.len() == parts.len() && parts.iter().all(|p| set.iter().filter(|v| p.contains(v)).count() == 1)
}

fn covers_exactly(sets: &[Vec<usize>], target: &[usize]) -> bool {
    let mut all: Vec<usize> = sets.iter().flatten().copied().collect();
    all.sort_unstable();
    let mut t = target.to_vec();
    t.sort_unstable();
    all == t
}

/// Rebuilds the chain from a record: re-derives every fixed chain from the
/// recorded matchings, checks that the result equals the stored ordering
/// and validates it against `d`.
pub fn replay_construction(d: &Digraph, record: &ConstructionRecord) -> Result<ClosedChain> {
    let link = parse_link(&record.link)?;
    let plan = plan_parameters(d.n(), record.plan.s1, link.ell(), link.r())?;
    if plan != record.plan {
        return Err(Error::Precondition("recorded plan does not match the host and link".into()));
    }
    let w = &record.witness;
    w.check_shape(&plan)?;
    if record.cover_matching.len() != plan.m - 1
        || !record.cover_matching.iter().all(|e| is_transversal(e, &w.parts1))
        || !covers_exactly(&record.cover_matching, &w.parts1.concat())
    {
        return Err(Error::Precondition("recorded cover matching is not a perfect matching of P1^1".into()));
    }
    let mut order = record.chain_order.clone();
    order.sort_unstable();
    if order != (0..plan.m).collect::<Vec<_>>() {
        return Err(Error::Precondition("recorded chain order is not a permutation".into()));
    }
    if record.connectors.len() != plan.m
        || !record.connectors.iter().all(|c| is_transversal(c, &w.parts2))
        || !covers_exactly(&record.connectors, &w.v2)
    {
        return Err(Error::Precondition("recorded connectors do not match the V2 parts".into()));
    }
    let opts = ConstructOptions::default();
    let mut oracle = PropertyOracle::new(d, &link, opts.search_budget)?;
    if !oracle.holds(&w.v0)? || !record.cover_matching.iter().try_fold(true, |ok, e| Ok::<_, Error>(ok && oracle.holds(e)?))? {
        return Err(Error::Precondition("a recorded chain set is not Hamilton connected in the host".into()));
    }
    rest_with_parts(&mut oracle, &plan, w, &opts)?;
    let chains = cover_chains(&oracle, w, &record.cover_matching, opts.search_budget)?;
    let ordered: Vec<_> = record.chain_order.iter().map(|&i| chains[i].clone()).collect();
    let ordering = assemble(&oracle, &ordered, &record.connectors, opts.search_budget)?;
    if ordering != record.ordering {
        return Err(Error::Precondition("replayed ordering differs from the recorded one".into()));
    }
    finish(&link, d, &ordering)
}
