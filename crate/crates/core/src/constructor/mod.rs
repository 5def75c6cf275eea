//! The three-phase randomized construction of a closed Hamilton `L`-chain:
//! partition the vertices, cover `V1` with short chains through a uniform
//! matching of a property graph, then join them through `V2`.
//!
//! Uniform perfect matchings stand in for spread ones, and the degree
//! conditions are checked against the `1 - 1/(3s)` thresholds at whatever
//! `s1` the caller picks. Outputs made with `s1 < 5(r+ℓ)` or with sampled
//! degree estimates carry the `desk_scale` flag.

mod oracle;
mod partition;
mod phases;
mod plan;
mod record;

use std::collections::HashMap;
use std::rc::Rc;

use rand::seq::SliceRandom;

pub use oracle::PropertyOracle;
pub use partition::{partition_vertices, ConstructOptions, DegreeMargin, PartitionWitness};
pub use phases::{connect_phase, cover_phase};
pub use plan::{plan_parameters, ConstructionPlan};
pub use record::{replay_construction, ConstructionRecord};

use crate::error::Result;
use crate::hypercore::Digraph;
use crate::linkchain::{serialize_link, ClosedChain, Link};
use crate::randomness::{Sampler, SeededStream};
use partition::{check_compatible, choose_v0, find_split, split_rest, witness_of, Rest, Split};

/// Stream word for the deterministic `V1`/`V2` split search.
const SPLIT_STREAM: u64 = 0x5EED_0000;

#[derive(Clone, Debug)]
pub struct Construction {
    pub chain: ClosedChain,
    pub record: ConstructionRecord,
}

/// A construction set up once for a host, link and `s1`; repeated calls to
/// [`Constructor::construct`] draw independent chains.
///
/// The `V1`/`V2` split is found once, from a fixed stream, so it depends
/// only on the host. The parts of `V1 \ V0` depend only on `V0` and are
/// cached per `V0`.
pub struct Constructor {
    oracle: PropertyOracle,
    plan: ConstructionPlan,
    opts: ConstructOptions,
    split: Split,
    rests: HashMap<Vec<usize>, Rc<Rest>>,
    desk_scale: bool,
}

impl Constructor {
    pub fn new(d: &Digraph, link: &Link, s1: usize, opts: ConstructOptions) -> Result<Self> {
        let plan = plan_parameters(d.n(), s1, link.ell(), link.r())?;
        check_compatible(d, &plan, link)?;
        crate::linkchain::closed_shape_ok(link, d.n())?;
        let mut oracle = PropertyOracle::new(d, link, opts.search_budget)?;
        let split = find_split(&mut oracle, &plan, &opts, &mut SeededStream::new(0, SPLIT_STREAM))?;
        let desk_scale = s1 < 5 * link.order() || !split.d1.exhaustive || !split.d3.exhaustive;
        Ok(Constructor { oracle, plan, opts, split, rests: HashMap::new(), desk_scale })
    }

    pub fn plan(&self) -> &ConstructionPlan {
        &self.plan
    }

    pub fn host(&self) -> &Digraph {
        self.oracle.host()
    }

    pub fn link(&self) -> &Link {
        self.oracle.link()
    }

    pub fn desk_scale(&self) -> bool {
        self.desk_scale
    }

    pub fn construct(&mut self, stream: &mut SeededStream) -> Result<Construction> {
        let (seed, stream_id) = (stream.seed(), stream.stream_id());
        let v0 = choose_v0(&mut self.oracle, &self.split, self.plan.s2, &self.opts, stream)?;
        let rest = match self.rests.get(&v0) {
            Some(r) => Rc::clone(r),
            None => {
                let r = Rc::new(split_rest(&mut self.oracle, &self.plan, &self.split.v1, &v0, &self.opts)?);
                self.rests.insert(v0.clone(), Rc::clone(&r));
                r
            }
        };
        let witness = witness_of(&self.split, v0, &rest);
        let cover_matching = phases::sample_cover_matching(&rest, stream)?;
        let chains = phases::cover_chains(&self.oracle, &witness, &cover_matching, self.opts.search_budget)?;
        let mut chain_order: Vec<usize> = (0..chains.len()).collect();
        chain_order.shuffle(stream);
        let ordered: Vec<_> = chain_order.iter().map(|&i| chains[i].clone()).collect();
        let connectors = phases::sample_connectors(&mut self.oracle, &witness, &ordered, &self.opts, stream)?;
        let ordering = phases::assemble(&self.oracle, &ordered, &connectors, self.opts.search_budget)?;
        let chain = phases::finish(self.oracle.link(), self.oracle.host(), &ordering)?;
        let record = ConstructionRecord {
            link: serialize_link(self.oracle.link()),
            plan: self.plan,
            witness,
            cover_matching,
            chain_order,
            connectors,
            ordering,
            desk_scale: self.desk_scale,
            seed,
            stream_id,
        };
        Ok(Construction { chain, record })
    }
}

/// Runs the three phases once. `retries` bounds each partition step.
pub fn construct_chain(
    d: &Digraph,
    link: &Link,
    s1: usize,
    stream: &mut SeededStream,
    retries: usize,
) -> Result<ClosedChain> {
    let opts = ConstructOptions { retries, ..ConstructOptions::default() };
    Ok(Constructor::new(d, link, s1, opts)?.construct(stream)?.chain)
}

/// The distribution of constructed chains as a [`Sampler`] over the
/// `k`-tuples of the host.
pub struct ConstructionSampler {
    constructor: Constructor,
}

impl ConstructionSampler {
    pub fn new(constructor: Constructor) -> Self {
        ConstructionSampler { constructor }
    }

    pub fn constructor(&self) -> &Constructor {
        &self.constructor
    }
}

impl Sampler for ConstructionSampler {
    fn vertex_count(&self) -> usize {
        self.constructor.plan.n
    }

    fn in_ground(&self, element: &[usize]) -> bool {
        element.len() == self.constructor.link().k() && self.constructor.host().contains(element)
    }

    fn sample(&mut self, stream: &mut SeededStream) -> Result<Vec<Vec<usize>>> {
        let c = self.constructor.construct(stream)?;
        let k = self.constructor.link().k();
        Ok(c.chain.edges.tuples_of_len(k).cloned().collect())
    }
}
