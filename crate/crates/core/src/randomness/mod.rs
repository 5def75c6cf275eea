//! Seeded randomness, sparsification, exact-uniform samplers and empirical
//! spread / correctness estimators.

mod cycles;
mod matching;
mod sparsify;
mod spread;
mod stream;

pub use cycles::{sample_hamilton_cycle_uniform, HamiltonCycleSampler};
pub use matching::{
    count_perfect_matchings, sample_perfect_matching_uniform, MatchingSampler, PerfectMatchingTable,
    DEFAULT_MATCHING_BUDGET,
};
pub use sparsify::{binomial_tuple_set, Sparsify};
pub use spread::{
    correctness_from_hits, estimate_correctness, estimate_spread, verify_spread_matching_bound, CorrectnessReport,
    CorrectnessRow, MatchingBoundReport, Sampler, SizeStats, SpreadReport, StrongRow, StrongSpec,
    TestSets,
};
pub use stream::{SeededStream, GENERATOR};
