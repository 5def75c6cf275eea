//! Exact Hamilton chain search, Hamilton connectedness, property graphs and
//! Hamilton framework checks.

mod connect;
mod framework;
mod lp;
mod property;
mod search;

pub use connect::{is_hamilton_l_connected, is_strongly_hamilton_l_connected, strong_digraph, Verdict};
pub use framework::{
    check_consistency_pair, default_selector, framework_report, is_aperiodic, is_aperiodic_with,
    is_closed_tight_walk, weights_of, Aperiodicity, FrameworkReport, Selector, DEFAULT_WALK_BUDGET,
};
pub use lp::{
    has_perfect_fractional_matching, has_perfect_fractional_matching_with, verify_fractional_matching,
    verify_farkas, FractionalMatching, DEFAULT_LP_BUDGET,
};
pub use property::{
    estimate_min_degree_sampled, property_graph, property_graph_min_degree, CustomTest, Predicate,
    PropertyGraph, PropertyMode, SampledDegree, SampledProperty, uniform_as_digraph, DEFAULT_PROPERTY_BUDGET,
};
pub use search::{
    enumerate_hamilton_chains, find_hamilton_chain, ChainSearcher, EnumerationEnd, SearchOptions,
    SearchOutcome, ValueOrder, DEFAULT_SEARCH_BUDGET,
};
