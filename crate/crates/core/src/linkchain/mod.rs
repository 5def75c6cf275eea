//! Links, open and closed chains, balancedness, 1-density and the
//! F-copy hypergraph used to turn tilings into matchings.

mod balance;
mod chain;
mod density;
mod link;

pub use balance::{check_balanced, check_balanced_with, BalanceMethod, BalanceReport, BalanceWitness, Violation, DEFAULT_MAX_EDGES};
pub use chain::{
    build_closed_chain, build_open_chain, validate_closed_chain, validate_open_chain, ClosedChain, OpenChain,
};
pub(crate) use chain::{closed_shape_ok, open_shape_ok};
pub use density::{f_copy_hypergraph, is_strictly_one_balanced, one_density, DEFAULT_COPY_BUDGET};
pub use link::{builtin_link, parse_link, serialize_link, BuiltinLink, Link};
