//! Uniform hypergraphs, directed hypergraphs and the structural quantities
//! computed on them: minimum degrees, shadows, line graphs, components,
//! clique graphs, density and degree-sequence predicates, and the
//! line-oriented text format.

mod components;
mod density;
mod digraph;
mod hypergraph;
mod io;

pub use components::{components2, shadow2, Block, EdgePartition, EdgeSource};
pub use density::{
    check_degree_sequence, is_uniformly_dense, DensityMode, UniformDensityReport,
    DEFAULT_DENSITY_BUDGET,
};
pub use digraph::Digraph;
pub use hypergraph::Hypergraph;
pub use io::{parse, parse_digraph, parse_hypergraph, serialize, GraphFile};
pub(crate) use io::join as io_join;
