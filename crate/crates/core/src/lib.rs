//! Combinatorial objects and randomized constructions for experimenting with
//! robust Hamiltonicity of hypergraphs at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! - [`hypercore`]: uniform hypergraphs, directed hypergraphs, degrees,
//!   shadows, components, density predicates and the text file format.
//! - [`linkchain`]: links, open and closed chains, balancedness, 1-density
//!   and the tile-to-matching reduction.
//! - [`hamilton`]: exact chain search, Hamilton connectedness, property
//!   graphs and Hamilton framework checks (with an exact rational simplex).
//! - [`randomness`]: seeded streams, sparsification, exact-uniform samplers
//!   and empirical spread / correctness estimators.
//! - [`constructor`]: the three-phase randomized construction of a closed
//!   Hamilton chain from property-graph matchings.
//! - [`experiments`]: threshold sweeps, inheritance experiments, constructor
//!   stress runs and CSV persistence.

pub mod constructor;
pub mod error;
pub mod experiments;
pub mod hamilton;
pub mod hypercore;
pub mod linkchain;
pub mod randomness;
pub mod rational;
pub mod util;

pub use error::{Error, Result};
pub use rational::Rational;
