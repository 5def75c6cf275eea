use itertools::Itertools;
use rand::Rng;

use super::config::HostSpec;
use crate::error::{Error, Result};
use crate::hypercore::{parse, GraphFile, Hypergraph};
use crate::randomness::SeededStream;

/// The parity construction: `k`-sets meeting `{1..⌊n/2⌋}` in an odd number
/// of vertices, plus every other `k`-set independently with probability
/// `mu`. With `mu = 0` every `(k-1)`-set has codegree close to `n/2`.
pub fn dirac_extremal(n: usize, k: usize, mu: f64, stream: &mut SeededStream) -> Result<Hypergraph> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::param(format!("mu = {mu} lies outside [0, 1]")));
    }
    let half = n / 2;
    let mut edges = Vec::new();
    for e in (1..=n).combinations(k) {
        let odd = e.iter().filter(|&&v| v <= half).count() % 2 == 1;
        if odd || stream.gen_bool(mu) {
            edges.push(e);
        }
    }
    Hypergraph::new(n, k, edges)
}

/// `G^(k)(n, density)`: each `k`-set independently with probability
/// `density`.
pub fn random_uniform(n: usize, k: usize, density: f64, stream: &mut SeededStream) -> Result<Hypergraph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::param(format!("density {density} lies outside [0, 1]")));
    }
    let edges: Vec<Vec<usize>> = (1..=n).combinations(k).filter(|_| stream.gen_bool(density)).collect();
    Hypergraph::new(n, k, edges)
}

/// Builds the host of a sweep at `n` (ignored for file hosts).
pub fn build_host(spec: &HostSpec, n: usize, stream: &mut SeededStream) -> Result<GraphFile> {
    Ok(match spec {
        HostSpec::Complete { k } => GraphFile::Uniform(Hypergraph::complete(n, *k)?),
        HostSpec::DiracExtremal { k, mu } => GraphFile::Uniform(dirac_extremal(n, *k, *mu, stream)?),
        HostSpec::UniformlyDenseRandom { k, density } => GraphFile::Uniform(random_uniform(n, *k, *density, stream)?),
        HostSpec::FromFile { path } => parse(&std::fs::read_to_string(path)?)?,
    })
}
