use rand::seq::SliceRandom;

use super::spread::Sampler;
use super::SeededStream;
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;

/// A uniformly random Hamilton cycle of `K_n`: a uniform permutation read
/// cyclically. Each cycle arises from exactly `2n` permutations.
pub fn sample_hamilton_cycle_uniform(n: usize, stream: &mut SeededStream) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::param(format!("Hamilton cycles need n >= 3, got {n}")));
    }
    Hypergraph::new(n, 2, cycle_edges(n, stream))
}

fn cycle_edges(n: usize, stream: &mut SeededStream) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(stream);
    let mut edges: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let (a, b) = (order[i], order[(i + 1) % n]);
            vec![a.min(b), a.max(b)]
        })
        .collect();
    edges.sort();
    edges
}

/// Sampler wrapper for spread estimation; the ground set is `E(K_n)` with
/// edges written as sorted pairs.
pub struct HamiltonCycleSampler {
    n: usize,
}

impl HamiltonCycleSampler {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::param(format!("Hamilton cycles need n >= 3, got {n}")));
        }
        Ok(HamiltonCycleSampler { n })
    }
}

impl Sampler for HamiltonCycleSampler {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn in_ground(&self, e: &[usize]) -> bool {
        e.len() == 2 && e[0] >= 1 && e[0] < e[1] && e[1] <= self.n
    }

    fn sample(&mut self, stream: &mut SeededStream) -> Result<Vec<Vec<usize>>> {
        Ok(cycle_edges(self.n, stream))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn triangle_is_forced() {
        let mut s = SeededStream::new(1, 1);
        let c = sample_hamilton_cycle_uniform(3, &mut s).unwrap();
        assert_eq!(c, Hypergraph::complete(3, 2).unwrap());
        assert!(sample_hamilton_cycle_uniform(2, &mut s).is_err());
    }

    #[test]
    fn every_vertex_has_degree_two() {
        let mut s = SeededStream::new(4, 0);
        for _ in 0..50 {
            let c = sample_hamilton_cycle_uniform(9, &mut s).unwrap();
            assert_eq!(c.edge_count(), 9);
            assert!(c.degrees()[1..].iter().all(|&d| d == 2));
            assert_eq!(crate::hypercore::components2(&c).len(), 1);
        }
    }

    #[test]
    fn five_cycles_are_uniform() {
        let mut s = SeededStream::new(8, 2);
        let trials = 60_000;
        let mut counts: BTreeMap<Vec<Vec<usize>>, usize> = BTreeMap::new();
        for _ in 0..trials {
            let c = sample_hamilton_cycle_uniform(5, &mut s).unwrap();
            *counts.entry(c.edges().cloned().collect()).or_default() += 1;
        }
        assert_eq!(counts.len(), 12);
        let expected = trials as f64 / 12.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 1% critical value of chi-square with 11 degrees of freedom.
        assert!(chi2 < 24.725, "chi2 {chi2}");
    }
}
