use rand::seq::index::sample;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamilton::Predicate;
use crate::hypercore::GraphFile;
use crate::randomness::{SeededStream, GENERATOR};

#[derive(Clone, Debug, Serialize)]
pub struct InheritanceReport {
    pub predicate: String,
    pub n: usize,
    pub s: usize,
    pub q: usize,
    /// The fixed `q`-set every sampled `s`-set contains.
    pub q_set: Vec<usize>,
    pub trials: usize,
    pub hits: usize,
    pub fraction: f64,
    /// `1 - e^(-sqrt(s))`.
    pub bound_sqrt: f64,
    /// `1 - s^(-2)`.
    pub bound_square: f64,
    pub generator: String,
}

/// Fixes a uniformly random `q`-set `Q`, then draws `trials` uniform
/// `s`-sets `S ⊇ Q` and reports how often `G[S]` has the predicate.
pub fn run_inheritance_experiment(
    g: &GraphFile,
    predicate: &Predicate,
    s: usize,
    q: usize,
    trials: usize,
    stream: &mut SeededStream,
    search_budget: u64,
) -> Result<InheritanceReport> {
    let n = g.n();
    if s > n || q > s {
        return Err(Error::param(format!("need q <= s <= n, got q={q}, s={s}, n={n}")));
    }
    let mut q_set: Vec<usize> = sample(stream, n, q).iter().map(|i| i + 1).collect();
    q_set.sort_unstable();
    let rest: Vec<usize> = (1..=n).filter(|v| !q_set.contains(v)).collect();
    let mut hits = 0;
    for _ in 0..trials {
        let mut set = q_set.clone();
        set.extend(sample(stream, rest.len(), s - q).iter().map(|i| rest[i]));
        set.sort_unstable();
        if predicate.eval(g, &set, search_budget)? {
            hits += 1;
        }
    }
    let sf = s as f64;
    Ok(InheritanceReport {
        predicate: predicate.name(),
        n,
        s,
        q,
        q_set,
        trials,
        hits,
        fraction: if trials == 0 { 0.0 } else { hits as f64 / trials as f64 },
        bound_sqrt: 1.0 - (-sf.sqrt()).exp(),
        bound_square: 1.0 - 1.0 / (sf * sf),
        generator: GENERATOR.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use itertools::Itertools;

    use super::*;
    use crate::hypercore::Hypergraph;
    use crate::rational::Rational;

    fn min_degree(d: usize, num: i64, den: i64) -> Predicate {
        Predicate::MinDegreeAtLeast { d, ratio: Rational::new(num, den) }
    }

    #[test]
    fn trivial_hosts() {
        let mut s = SeededStream::new(3, 0);
        let complete = GraphFile::Uniform(Hypergraph::complete(10, 2).unwrap());
        let r = run_inheritance_experiment(&complete, &min_degree(1, 9, 10), 6, 1, 50, &mut s, 1000).unwrap();
        assert_eq!(r.fraction, 1.0);
        let empty = GraphFile::Uniform(Hypergraph::empty(10, 2).unwrap());
        let r = run_inheritance_experiment(&empty, &min_degree(1, 9, 10), 6, 1, 50, &mut s, 1000).unwrap();
        assert_eq!(r.fraction, 0.0);
    }

    #[test]
    fn sampled_fraction_matches_exhaustive_count() {
        // K_16 minus the circulant 3-regular graph with offsets 1 and 8:
        // every degree is 12 = (3/4) n.
        let n = 16;
        let edges: Vec<Vec<usize>> = (1..=n)
            .combinations(2)
            .filter(|e| {
                let d = (e[1] - e[0]) % n;
                !(d == 1 || d == n - 1 || d == 8)
            })
            .collect();
        let g = Hypergraph::new(n, 2, edges).unwrap();
        assert!(g.degrees()[1..].iter().all(|&x| x == 12));
        let host = GraphFile::Uniform(g.clone());
        let pred = min_degree(1, 7, 10);
        let trials = 4000;
        let r = run_inheritance_experiment(&host, &pred, 12, 1, trials, &mut SeededStream::new(9, 1), 1000).unwrap();
        // Oracle: all 11-subsets of the other 15 vertices.
        let others: Vec<usize> = (1..=n).filter(|&v| v != r.q_set[0]).collect();
        let (mut good, mut total) = (0usize, 0usize);
        for rest in others.iter().copied().combinations(11) {
            let mut set = rest;
            set.push(r.q_set[0]);
            set.sort_unstable();
            let sub = g.induced_relabeled(&set);
            total += 1;
            if sub.degrees()[1..].iter().all(|&x| 10 * x >= 7 * 11) {
                good += 1;
            }
        }
        let exact = good as f64 / total as f64;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!((r.fraction - exact).abs() <= 3.0 * sigma + 1e-9, "{} vs {exact}", r.fraction);
        assert!((r.bound_sqrt - (1.0 - (-12f64.sqrt()).exp())).abs() < 1e-12);
    }
}
