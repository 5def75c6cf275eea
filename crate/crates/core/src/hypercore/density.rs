use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::Hypergraph;
use crate::error::{Error, Result};
use crate::randomness::SeededStream;
use crate::rational::Rational;
use crate::util::binomial;

/// Default cap on the number of (unordered) subset tuples examined by the
/// exhaustive uniform-density check.
pub const DEFAULT_DENSITY_BUDGET: u128 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// Every tuple `X_1 <= ... <= X_k` of vertex subsets (the count is
    /// symmetric in the sets, so unordered tuples suffice).
    Exhaustive { budget: u128 },
    /// `samples` random tuples drawn from the given stream.
    Sampled { samples: usize, seed: u64, stream: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformDensityReport {
    pub holds: bool,
    /// The tuple with the largest violation, when one exists.
    pub witness: Option<Vec<Vec<usize>>>,
    /// `d |X_1|...|X_k| - eps n - e_G(X_1..X_k)` at the witness.
    pub worst_deficit: Option<String>,
    pub tuples_tested: u128,
    pub exhaustive: bool,
}

/// Counts edges `{v_1..v_k}` that admit an assignment `v_i in X_i` with all
/// indices distinct (a system of distinct representatives).
struct SdrCounter {
    k: usize,
    perms: Vec<Vec<usize>>,
    edges: Vec<Vec<usize>>,
}

impl SdrCounter {
    fn new(g: &Hypergraph) -> Self {
        SdrCounter {
            k: g.k(),
            perms: (0..g.k()).permutations(g.k()).collect(),
            edges: g.edges().cloned().collect(),
        }
    }

    fn count(&self, masks: &[u64]) -> u64 {
        let mut total = 0;
        for e in &self.edges {
            let hit = self.perms.iter().any(|p| {
                (0..self.k).all(|i| masks[i] >> e[p[i]] & 1 == 1)
            });
            if hit {
                total += 1;
            }
        }
        total
    }
}

fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Checks `e_G(X_1, ..., X_k) >= d |X_1| ... |X_k| - eps * n` for every
/// tested tuple of (not necessarily disjoint) vertex sets.
///
/// The slack term is `eps * n`, linear in `n`; many sources use `eps * n^k`
/// instead, which makes the condition far weaker.
pub fn is_uniformly_dense(
    g: &Hypergraph,
    eps: Rational,
    d: Rational,
    mode: DensityMode,
) -> Result<UniformDensityReport> {
    if d <= Rational::zero() || d > Rational::from_integer(1) {
        return Err(Error::param("density d must lie in (0, 1]"));
    }
    if eps < Rational::zero() {
        return Err(Error::param("slack eps must be non-negative"));
    }
    if g.n() > 62 {
        return Err(Error::param("uniform density checks support at most 62 vertices"));
    }
    let k = g.k();
    let counter = SdrCounter::new(g);
    let n = g.n() as i128;
    // violation iff e * db * eb < da * eb * prod - ea * db * n
    let (da, db) = (*d.numer() as i128, *d.denom() as i128);
    let (ea, eb) = (*eps.numer() as i128, *eps.denom() as i128);
    let deficit_scaled = |masks: &[u64]| -> i128 {
        let prod: i128 = masks.iter().map(|m| m.count_ones() as i128).product();
        let e = counter.count(masks) as i128;
        da * eb * prod - ea * db * n - e * db * eb
    };

    let mut best: Option<(i128, Vec<u64>)> = None;
    let consider = |masks: &[u64], best: &mut Option<(i128, Vec<u64>)>| {
        let def = deficit_scaled(masks);
        if def > 0 && best.as_ref().map_or(true, |(b, _)| def > *b) {
            *best = Some((def, masks.to_vec()));
        }
    };

    let (tested, exhaustive) = match mode {
        DensityMode::Exhaustive { budget } => {
            let universe = 1u64 << g.n();
            let count = binomial(universe + k as u64 - 1, k as u64).unwrap_or(u128::MAX);
            if count > budget {
                return Err(Error::Budget(format!(
                    "exhaustive density check needs {count} tuples, budget is {budget}"
                )));
            }
            // Vertex v is bit v, so valid masks are even numbers below 2^(n+1).
            let masks: Vec<u64> = (0..universe).map(|m| m << 1).collect();
            let mut idx = vec![0usize; k];
            let mut cur = vec![0u64; k];
            loop {
                for i in 0..k {
                    cur[i] = masks[idx[i]];
                }
                consider(&cur, &mut best);
                // Next non-decreasing index tuple.
                let mut i = k;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if idx[i] + 1 < masks.len() {
                        idx[i] += 1;
                        for j in i + 1..k {
                            idx[j] = idx[i];
                        }
                        break;
                    }
                    if i == 0 {
                        idx.clear();
                        break;
                    }
                }
                if idx.is_empty() {
                    break;
                }
            }
            (count, true)
        }
        DensityMode::Sampled { samples, seed, stream } => {
            let mut rng = SeededStream::new(seed, stream);
            let mut cur = vec![0u64; k];
            for _ in 0..samples {
                for slot in cur.iter_mut() {
                    let size = rng.gen_range(0..=g.n());
                    let chosen = rand::seq::index::sample(&mut rng, g.n(), size);
                    *slot = chosen.iter().fold(0u64, |m, i| m | 1 << (i + 1));
                }
                consider(&cur, &mut best);
            }
            (samples as u128, false)
        }
    };

    let scale = (db * eb).to_i64().unwrap_or(i64::MAX);
    Ok(match best {
        None => UniformDensityReport {
            holds: true,
            witness: None,
            worst_deficit: None,
            tuples_tested: tested,
            exhaustive,
        },
        Some((def, masks)) => UniformDensityReport {
            holds: false,
            witness: Some(masks.iter().map(|&m| mask_to_set(m)).collect()),
            worst_deficit: Some(Rational::new(def as i64, scale).to_string()),
            tuples_tested: tested,
            exhaustive,
        },
    })
}

/// Degree-sequence condition for powers of Hamilton cycles: the sorted
/// degrees `d_1 <= ... <= d_n` satisfy `d_i > (t-2) n / t + i + mu n` for
/// every `1 <= i <= n / t`.
pub fn check_degree_sequence(g: &Hypergraph, t: usize, mu: Rational) -> Result<bool> {
    if g.k() != 2 {
        return Err(Error::param("degree sequences are defined for 2-graphs"));
    }
    if t < 2 {
        return Err(Error::param("t must be at least 2"));
    }
    let n = g.n() as i64;
    let mut degrees: Vec<usize> = g.degrees().into_iter().skip(1).collect();
    degrees.sort_unstable();
    let base = Rational::new((t as i64 - 2) * n, t as i64) + mu * Rational::from_integer(n);
    let limit = g.n() / t;
    Ok((1..=limit).all(|i| {
        Rational::from_integer(degrees[i - 1] as i64) > base + Rational::from_integer(i as i64)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXHAUSTIVE: DensityMode = DensityMode::Exhaustive { budget: DEFAULT_DENSITY_BUDGET };

    #[test]
    fn complete_graphs_are_dense() {
        let g = Hypergraph::complete(5, 2).unwrap();
        let r = is_uniformly_dense(&g, Rational::zero(), Rational::new(1, 2), EXHAUSTIVE).unwrap();
        assert!(!r.holds, "tuples X1 = X2 = {{v}} have no edge but d*1*1 > 0");
        // With slack eps*n >= d the singleton tuples no longer violate.
        let r = is_uniformly_dense(&g, Rational::new(1, 2), Rational::new(1, 2), EXHAUSTIVE).unwrap();
        assert!(r.tuples_tested > 0);
    }

    #[test]
    fn empty_graph_witness_is_the_full_tuple() {
        let g = Hypergraph::empty(4, 2).unwrap();
        let r = is_uniformly_dense(&g, Rational::zero(), Rational::new(1, 2), EXHAUSTIVE).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap(), vec![vec![1, 2, 3, 4], vec![1, 2, 3, 4]]);
    }

    #[test]
    fn budget_is_enforced() {
        let g = Hypergraph::complete(12, 3).unwrap();
        let err = is_uniformly_dense(&g, Rational::zero(), Rational::new(1, 2), EXHAUSTIVE);
        assert!(matches!(err, Err(Error::Budget(_))));
    }

    #[test]
    fn degree_sequences() {
        let k30 = Hypergraph::complete(30, 2).unwrap();
        // d_i = 29 > 10 + i + 30 mu for i <= 10 iff mu < 0.3.
        assert!(check_degree_sequence(&k30, 3, Rational::new(1, 4)).unwrap());
        assert!(!check_degree_sequence(&k30, 3, Rational::new(3, 10)).unwrap());
        let empty = Hypergraph::empty(10, 2).unwrap();
        assert!(!check_degree_sequence(&empty, 3, Rational::zero()).unwrap());
        let star = Hypergraph::new(6, 2, (2..=6).map(|v| vec![1, v])).unwrap();
        assert!(!check_degree_sequence(&star, 2, Rational::zero()).unwrap());
    }
}
