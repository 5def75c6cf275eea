use rand::Rng;

use super::SeededStream;
use crate::error::{Error, Result};
use crate::hypercore::{Digraph, Hypergraph};
use crate::util::falling_factorial;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(format!("probability {p} outside [0, 1]")))
    }
}

/// `G_p`: keep every edge independently with probability `p`. Edges are
/// visited in sorted order, one Bernoulli draw each.
pub trait Sparsify: Sized {
    fn sparsify(&self, p: f64, stream: &mut SeededStream) -> Result<Self>;
}

impl Sparsify for Hypergraph {
    fn sparsify(&self, p: f64, stream: &mut SeededStream) -> Result<Self> {
        check_probability(p)?;
        let kept: Vec<Vec<usize>> = self.edges().filter(|_| stream.gen_bool(p)).cloned().collect();
        Hypergraph::new(self.n(), self.k(), kept)
    }
}

impl Sparsify for Digraph {
    fn sparsify(&self, p: f64, stream: &mut SeededStream) -> Result<Self> {
        check_probability(p)?;
        let kept: Vec<Vec<usize>> = self.edges().filter(|_| stream.gen_bool(p)).cloned().collect();
        Digraph::new(self.n(), kept)
    }
}

/// The `index`-th `k`-tuple of distinct elements of `1..=n` in lexicographic
/// order.
fn decode_tuple(n: usize, k: usize, mut index: u128) -> Vec<usize> {
    let mut unused: Vec<usize> = (1..=n).collect();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let block = falling_factorial((n - j - 1) as u64, (k - j - 1) as u64);
        let digit = (index / block) as usize;
        index %= block;
        out.push(unused.remove(digit));
    }
    out
}

/// A `q`-binomial random subset of the `k`-tuples of distinct vertices,
/// generated by geometric skipping over the lexicographic index.
pub fn binomial_tuple_set(n: usize, k: usize, q: f64, stream: &mut SeededStream) -> Result<Digraph> {
    check_probability(q)?;
    if k == 0 || k > n {
        return Err(Error::param(format!("tuple length {k} must lie in 1..={n}")));
    }
    let total = falling_factorial(n as u64, k as u64);
    let mut tuples = Vec::new();
    if q == 0.0 {
        return Digraph::new(n, tuples);
    }
    if q == 1.0 {
        tuples.extend((0..total).map(|i| decode_tuple(n, k, i)));
        return Digraph::new(n, tuples);
    }
    let log_miss = (1.0 - q).ln();
    let mut next: u128 = 0;
    loop {
        let u: f64 = 1.0 - stream.gen::<f64>(); // in (0, 1]
        let skip = (u.ln() / log_miss).floor();
        if !skip.is_finite() || skip >= (total - next) as f64 {
            break;
        }
        next += skip as u128;
        if next >= total {
            break;
        }
        tuples.push(decode_tuple(n, k, next));
        next += 1;
    }
    Digraph::new(n, tuples)
}
