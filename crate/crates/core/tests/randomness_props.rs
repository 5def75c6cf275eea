use chainforge::hypercore::{Digraph, Hypergraph};
use chainforge::randomness::{binomial_tuple_set, sample_hamilton_cycle_uniform, sample_perfect_matching_uniform, SeededStream, Sparsify};
use proptest::prelude::*;
use statrs::distribution::{Binomial, DiscreteCDF};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn identical_streams_reproduce_every_sampler(seed in any::<u64>(), id in any::<u64>(), p in 0.0f64..=1.0) {
        let g = Hypergraph::complete(9, 3).unwrap();
        let d = Digraph::complete(6, &[2, 1]);
        let run = || {
            let mut s = SeededStream::new(seed, id);
            (
                g.sparsify(p, &mut s).unwrap(),
                d.sparsify(p, &mut s).unwrap(),
                binomial_tuple_set(7, 3, p, &mut s).unwrap(),
                sample_perfect_matching_uniform(&Hypergraph::complete(6, 2).unwrap(), None, &mut s).unwrap(),
                sample_hamilton_cycle_uniform(8, &mut s).unwrap(),
            )
        };
        prop_assert_eq!(run(), run());
        // Substreams depend only on (seed, id, index).
        let base = SeededStream::new(seed, id);
        let mut a = base.substream(3);
        let mut b = SeededStream::new(seed, id).substream(3);
        prop_assert_eq!(g.sparsify(p, &mut a).unwrap(), g.sparsify(p, &mut b).unwrap());
    }
}

/// Kolmogorov-Smirnov distance between the empirical edge counts and
/// `Binomial(e(G), p)`.
fn ks_distance(counts: &[u64], edges: u64, p: f64) -> f64 {
    let bin = Binomial::new(p, edges).unwrap();
    let n = counts.len() as f64;
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    (0..=edges)
        .map(|x| {
            let below = sorted.partition_point(|&c| c <= x) as f64 / n;
            (below - bin.cdf(x)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn sparsified_edge_counts_are_binomial() {
    let g = Hypergraph::complete(8, 3).unwrap();
    let d = Digraph::complete(6, &[2]);
    let draws = 5000;
    // 1% critical value of the two-sided test; conservative for discrete laws.
    let critical = 1.63 / (draws as f64).sqrt();
    for (i, p) in [0.1, 0.35, 0.8].into_iter().enumerate() {
        let base = SeededStream::new(31, i as u64);
        let counts: Vec<u64> =
            (0..draws).map(|t| g.sparsify(p, &mut base.substream(t)).unwrap().edge_count() as u64).collect();
        let dist = ks_distance(&counts, 56, p);
        assert!(dist < critical, "uniform p={p}: D = {dist}");
        let counts: Vec<u64> =
            (0..draws).map(|t| d.sparsify(p, &mut base.substream(t)).unwrap().edge_count() as u64).collect();
        let dist = ks_distance(&counts, 30, p);
        assert!(dist < critical, "digraph p={p}: D = {dist}");
        let counts: Vec<u64> = (0..draws)
            .map(|t| binomial_tuple_set(6, 2, p, &mut base.substream(t)).unwrap().edge_count() as u64)
            .collect();
        let dist = ks_distance(&counts, 30, p);
        assert!(dist < critical, "tuple set p={p}: D = {dist}");
    }
}
