use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::matching::{PerfectMatchingTable, DEFAULT_MATCHING_BUDGET};
use super::{SeededStream, GENERATOR};
use crate::error::{Error, Result};
use crate::hypercore::{components2, Digraph, Hypergraph};
use crate::util::{binomial_sat, for_each_subset};

/// A random structure on a fixed ground set, sampled one trial at a time.
/// Ground elements are vertex lists (sorted for undirected edges, ordered
/// for directed tuples).
pub trait Sampler {
    fn vertex_count(&self) -> usize;
    fn in_ground(&self, element: &[usize]) -> bool;
    fn sample(&mut self, stream: &mut SeededStream) -> Result<Vec<Vec<usize>>>;
}

/// Which sets `I` to estimate `P[I ⊆ C]` for.
#[derive(Clone, Debug)]
pub enum TestSets {
    Explicit(Vec<Vec<Vec<usize>>>),
    /// Every `I` with `1 <= |I| <= size`. Sets that never occur have
    /// frequency zero and only enter the per-size sums.
    AllUpToSize(usize),
}

/// Strong-spread sums `sum_{I ⊆ S, |I| = j} P[I ⊆ C]` for `a|S| <= j <= |S|`.
#[derive(Clone, Debug)]
pub struct StrongSpec {
    pub set: Vec<Vec<usize>>,
    pub a: f64,
    /// The `q` to divide by; defaults to the measured `q_hat`.
    pub q: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SizeStats {
    pub sets: u128,
    pub max: f64,
    pub sum: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongRow {
    pub j: usize,
    pub sum: f64,
    /// `sum^(1/j) / q`: the smallest `b` with `sum <= (b q)^j`.
    pub b: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpreadReport {
    pub q_hat: f64,
    pub argmax: Option<Vec<Vec<usize>>>,
    pub per_size: BTreeMap<usize, SizeStats>,
    pub strong: Option<Vec<StrongRow>>,
    pub b_hat: Option<f64>,
    pub trials: usize,
    pub tested_sets: String,
    pub generator: String,
}

impl SpreadReport {
    /// Largest frequency among tested sets of size `j` (zero when none).
    pub fn max_frequency(&self, j: usize) -> f64 {
        self.per_size.get(&j).map_or(0.0, |s| s.max)
    }
}

pub fn estimate_spread<S: Sampler + ?Sized>(
    sampler: &mut S,
    test_sets: &TestSets,
    strong: Option<&StrongSpec>,
    trials: usize,
    stream: &SeededStream,
) -> Result<SpreadReport> {
    if trials == 0 {
        return Err(Error::param("spread estimation needs at least one trial"));
    }
    let mut per_size: BTreeMap<usize, SizeStats> = BTreeMap::new();
    let mut best: (f64, Option<Vec<Vec<usize>>>) = (0.0, None);
    let mut strong_sums: Vec<(usize, f64)> = Vec::new();
    let strong_set: HashSet<Vec<usize>> = strong.map(|s| s.set.iter().cloned().collect()).unwrap_or_default();
    if let Some(spec) = strong {
        if let Some(bad) = spec.set.iter().find(|e| !sampler.in_ground(e)) {
            return Err(Error::Precondition(format!("strong-spread set element {bad:?} is not in the ground set")));
        }
        let size = strong_set.len();
        let lo = ((spec.a * size as f64).ceil() as usize).max(1);
        strong_sums = (lo..=size).map(|j| (j, 0.0)).collect();
    }
    let mut record = |set: Vec<Vec<usize>>, p: f64| {
        let stats = per_size.entry(set.len()).or_default();
        stats.sets += 1;
        stats.sum += p;
        if p > stats.max {
            stats.max = p;
        }
        let root = p.powf(1.0 / set.len() as f64);
        if root > best.0 || best.1.is_none() {
            best = (root, Some(set));
        }
    };

    let description;
    match test_sets {
        TestSets::Explicit(sets) => {
            for set in sets {
                if set.is_empty() {
                    return Err(Error::param("test sets must be nonempty"));
                }
                if let Some(bad) = set.iter().find(|e| !sampler.in_ground(e)) {
                    return Err(Error::Precondition(format!("test element {bad:?} is not in the ground set")));
                }
            }
            let mut hits = vec![0usize; sets.len()];
            for t in 0..trials {
                let sample: HashSet<Vec<usize>> = sampler.sample(&mut stream.substream(t as u64))?.into_iter().collect();
                for (h, set) in hits.iter_mut().zip(sets) {
                    if set.iter().all(|e| sample.contains(e)) {
                        *h += 1;
                    }
                }
                accumulate_strong(&mut strong_sums, &strong_set, &sample);
            }
            for (h, set) in hits.into_iter().zip(sets) {
                record(set.clone(), h as f64 / trials as f64);
            }
            description = format!("{} explicit sets", sets.len());
        }
        TestSets::AllUpToSize(max_size) => {
            let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
            let mut names: Vec<Vec<usize>> = Vec::new();
            let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
            let mut expected_sums = vec![0.0f64; max_size + 1];
            for t in 0..trials {
                let sample = sampler.sample(&mut stream.substream(t as u64))?;
                let mut keys: Vec<u32> = sample
                    .iter()
                    .map(|e| {
                        *ids.entry(e.clone()).or_insert_with(|| {
                            names.push(e.clone());
                            (names.len() - 1) as u32
                        })
                    })
                    .collect();
                keys.sort_unstable();
                for j in 1..=*max_size {
                    expected_sums[j] += binomial_sat(keys.len() as u64, j as u64) as f64;
                    for_each_subset(&keys, j, |sub| {
                        *counts.entry(sub.to_vec()).or_default() += 1;
                        true
                    });
                }
                let set: HashSet<Vec<usize>> = sample.into_iter().collect();
                accumulate_strong(&mut strong_sums, &strong_set, &set);
            }
            let mut entries: Vec<(Vec<u32>, usize)> = counts.into_iter().collect();
            entries.sort();
            for (key, c) in entries {
                record(key.iter().map(|&i| names[i as usize].clone()).collect(), c as f64 / trials as f64);
            }
            // The per-size sums count every set, observed or not.
            for (j, s) in expected_sums.iter().enumerate().skip(1) {
                per_size.entry(j).or_default().sum = s / trials as f64;
            }
            description = format!("all sets of size 1..={max_size}");
        }
    }

    let q_hat = best.0;
    let (strong_rows, b_hat) = match strong {
        None => (None, None),
        Some(spec) => {
            let q = spec.q.unwrap_or(q_hat);
            let rows: Vec<StrongRow> = strong_sums
                .iter()
                .map(|&(j, s)| {
                    let sum = s / trials as f64;
                    StrongRow { j, sum, b: sum.powf(1.0 / j as f64) / q }
                })
                .collect();
            let b = rows.iter().map(|r| r.b).fold(0.0, f64::max);
            (Some(rows), Some(b))
        }
    };
    Ok(SpreadReport {
        q_hat,
        argmax: best.1,
        per_size,
        strong: strong_rows,
        b_hat,
        trials,
        tested_sets: description,
        generator: GENERATOR.to_string(),
    })
}

fn accumulate_strong(sums: &mut [(usize, f64)], set: &HashSet<Vec<usize>>, sample: &HashSet<Vec<usize>>) {
    if sums.is_empty() {
        return;
    }
    let inside = set.iter().filter(|e| sample.contains(*e)).count() as u64;
    for (j, s) in sums.iter_mut() {
        *s += binomial_sat(inside, *j as u64) as f64;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrectnessRow {
    pub edges: Vec<Vec<usize>>,
    pub v: usize,
    pub c: usize,
    pub p_hat: f64,
    /// `(p_hat n^(v-c))^(1/v)`.
    pub k: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrectnessReport {
    pub k_hat: f64,
    pub rows: Vec<CorrectnessRow>,
    pub n: usize,
    pub trials: usize,
    pub generator: String,
}

impl CorrectnessReport {
    /// Recomputes `k_hat` from the stored rows.
    pub fn recompute(&self) -> f64 {
        self.rows.iter().map(|r| r.k).fold(0.0, f64::max)
    }
}

/// Number of vertices and of 2-shadow components of a test graph.
pub(crate) fn vertices_and_components(n: usize, edges: &[Vec<usize>]) -> Result<(usize, usize)> {
    let d = Digraph::new(n, edges.iter().cloned())?;
    let parts = components2(&d);
    let v = parts.blocks.iter().map(|b| b.vertices.len()).sum();
    Ok((v, parts.len()))
}

pub fn estimate_correctness<S: Sampler + ?Sized>(
    sampler: &mut S,
    test_graphs: &[Vec<Vec<usize>>],
    trials: usize,
    stream: &SeededStream,
) -> Result<CorrectnessReport> {
    if trials == 0 {
        return Err(Error::param("correctness estimation needs at least one trial"));
    }
    let n = sampler.vertex_count();
    for g in test_graphs {
        vertices_and_components(n, g)?;
    }
    let mut hits = vec![0usize; test_graphs.len()];
    for t in 0..trials {
        let sample: HashSet<Vec<usize>> = sampler.sample(&mut stream.substream(t as u64))?.into_iter().collect();
        for (h, g) in hits.iter_mut().zip(test_graphs) {
            if g.iter().all(|e| sample.contains(e)) {
                *h += 1;
            }
        }
    }
    correctness_from_hits(n, test_graphs, &hits, trials)
}

/// Builds the correctness report from containment counts over `trials`
/// samples; `hits[i]` counts samples containing `test_graphs[i]`.
pub fn correctness_from_hits(
    n: usize,
    test_graphs: &[Vec<Vec<usize>>],
    hits: &[usize],
    trials: usize,
) -> Result<CorrectnessReport> {
    if trials == 0 {
        return Err(Error::param("correctness estimation needs at least one trial"));
    }
    let mut rows = Vec::with_capacity(test_graphs.len());
    for (g, &h) in test_graphs.iter().zip(hits) {
        let (v, c) = vertices_and_components(n, g)?;
        if v == 0 {
            continue;
        }
        let p_hat = h as f64 / trials as f64;
        let k = (p_hat * (n as f64).powi(v as i32 - c as i32)).powf(1.0 / v as f64);
        rows.push(CorrectnessRow { edges: g.clone(), v, c, p_hat, k });
    }
    let k_hat = rows.iter().map(|r| r.k).fold(0.0, f64::max);
    Ok(CorrectnessReport { k_hat, rows, n, trials, generator: GENERATOR.to_string() })
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingBoundReport {
    pub p_hat: f64,
    /// `max_e P[e ∈ M] n^(s-1)`: the empirical spread constant of the matching.
    pub c_prime: f64,
    pub c_used: f64,
    pub v: usize,
    pub c: usize,
    pub bound: f64,
    pub sigma: f64,
    pub holds: bool,
    pub margin: f64,
    pub trials: usize,
    pub generator: String,
}

/// Estimates `P[I ⊆ ∂_2 M]` for a uniform perfect matching `M` of the
/// `s`-graph `h` and compares it with `(2C)^v n^(c-v)`, where `C` is the
/// larger of `c_param` and the measured spread constant.
pub fn verify_spread_matching_bound(
    h: &Hypergraph,
    i: &Hypergraph,
    c_param: f64,
    trials: usize,
    stream: &SeededStream,
) -> Result<MatchingBoundReport> {
    if trials == 0 {
        return Err(Error::param("bound verification needs at least one trial"));
    }
    if i.k() != 2 || i.n() != h.n() {
        return Err(Error::param("I must be a 2-graph on the host's vertex set"));
    }
    let n = h.n();
    let parts = components2(i);
    let c = parts.len();
    let v: usize = parts.blocks.iter().map(|b| b.vertices.len()).sum();
    if 2 * c > n {
        return Err(Error::Precondition(format!("I has {c} components, more than n/2 = {}", n / 2)));
    }
    let table = PerfectMatchingTable::new(h, None, DEFAULT_MATCHING_BUDGET)?;
    if table.count() == 0 {
        return Err(Error::Precondition("host has no perfect matching".into()));
    }
    let mut edge_hits: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut hits = 0usize;
    let wanted: Vec<Vec<usize>> = i.edges().cloned().collect();
    for t in 0..trials {
        let m = table
            .sample(&mut stream.substream(t as u64))
            .ok_or_else(|| Error::Internal("matching table lost its matchings".into()))?;
        let mut owner = vec![usize::MAX; n + 1];
        for (idx, e) in m.iter().enumerate() {
            for &x in e {
                owner[x] = idx;
            }
            *edge_hits.entry(e.clone()).or_default() += 1;
        }
        if wanted.iter().all(|e| owner[e[0]] == owner[e[1]]) {
            hits += 1;
        }
    }
    let s = h.k();
    let p_hat = hits as f64 / trials as f64;
    let max_edge = edge_hits.values().copied().max().unwrap_or(0) as f64 / trials as f64;
    let c_prime = max_edge * (n as f64).powi(s as i32 - 1);
    let c_used = c_prime.max(c_param);
    let bound = (2.0 * c_used).powi(v as i32) * (n as f64).powi(c as i32 - v as i32);
    let clipped = bound.min(1.0);
    let sigma = (clipped * (1.0 - clipped) / trials as f64).sqrt();
    Ok(MatchingBoundReport {
        p_hat,
        c_prime,
        c_used,
        v,
        c,
        bound,
        sigma,
        holds: p_hat <= bound + 3.0 * sigma,
        margin: bound - p_hat,
        trials,
        generator: GENERATOR.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::{HamiltonCycleSampler, MatchingSampler};

    struct Fixed(Vec<Vec<usize>>);

    impl Sampler for Fixed {
        fn vertex_count(&self) -> usize {
            4
        }
        fn in_ground(&self, e: &[usize]) -> bool {
            e.len() == 2 && e[0] < e[1] && e[1] <= 4
        }
        fn sample(&mut self, _: &mut SeededStream) -> Result<Vec<Vec<usize>>> {
            Ok(self.0.clone())
        }
    }

    #[test]
    fn deterministic_sampler_has_frequency_one() {
        let mut s = Fixed(vec![vec![1, 2], vec![2, 3]]);
        let sets = TestSets::Explicit(vec![vec![vec![1, 2]], vec![vec![1, 2], vec![2, 3]], vec![vec![3, 4]]]);
        let r = estimate_spread(&mut s, &sets, None, 10, &SeededStream::new(0, 0)).unwrap();
        assert_eq!(r.max_frequency(1), 1.0);
        assert_eq!(r.max_frequency(2), 1.0);
        assert_eq!(r.q_hat, 1.0);
    }

    #[test]
    fn non_ground_tuples_are_rejected() {
        let mut s = Fixed(vec![vec![1, 2]]);
        let sets = TestSets::Explicit(vec![vec![vec![2, 1]]]);
        assert!(estimate_spread(&mut s, &sets, None, 10, &SeededStream::new(0, 0)).is_err());
        assert!(estimate_spread(&mut s, &TestSets::AllUpToSize(1), None, 0, &SeededStream::new(0, 0)).is_err());
    }

    #[test]
    fn all_subsets_mode_matches_explicit_sets() {
        let mut cyc = HamiltonCycleSampler::new(6).unwrap();
        let stream = SeededStream::new(2, 0);
        let all = estimate_spread(&mut cyc, &TestSets::AllUpToSize(2), None, 2000, &stream).unwrap();
        let edges: Vec<Vec<Vec<usize>>> = (1..=6)
            .flat_map(|a| (a + 1..=6).map(move |b| vec![vec![a, b]]))
            .collect();
        let explicit = estimate_spread(&mut cyc, &TestSets::Explicit(edges), None, 2000, &stream).unwrap();
        assert_eq!(all.max_frequency(1), explicit.max_frequency(1));
        // Each cycle has 6 edges, so the size-1 sum is exactly 6.
        assert!((all.per_size[&1].sum - 6.0).abs() < 1e-9);
        assert!((all.per_size[&2].sum - 15.0).abs() < 1e-9);
    }

    #[test]
    fn strong_sums_of_a_fixed_sampler() {
        let mut s = Fixed(vec![vec![1, 2], vec![2, 3], vec![3, 4]]);
        let spec = StrongSpec { set: vec![vec![1, 2], vec![2, 3]], a: 0.5, q: Some(0.5) };
        let r = estimate_spread(&mut s, &TestSets::AllUpToSize(1), Some(&spec), 5, &SeededStream::new(0, 0)).unwrap();
        let rows = r.strong.unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].j, rows[0].sum), (1, 2.0));
        assert_eq!((rows[1].j, rows[1].sum), (2, 1.0));
        assert_eq!(r.b_hat, Some(4.0));
    }

    #[test]
    fn correctness_of_uniform_cycles() {
        let n = 8;
        let mut cyc = HamiltonCycleSampler::new(n).unwrap();
        let graphs = vec![vec![vec![1, 2]], vec![vec![1, 2], vec![3, 4]], vec![vec![1, 2], vec![1, 3], vec![1, 4]]];
        let r = estimate_correctness(&mut cyc, &graphs, 20_000, &SeededStream::new(5, 0)).unwrap();
        assert_eq!((r.rows[0].v, r.rows[0].c), (2, 1));
        assert_eq!((r.rows[1].v, r.rows[1].c), (4, 2));
        // A vertex of degree three never occurs in a cycle.
        assert_eq!(r.rows[2].p_hat, 0.0);
        let expected = (2.0 * n as f64 / (n as f64 - 1.0)).sqrt();
        assert!((r.rows[0].k - expected).abs() < 0.05, "{}", r.rows[0].k);
        assert_eq!(r.recompute(), r.k_hat);
    }

    #[test]
    fn matching_bound() {
        let h = Hypergraph::complete(8, 4).unwrap();
        let tri = Hypergraph::new(8, 2, vec![vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        let r = verify_spread_matching_bound(&h, &tri, 0.0, 5000, &SeededStream::new(1, 0)).unwrap();
        assert!(r.holds && r.margin > 0.0, "{r:?}");
        let empty = Hypergraph::empty(8, 2).unwrap();
        let r = verify_spread_matching_bound(&h, &empty, 0.0, 100, &SeededStream::new(1, 0)).unwrap();
        assert_eq!((r.p_hat, r.bound, r.margin), (1.0, 1.0, 0.0));
        assert!(r.holds);
        let many = Hypergraph::new(8, 2, vec![vec![1, 2], vec![3, 4], vec![5, 6], vec![7, 8]]).unwrap();
        assert!(verify_spread_matching_bound(&h, &many, 0.0, 10, &SeededStream::new(1, 0)).is_ok());
        let h6 = Hypergraph::complete(6, 2).unwrap();
        let i = Hypergraph::new(6, 2, vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert!(verify_spread_matching_bound(&h6, &i, 0.0, 10, &SeededStream::new(1, 0)).is_ok());
        let mut sampler = MatchingSampler::new(&h6, None).unwrap();
        assert_eq!(sampler.table().count(), 15);
        assert!(sampler.sample(&mut SeededStream::new(0, 0)).is_ok());
    }
}
