use std::collections::{BTreeMap, BTreeSet, HashSet};

use itertools::Itertools;
use serde::Serialize;

use crate::constructor::{ConstructOptions, Constructor};
use crate::error::Result;
use crate::hypercore::Digraph;
use crate::linkchain::{validate_closed_chain, Link};
use crate::randomness::{correctness_from_hits, CorrectnessReport, SeededStream};

#[derive(Clone, Debug)]
pub struct StressConfig {
    pub host: Digraph,
    pub link: Link,
    pub s1: usize,
    pub runs: usize,
    pub seed: u64,
    pub options: ConstructOptions,
    /// Test graphs for the correctness estimate; `None` uses
    /// [`standard_battery`] with at most 4 vertices.
    pub battery: Option<Vec<Vec<Vec<usize>>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StressReport {
    pub runs: usize,
    pub successes: usize,
    /// Successful runs whose chain validated against the host.
    pub validated: usize,
    pub success_rate: f64,
    pub validation_rate: f64,
    /// Error messages of failed runs, with counts.
    pub failures: BTreeMap<String, usize>,
    pub k_hat: Option<f64>,
    pub correctness: Option<CorrectnessReport>,
    pub desk_scale: bool,
}

/// Small test graphs built from the windows of a canonical open chain on
/// `1, 2, ...`: every set of up to three window edges, plus two edges
/// moved apart, keeping those with at most `max_vertices` vertices.
pub fn standard_battery(link: &Link, max_vertices: usize) -> Vec<Vec<Vec<usize>>> {
    let span = link.order() + 3 * link.r();
    let mut windows: Vec<Vec<usize>> = Vec::new();
    for w in 0..=(span - link.order()) / link.r() {
        for e in link.edges() {
            windows.push(e.iter().map(|&j| w * link.r() + j).collect());
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut consider = |mut g: Vec<Vec<usize>>| {
        let vs: BTreeSet<usize> = g.iter().flatten().copied().collect();
        g.sort();
        if vs.len() <= max_vertices && seen.insert(g.clone()) {
            out.push(g);
        }
    };
    for size in 1..=3 {
        for set in windows.iter().cloned().combinations(size) {
            consider(set);
        }
    }
    for e in link.edges() {
        let shifted: Vec<usize> = e.iter().map(|&j| j + link.order()).collect();
        consider(vec![e.clone(), shifted]);
    }
    out
}

pub fn run_constructor_stress(cfg: &StressConfig) -> StressReport {
    let mut failures = BTreeMap::new();
    let mut constructor = match Constructor::new(&cfg.host, &cfg.link, cfg.s1, cfg.options) {
        Ok(c) => c,
        Err(e) => {
            failures.insert(e.to_string(), cfg.runs);
            return StressReport {
                runs: cfg.runs,
                successes: 0,
                validated: 0,
                success_rate: 0.0,
                validation_rate: 0.0,
                failures,
                k_hat: None,
                correctness: None,
                desk_scale: cfg.s1 < 5 * cfg.link.order(),
            };
        }
    };
    let battery = cfg.battery.clone().unwrap_or_else(|| standard_battery(&cfg.link, 4));
    let base = SeededStream::new(cfg.seed, 0);
    let mut hits = vec![0usize; battery.len()];
    let (mut successes, mut validated) = (0, 0);
    for t in 0..cfg.runs {
        match constructor.construct(&mut base.substream(t as u64)) {
            Ok(c) => {
                successes += 1;
                if validate_closed_chain(&cfg.link, &cfg.host, &c.chain.ordering) {
                    validated += 1;
                }
                let edges: HashSet<&Vec<usize>> = c.chain.edges.edges().collect();
                for (h, g) in hits.iter_mut().zip(&battery) {
                    if g.iter().all(|e| edges.contains(e)) {
                        *h += 1;
                    }
                }
            }
            Err(e) => *failures.entry(e.to_string()).or_insert(0) += 1,
        }
    }
    let correctness: Option<Result<CorrectnessReport>> =
        (successes > 0).then(|| correctness_from_hits(cfg.host.n(), &battery, &hits, successes));
    let correctness = correctness.and_then(|r| r.ok());
    StressReport {
        runs: cfg.runs,
        successes,
        validated,
        success_rate: successes as f64 / cfg.runs.max(1) as f64,
        validation_rate: if successes == 0 { 0.0 } else { validated as f64 / successes as f64 },
        failures,
        k_hat: correctness.as_ref().map(|c| c.k_hat),
        correctness,
        desk_scale: constructor.desk_scale(),
    }
}
