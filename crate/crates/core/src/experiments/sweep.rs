use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::config::SweepConfig;
use super::hosts::build_host;
use crate::error::{Error, Result};
use crate::hamilton::{ChainSearcher, SearchOptions, SearchOutcome};
use crate::hypercore::GraphFile;
use crate::linkchain::Link;
use crate::randomness::{SeededStream, Sparsify};

/// One grid point of a threshold sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub r: usize,
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub unknowns: usize,
    /// `successes / (trials - unknowns)`, or 0 when every trial is unknown.
    pub p_hat: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub seed: u64,
    pub elapsed_ms: u64,
}

impl SweepRow {
    pub fn failures(&self) -> usize {
        self.trials - self.successes - self.unknowns
    }
}

/// The 95% Wilson score interval for `successes` out of `total`; `[0, 1]`
/// when `total` is 0.
pub fn wilson_interval(successes: usize, total: usize) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(0.975);
    let n = total as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// The sparsified host as a digraph to search: all orientations of the
/// kept edges for uniform hosts, the kept tuples for digraph hosts.
fn sparsified(host: &GraphFile, p: f64, stream: &mut SeededStream) -> Result<crate::hypercore::Digraph> {
    Ok(match host {
        GraphFile::Uniform(g) => g.sparsify(p, stream)?.orient_all(),
        GraphFile::Directed(d) => d.sparsify(p, stream)?,
    })
}

fn run_row(
    host: &GraphFile,
    link: &Link,
    cfg: &SweepConfig,
    ni: usize,
    pi: usize,
) -> Result<SweepRow> {
    let start = Instant::now();
    let p = cfg.p_grid[pi];
    let base = SeededStream::new(cfg.seed, (ni as u64) << 32 | pi as u64);
    let opts = SearchOptions { budget: cfg.budget, ..SearchOptions::default() };
    let (mut successes, mut unknowns) = (0, 0);
    for t in 0..cfg.trials {
        let d = sparsified(host, p, &mut base.substream(t as u64))?;
        match ChainSearcher::new(&d, link, true)?.find(None, None, &opts)? {
            SearchOutcome::Found(_) => successes += 1,
            SearchOutcome::NotFound => {}
            SearchOutcome::Unknown => unknowns += 1,
        }
    }
    let decided = cfg.trials - unknowns;
    let (wilson_low, wilson_high) = wilson_interval(successes, decided);
    Ok(SweepRow {
        n: host.n(),
        k: link.k(),
        ell: link.ell(),
        r: link.r(),
        p,
        trials: cfg.trials,
        successes,
        unknowns,
        p_hat: if decided == 0 { 0.0 } else { successes as f64 / decided as f64 },
        wilson_low,
        wilson_high,
        seed: cfg.seed,
        elapsed_ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

pub fn run_threshold_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_threshold_sweep_threads(cfg, 1)
}

/// Runs the sweep on up to `threads` worker threads. Rows depend only on
/// the config, so the output is the same for every thread count.
pub fn run_threshold_sweep_threads(cfg: &SweepConfig, threads: usize) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let link = cfg.guest.link()?;
    let ns: Vec<usize> = if cfg.ns.is_empty() { vec![0] } else { cfg.ns.clone() };
    let mut hosts = Vec::with_capacity(ns.len());
    for (ni, &n) in ns.iter().enumerate() {
        let host = build_host(&cfg.host, n, &mut SeededStream::new(cfg.seed, 1 << 40 | ni as u64))?;
        let k = match &host {
            GraphFile::Uniform(g) => g.k(),
            GraphFile::Directed(_) => link.k(),
        };
        if k != link.k() {
            return Err(Error::param(format!("guest link is {}-uniform but the host is {k}-uniform", link.k())));
        }
        hosts.push(host);
    }
    let jobs: Vec<(usize, usize)> =
        (0..hosts.len()).flat_map(|ni| (0..cfg.p_grid.len()).map(move |pi| (ni, pi))).collect();
    let slots: Vec<Mutex<Option<Result<SweepRow>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, jobs.len().max(1)) {
            scope.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(ni, pi)) = jobs.get(j) else { break };
                let row = run_row(&hosts[ni], &link, cfg, ni, pi);
                *slots[j].lock().expect("row slot") = Some(row);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().expect("row slot").expect("every job ran"))
        .collect()
}

/// The `p` where `p_hat` first reaches `level`, by linear interpolation
/// between consecutive grid points (rows of one `n`, sorted by `p`).
pub fn crossing_point(rows: &[SweepRow], level: f64) -> Option<f64> {
    let mut rows: Vec<&SweepRow> = rows.iter().collect();
    rows.sort_by(|a, b| a.p.total_cmp(&b.p));
    if rows.first()?.p_hat >= level {
        return Some(rows[0].p);
    }
    rows.windows(2).find(|w| w[1].p_hat >= level).map(|w| {
        let (a, b) = (w[0], w[1]);
        a.p + (level - a.p_hat) / (b.p_hat - a.p_hat) * (b.p - a.p)
    })
}
