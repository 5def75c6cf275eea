//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when
//! any criterion fails. Runs without the libtest harness so that the lines
//! are always printed.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use chainforge::constructor::{ConstructOptions, Constructor};
use chainforge::experiments::{run_constructor_stress, run_threshold_sweep, HostSpec, StressConfig, SweepConfig, SweepRow};
use chainforge::hamilton::{find_hamilton_chain, framework_report, SearchOutcome};
use chainforge::hypercore::{Digraph, Hypergraph};
use chainforge::linkchain::{
    check_balanced, check_balanced_with, validate_closed_chain, BalanceMethod, BuiltinLink, Link, DEFAULT_MAX_EDGES,
};
use chainforge::randomness::{
    estimate_spread, verify_spread_matching_bound, HamiltonCycleSampler, PerfectMatchingTable, Sampler, SeededStream,
    TestSets, DEFAULT_MATCHING_BUDGET,
};
use chainforge::Rational;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn closed_sizes(link: &Link, max_n: usize) -> Vec<usize> {
    (1..=max_n).filter(|n| n % link.r() == 0 && *n >= 2 * link.order()).collect()
}

fn balancedness_constants() -> Check {
    let mut notes = Vec::new();
    let mut cases: Vec<(BuiltinLink, Rational, Rational)> = [(3, 1), (3, 2), (4, 2)]
        .into_iter()
        .map(|(k, ell)| {
            let k_minus: i64 = k as i64 - ell as i64;
            (BuiltinLink::EllCycle { k, ell }, Rational::new(1, k_minus), Rational::new(ell as i64, k_minus))
        })
        .collect();
    for k in [2i64, 3] {
        cases.push((BuiltinLink::Matching { k: k as usize }, Rational::new(1, k - 1), Rational::new(1, k - 1)));
    }
    for (b, d, lambda) in cases {
        let link = b.link().unwrap();
        let start = Instant::now();
        for n in closed_sizes(&link, 16) {
            let r = check_balanced_with(&link, n, d, lambda, 40, BalanceMethod::EdgeSubsets).map_err(|e| e.to_string())?;
            if !r.holds {
                return Err(format!("{b} at n={n} violates ({d}, {lambda}): {:?}", r.witness));
            }
        }
        let took = start.elapsed();
        if took > Duration::from_secs(60) {
            return Err(format!("{b} took {took:?}"));
        }
        notes.push(format!("{b} ({d},{lambda}) {:.1}s", took.as_secs_f64()));
    }
    Ok(notes.join("; "))
}

fn power_constants() -> Check {
    let mut notes = Vec::new();
    for (k, t) in [(2usize, 3usize), (3, 4)] {
        let link = BuiltinLink::Power { k, t }.link().unwrap();
        let d = (1..k).fold(1i64, |acc, i| acc * (t - i) as i64 / i as i64);
        let d = Rational::from_integer(d);
        let lambda = d + Rational::from_integer(1);
        for n in closed_sizes(&link, 12) {
            let r = check_balanced(&link, n, d, lambda, DEFAULT_MAX_EDGES).map_err(|e| e.to_string())?;
            if !r.holds {
                return Err(format!("power:{k}:{t} at n={n} violates ({d}, {lambda}): {:?}", r.witness));
            }
        }
        notes.push(format!("power:{k}:{t} ({d},{lambda}) for n in {:?}", closed_sizes(&link, 12)));
    }
    Ok(notes.join("; "))
}

fn hamilton_cycle_spread() -> Check {
    let trials = 100_000;
    let mut notes = Vec::new();
    for n in [6usize, 8, 10] {
        let mut sampler = HamiltonCycleSampler::new(n).unwrap();
        let stream = SeededStream::new(600 + n as u64, 0);
        let r = estimate_spread(&mut sampler, &TestSets::AllUpToSize(3), None, trials, &stream).map_err(|e| e.to_string())?;
        for j in 1..=3 {
            let bound = (2.0 * std::f64::consts::E / n as f64).powi(j as i32);
            let p = r.max_frequency(j);
            let sigma = (bound.min(1.0) * (1.0 - bound.min(1.0)) / trials as f64).sqrt();
            if p > bound + 3.0 * sigma {
                return Err(format!("n={n} |I|={j}: max frequency {p:.5} exceeds (2e/n)^j = {bound:.5}"));
            }
            notes.push(format!("n={n},|I|={j}: {p:.4}<={bound:.4}"));
        }
    }
    Ok(notes.join(" "))
}

/// All Hamilton cycles of `K_n` as edge sets, by enumerating orderings
/// that start at vertex 1 and have `σ(2) < σ(n)`.
fn all_cycles(n: usize) -> Vec<Vec<Vec<usize>>> {
    (2..=n)
        .permutations(n - 1)
        .filter(|p| p[0] < p[n - 2])
        .map(|p| {
            let order: Vec<usize> = std::iter::once(1).chain(p).collect();
            (0..n).map(|i| {
                let (a, b) = (order[i], order[(i + 1) % n]);
                vec![a.min(b), a.max(b)]
            }).collect()
        })
        .collect()
}

fn edge_in_cycle_probability() -> Check {
    for n in 4..=7 {
        let cycles = all_cycles(n);
        let expected_count = (1..n).product::<usize>() / 2;
        if cycles.len() != expected_count {
            return Err(format!("enumeration found {} cycles of K_{n}, expected (n-1)!/2", cycles.len()));
        }
        let with = cycles.iter().filter(|c| c.contains(&vec![1, 2])).count();
        // with / total = 2 / (n - 1)
        if with * (n - 1) != 2 * cycles.len() {
            return Err(format!("K_{n}: {with} of {} cycles use 12", cycles.len()));
        }
    }
    let (n, trials) = (8usize, 100_000u64);
    let mut sampler = HamiltonCycleSampler::new(n).unwrap();
    let base = SeededStream::new(8, 8);
    let mut hits = 0u64;
    for t in 0..trials {
        let c = sampler.sample(&mut base.substream(t)).map_err(|e| e.to_string())?;
        if c.contains(&vec![1, 2]) {
            hits += 1;
        }
    }
    let p = 2.0 / (n as f64 - 1.0);
    let p_hat = hits as f64 / trials as f64;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    ensure(
        (p_hat - p).abs() <= 3.0 * sigma,
        format!("n<=7 enumeration confirms 2/(n-1); n=8: p_hat {p_hat:.5} vs 2/7 = {p:.5} (3σ = {:.5})", 3.0 * sigma),
    )
}

fn matching_uniformity() -> Check {
    let k33 = Hypergraph::new(6, 2, (1..=3).flat_map(|a| (4..=6).map(move |b| vec![a, b]))).unwrap();
    let k6 = Hypergraph::complete(6, 2).unwrap();
    let draws = 100_000u64;
    let mut notes = Vec::new();
    for (name, h, expected) in [("K33", k33, 6usize), ("K6", k6, 15)] {
        let table = PerfectMatchingTable::new(&h, None, DEFAULT_MATCHING_BUDGET).map_err(|e| e.to_string())?;
        let all = table.enumerate();
        if all.len() != expected || table.count() != expected as u128 {
            return Err(format!("{name}: {} matchings, expected {expected}", all.len()));
        }
        let mut counts: HashMap<Vec<Vec<usize>>, u64> = all.iter().map(|m| (m.clone(), 0)).collect();
        let base = SeededStream::new(24, expected as u64);
        for t in 0..draws {
            let m = table.sample(&mut base.substream(t)).unwrap();
            *counts.get_mut(&m).ok_or("sampled a non-matching")? += 1;
        }
        let e = draws as f64 / expected as f64;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
        let critical = ChiSquared::new((expected - 1) as f64).unwrap().inverse_cdf(0.99);
        if chi2 >= critical {
            return Err(format!("{name}: chi-square {chi2:.2} >= {critical:.2}"));
        }
        notes.push(format!("{name}: chi2 {chi2:.2} < {critical:.2}"));
    }
    Ok(notes.join("; "))
}

fn spread_matching_bound() -> Check {
    let mut rng = SeededStream::new(25, 0);
    let mut notes = Vec::new();
    let mut worst = f64::INFINITY;
    let mut done = 0;
    while done < 20 {
        let s = rng.gen_range(2..=5usize);
        let n = (s * 2..=10).filter(|n| n % s == 0).collect::<Vec<_>>();
        let Some(&n) = n.get(rng.gen_range(0..n.len().max(1))) else { continue };
        // Dense host: complete minus a few random edges.
        let drop = rng.gen_range(0.0..0.3);
        let edges: Vec<Vec<usize>> = (1..=n).combinations(s).filter(|_| !rng.gen_bool(drop)).collect();
        let h = Hypergraph::new(n, s, edges).unwrap();
        if PerfectMatchingTable::new(&h, None, DEFAULT_MATCHING_BUDGET).map(|t| t.count()).unwrap_or(0) == 0 {
            continue;
        }
        let pairs: Vec<Vec<usize>> = (1..=n).combinations(2).collect();
        let size = rng.gen_range(1..=3usize);
        let chosen: Vec<Vec<usize>> = (0..size).map(|_| pairs[rng.gen_range(0..pairs.len())].clone()).collect();
        let i = Hypergraph::new(n, 2, chosen).unwrap();
        let r = verify_spread_matching_bound(&h, &i, 0.0, 20_000, &SeededStream::new(26, done as u64))
            .map_err(|e| e.to_string())?;
        if !(r.holds && r.margin > 0.0) {
            return Err(format!("instance {done} (n={n}, s={s}, I={:?}): p_hat {} vs bound {}", i.edge_set(), r.p_hat, r.bound));
        }
        worst = worst.min(r.margin);
        done += 1;
    }
    notes.push(format!("20 instances, smallest margin {worst:.4}"));
    Ok(notes.join(""))
}

fn constructor_soundness() -> Check {
    let mut notes = Vec::new();
    for (b, n, s1) in [(BuiltinLink::EllCycle { k: 2, ell: 1 }, 20usize, 4usize), (BuiltinLink::EllCycle { k: 3, ell: 1 }, 24, 5)] {
        let link = b.link().unwrap();
        let host = Digraph::complete(n, &[link.k(), link.ell()]);
        let mut c = Constructor::new(&host, &link, s1, ConstructOptions::default()).map_err(|e| e.to_string())?;
        let base = SeededStream::new(1000, n as u64);
        let runs = 1000;
        let mut ok = 0;
        for t in 0..runs {
            let built = c.construct(&mut base.substream(t)).map_err(|e| format!("{b} run {t}: {e}"))?;
            if validate_closed_chain(&link, &host, &built.chain.ordering) && built.chain.edges.is_subgraph_of(&host) {
                ok += 1;
            }
        }
        if ok != runs {
            return Err(format!("{b}: {ok}/{runs} valid"));
        }
        notes.push(format!("{b} n={n} s1={s1}: {ok}/{runs} valid"));
    }
    Ok(notes.join("; "))
}

fn constructor_correctness_proxy() -> Check {
    let link = BuiltinLink::EllCycle { k: 2, ell: 1 }.link().unwrap();
    let batch = |seed: u64| {
        run_constructor_stress(&StressConfig {
            host: Digraph::complete(12, &[2, 1]),
            link: link.clone(),
            s1: 4,
            runs: 10_000,
            seed,
            options: ConstructOptions::default(),
            battery: None,
        })
    };
    let (a, b) = (batch(1), batch(2));
    let (ka, kb) = match (a.k_hat, b.k_hat) {
        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => (x, y),
        _ => return Err(format!("K_hat missing: {:?} / {:?}", a.k_hat, b.k_hat)),
    };
    let change = (ka - kb).abs() / ka.max(kb);
    ensure(
        change < 0.2 && a.successes == 10_000 && b.successes == 10_000,
        format!("K_hat {ka:.4} and {kb:.4} (relative difference {:.1}%)", 100.0 * change),
    )
}

fn is_chain(d: &Digraph, link: &Link, order: &[usize]) -> bool {
    let n = order.len();
    (0..n / link.r()).all(|w| {
        link.edges().iter().all(|e| d.contains(&e.iter().map(|&j| order[(w * link.r() + j - 1) % n]).collect::<Vec<_>>()))
    })
}

fn search_oracle_agreement() -> Check {
    let links = [
        BuiltinLink::EllCycle { k: 2, ell: 1 },
        BuiltinLink::EllCycle { k: 3, ell: 2 },
        BuiltinLink::EllCycle { k: 3, ell: 0 },
        BuiltinLink::Matching { k: 2 },
        BuiltinLink::Power { k: 2, t: 3 },
    ];
    let mut rng = SeededStream::new(200, 0);
    let mut notes = Vec::new();
    for b in links {
        let link = b.link().unwrap();
        let sizes = closed_sizes(&link, 7);
        let (mut found, mut disagreements) = (0, 0);
        for i in 0..200 {
            let n = sizes[i % sizes.len()];
            let p = rng.gen_range(0.3..0.95);
            let tuples: Vec<Vec<usize>> = Digraph::complete(n, &[link.k()]).edges().filter(|_| rng.gen_bool(p)).cloned().collect();
            let d = Digraph::new(n, tuples).unwrap();
            let exists = (1..=n).permutations(n).any(|o| is_chain(&d, &link, &o));
            let got = match find_hamilton_chain(&d, &link, None, None, true, 50_000_000).map_err(|e| e.to_string())? {
                SearchOutcome::Found(o) => is_chain(&d, &link, &o),
                SearchOutcome::NotFound => false,
                SearchOutcome::Unknown => return Err(format!("{b}: budget ran out")),
            };
            found += usize::from(got);
            disagreements += usize::from(got != exists);
        }
        if disagreements > 0 {
            return Err(format!("{b}: {disagreements} disagreements"));
        }
        notes.push(format!("{b} n in {sizes:?}: {found}/200 found"));
    }
    Ok(notes.join("; "))
}

fn sweep_sanity() -> Check {
    let start = Instant::now();
    let cfg = SweepConfig {
        host: HostSpec::Complete { k: 2 },
        ns: vec![12, 16, 20],
        guest: BuiltinLink::EllCycle { k: 2, ell: 1 },
        p_grid: (0..=10).map(|i| i as f64 / 10.0).collect(),
        trials: 100,
        budget: chainforge::hamilton::DEFAULT_SEARCH_BUDGET,
        seed: 12,
        timing: false,
    };
    let rows = run_threshold_sweep(&cfg).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let mut by_n: BTreeMap<usize, Vec<&SweepRow>> = BTreeMap::new();
    for r in &rows {
        by_n.entry(r.n).or_default().push(r);
    }
    let mut notes = Vec::new();
    for (n, rs) in &by_n {
        let first = rs.first().unwrap();
        let last = rs.last().unwrap();
        if first.p != 0.0 || first.p_hat != 0.0 || last.p != 1.0 || last.p_hat != 1.0 {
            return Err(format!("n={n}: endpoints {} and {}", first.p_hat, last.p_hat));
        }
        for w in rs.windows(2) {
            if w[1].p_hat < w[0].p_hat && w[1].wilson_high < w[0].wilson_low {
                return Err(format!("n={n}: p_hat drops from {} at p={} to {} at p={}", w[0].p_hat, w[0].p, w[1].p_hat, w[1].p));
            }
        }
        if rs.iter().any(|r| r.unknowns > 0) {
            return Err(format!("n={n}: searches ran out of budget"));
        }
        let curve: Vec<String> = rs.iter().map(|r| format!("{:.2}", r.p_hat)).collect();
        notes.push(format!("n={n}: [{}]", curve.join(" ")));
    }
    ensure(
        took < Duration::from_secs(600),
        format!("{} in {:.1}s", notes.join(" "), took.as_secs_f64()),
    )
}

fn framework_checks() -> Check {
    let c7 = framework_report(&Hypergraph::tight_cycle(7, 3).unwrap()).map_err(|e| e.to_string())?;
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let weights_ok = c7
        .matching
        .weights
        .as_ref()
        .is_some_and(|w| w.len() == 7 && w.iter().all(|(_, x)| *x == third));
    let c6 = framework_report(&Hypergraph::tight_cycle(6, 3).unwrap()).map_err(|e| e.to_string())?;
    ensure(
        c7.tight_component && c7.perfect_fractional_matching && weights_ok && c7.aperiodic && !c6.aperiodic,
        format!(
            "C7: tight {}, fractional matching {} (ω ≡ 1/3: {weights_ok}), aperiodic {} (order {:?}); C6 aperiodic {}",
            c7.tight_component, c7.perfect_fractional_matching, c7.aperiodic, c7.witness_order, c6.aperiodic
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("balancedness constants", balancedness_constants),
        ("power-link constants", power_constants),
        ("hamilton-cycle spread", hamilton_cycle_spread),
        ("edge-in-cycle probability", edge_in_cycle_probability),
        ("matching-sampler uniformity", matching_uniformity),
        ("spread-matching bound", spread_matching_bound),
        ("constructor soundness", constructor_soundness),
        ("constructor correctness proxy", constructor_correctness_proxy),
        ("search-oracle agreement", search_oracle_agreement),
        ("threshold sweep sanity", sweep_sanity),
        ("framework checks", framework_checks),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
