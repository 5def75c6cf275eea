//! `chainforge`: command-line front end for the chainforge library.
//!
//! Exit codes: 0 when the property holds or the run succeeded, 1 when it
//! fails, 2 on usage, IO or parse errors, 3 when a construction is
//! infeasible or a search budget ran out.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chainforge::constructor::{replay_construction, ConstructOptions, Constructor, ConstructionRecord};
use chainforge::experiments::{
    run_inheritance_experiment, run_threshold_sweep_threads, spread_rows, wilson_interval, write_csv,
    write_spread_csv_to, SweepConfig,
};
use chainforge::hamilton::{
    framework_report, property_graph, property_graph_min_degree, uniform_as_digraph, Predicate, PropertyMode,
    DEFAULT_PROPERTY_BUDGET, DEFAULT_SEARCH_BUDGET,
};
use chainforge::hypercore::{
    check_degree_sequence, is_uniformly_dense, parse, Digraph, DensityMode, GraphFile, Hypergraph,
    DEFAULT_DENSITY_BUDGET,
};
use chainforge::linkchain::{check_balanced, parse_link, BuiltinLink, Link, DEFAULT_MAX_EDGES};
use chainforge::randomness::{
    estimate_spread, HamiltonCycleSampler, MatchingSampler, Sampler, SeededStream, TestSets,
};
use chainforge::rational::{parse_rational, to_f64};
use chainforge::util::binomial;
use chainforge::{Error, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "chainforge", version, about = "Robust hypergraph Hamiltonicity experiments")]
struct Cli {
    /// Report format: human-readable text or one JSON object per line.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Upper bound on worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a degree, density, balancedness or framework condition.
    Check(CheckArgs),
    /// Minimum q-degree of a property graph.
    Propgraph(PropgraphArgs),
    /// Build a closed Hamilton chain, or replay a stored construction.
    Construct(ConstructArgs),
    /// Threshold sweep over a grid of sparsification probabilities.
    Sweep(SweepArgs),
    /// Empirical spread of a sampler.
    Spread(SpreadArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("condition").required(true))]
struct CheckArgs {
    /// Graph file; not needed for --balance.
    file: Option<PathBuf>,
    /// Minimum d-degree against --min-ratio times binom(n-d, k-d).
    #[arg(long, group = "condition", value_name = "D")]
    deg: Option<usize>,
    #[arg(long, default_value = "1/2", requires = "deg")]
    min_ratio: String,
    /// Balancedness of a link: LINK N D LAMBDA.
    #[arg(long, group = "condition", num_args = 4, value_names = ["LINK", "N", "D", "LAMBDA"])]
    balance: Option<Vec<String>>,
    /// Uniform density: EPS D.
    #[arg(long, group = "condition", num_args = 2, value_names = ["EPS", "D"])]
    uniform_dense: Option<Vec<String>>,
    /// Tight connectivity, perfect fractional matching and aperiodicity.
    #[arg(long, group = "condition")]
    framework: bool,
    /// Degree-sequence condition for powers of Hamilton cycles: T MU.
    #[arg(long, group = "condition", num_args = 2, value_names = ["T", "MU"])]
    degseq: Option<Vec<String>>,
}

#[derive(Args)]
struct PropgraphArgs {
    file: PathBuf,
    /// perfect_matching, hamilton_connected:<link>, strongly_connected:<ell>
    /// or min_degree:<d>:<ratio>.
    #[arg(long)]
    pred: String,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    q: usize,
    /// Estimate from N random s-supersets of one random q-set.
    #[arg(long, value_name = "N")]
    sample: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct ConstructArgs {
    file: PathBuf,
    /// Builtin link (ell_cycle:K:ELL, matching:K, power:K:T) or a link file.
    /// Replays default to the link stored in the record.
    #[arg(long, required_unless_present = "replay")]
    link: Option<String>,
    #[arg(long, required_unless_present = "replay")]
    s1: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Stored construction to re-validate against the host.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
    /// Where to write the construction record (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    retries: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed of the config file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SpreadArgs {
    /// hamilton_cycle:<n>, or matching:<graph file> for uniform perfect
    /// matchings of a host.
    #[arg(long)]
    sampler: String,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    out: PathBuf,
    /// Largest test-set size.
    #[arg(long, default_value_t = 2)]
    max_size: usize,
    #[arg(long)]
    seed: Option<u64>,
}

/// A successful run: its report and whether the property held.
struct Report {
    holds: bool,
    text: String,
    json: Value,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) | Error::Budget(_) => 3,
        _ => 2,
    }
}

fn read_graph(path: &Path) -> chainforge::Result<GraphFile> {
    parse(&std::fs::read_to_string(path)?)
}

fn uniform(g: &GraphFile) -> chainforge::Result<&Hypergraph> {
    match g {
        GraphFile::Uniform(h) => Ok(h),
        GraphFile::Directed(_) => Err(Error::Parameter("this check needs a uniform hypergraph".into())),
    }
}

fn read_link(spec: &str) -> chainforge::Result<Link> {
    if Path::new(spec).is_file() {
        parse_link(&std::fs::read_to_string(spec)?)
    } else {
        spec.parse::<BuiltinLink>()?.link()
    }
}

fn rational(text: &str) -> chainforge::Result<Rational> {
    parse_rational(text)
}

fn number<T: std::str::FromStr>(text: &str, what: &str) -> chainforge::Result<T> {
    text.parse().map_err(|_| Error::Parameter(format!("bad {what} {text:?}")))
}

/// `--seed`, then `CHAINFORGE_SEED`, then a fresh seed reported on stderr.
fn resolve_seed(flag: Option<u64>) -> chainforge::Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var("CHAINFORGE_SEED") {
        return number(v.trim(), "CHAINFORGE_SEED");
    }
    let seed: u64 = rand::random();
    eprintln!("seed: {seed}");
    Ok(seed)
}

fn as_digraph(g: &GraphFile, link: &Link) -> chainforge::Result<Digraph> {
    match g {
        GraphFile::Directed(d) => Ok(d.clone()),
        GraphFile::Uniform(h) => uniform_as_digraph(h, link),
    }
}

fn cmd_check(a: &CheckArgs) -> chainforge::Result<Report> {
    if let Some(v) = &a.balance {
        let link = read_link(&v[0])?;
        let report = check_balanced(&link, number(&v[1], "n")?, rational(&v[2])?, rational(&v[3])?, DEFAULT_MAX_EDGES)?;
        let text = match &report.witness {
            None => format!("balanced: holds ({} subsets checked)", report.subsets_checked),
            Some(w) => format!("balanced: fails, {:?} on {:?} with edges {:?}", w.violation, w.vertices, w.edges),
        };
        return Ok(Report { holds: report.holds, text, json: serde_json::to_value(&report)? });
    }
    let path = a.file.as_ref().ok_or_else(|| Error::Parameter("a graph file is required".into()))?;
    let graph = read_graph(path)?;
    if let Some(d) = a.deg {
        let g = uniform(&graph)?;
        let ratio = rational(&a.min_ratio)?;
        let delta = g.degree_min(d)?;
        let full = binomial((g.n() - d) as u64, (g.k() - d) as u64).unwrap_or(u128::MAX);
        let actual = chainforge::rational::ratio_u128(delta as u128, full);
        let holds = actual >= ratio;
        let text = format!(
            "min {d}-degree {delta} of {full} (ratio {:.4}, needs {:.4}): {}",
            to_f64(&actual),
            to_f64(&ratio),
            verdict(holds)
        );
        let json = json!({"d": d, "min_degree": delta, "full": full.to_string(), "ratio": to_f64(&actual),
            "min_ratio": to_f64(&ratio), "holds": holds});
        return Ok(Report { holds, text, json });
    }
    if let Some(v) = &a.uniform_dense {
        let g = uniform(&graph)?;
        let report = is_uniformly_dense(
            g,
            rational(&v[0])?,
            rational(&v[1])?,
            DensityMode::Exhaustive { budget: DEFAULT_DENSITY_BUDGET },
        )?;
        let mut text = format!("uniformly dense: {} ({} tuples tested)", verdict(report.holds), report.tuples_tested);
        if let Some(w) = &report.witness {
            text.push_str(&format!("; worst tuple {w:?}"));
        }
        return Ok(Report { holds: report.holds, text, json: serde_json::to_value(&report)? });
    }
    if a.framework {
        let g = uniform(&graph)?;
        let r = framework_report(g)?;
        let holds = r.tight_component && r.perfect_fractional_matching && r.aperiodic;
        let text = format!(
            "tight components: {}\nperfect fractional matching: {}\naperiodic: {}\nframework: {}",
            r.tight_component_count,
            r.perfect_fractional_matching,
            r.aperiodic,
            verdict(holds)
        );
        let mut json = serde_json::to_value(&r)?;
        json["holds"] = json!(holds);
        return Ok(Report { holds, text, json });
    }
    if let Some(v) = &a.degseq {
        let g = uniform(&graph)?;
        let holds = check_degree_sequence(g, number(&v[0], "t")?, rational(&v[1])?)?;
        let text = format!("degree sequence: {}", verdict(holds));
        return Ok(Report { holds, text, json: json!({"t": v[0], "mu": v[1], "holds": holds}) });
    }
    Err(Error::Parameter("no condition given".into()))
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn cmd_propgraph(a: &PropgraphArgs) -> chainforge::Result<Report> {
    let graph = read_graph(&a.file)?;
    let pred = Predicate::parse(&a.pred)?;
    let bound = 1.0 - 1.0 / (a.s * a.s) as f64;
    if let Some(trials) = a.sample {
        let seed = resolve_seed(a.seed)?;
        let mut stream = SeededStream::new(seed, 0);
        let r = run_inheritance_experiment(&graph, &pred, a.s, a.q, trials, &mut stream, a.budget)?;
        let (lo, hi) = wilson_interval(r.hits, r.trials);
        let holds = r.fraction >= bound;
        let text = format!(
            "{}: fraction of sampled {}-supersets of {:?} in P: {:.4} (95% CI {:.4} to {:.4}); 1 - s^-2 = {:.4}",
            r.predicate, a.s, r.q_set, r.fraction, lo, hi, bound
        );
        let mut json = serde_json::to_value(&r)?;
        json["ci_low"] = json!(lo);
        json["ci_high"] = json!(hi);
        json["seed"] = json!(seed);
        return Ok(Report { holds, text, json });
    }
    let p = property_graph(&graph, &pred, a.s, PropertyMode::Exhaustive { budget: DEFAULT_PROPERTY_BUDGET }, a.budget)?;
    let (delta, ratio) = property_graph_min_degree(&p, a.q)?;
    let r = to_f64(&ratio);
    let holds = r >= bound;
    let text = format!(
        "{}: {} edges; min {}-degree {delta}, ratio to binom(n-q, s-q) {r:.4}; 1 - s^-2 = {bound:.4}: {}",
        p.predicate,
        p.edge_count.unwrap_or(0),
        a.q,
        verdict(holds)
    );
    let json = json!({"predicate": p.predicate, "n": p.n, "s": a.s, "q": a.q, "edges": p.edge_count,
        "min_degree": delta, "ratio": r, "bound_square": bound, "holds": holds});
    Ok(Report { holds, text, json })
}

fn cmd_construct(a: &ConstructArgs) -> chainforge::Result<Report> {
    let graph = read_graph(&a.file)?;
    if let Some(path) = &a.replay {
        let record = ConstructionRecord::from_json(&std::fs::read_to_string(path)?)?;
        let link = match &a.link {
            Some(spec) => read_link(spec)?,
            None => parse_link(&record.link)?,
        };
        let host = as_digraph(&graph, &link)?;
        return match replay_construction(&host, &record) {
            Ok(chain) => Ok(Report {
                holds: true,
                text: format!("replay valid: closed chain with {} edges", chain.edges.edge_count()),
                json: json!({"replay": "valid", "ordering": chain.ordering}),
            }),
            Err(Error::Precondition(why)) => Ok(Report {
                holds: false,
                text: format!("replay invalid: {why}"),
                json: json!({"replay": "invalid", "reason": why}),
            }),
            Err(e) => Err(e),
        };
    }
    let link = read_link(a.link.as_deref().unwrap_or_default())?;
    let host = as_digraph(&graph, &link)?;
    let s1 = a.s1.ok_or_else(|| Error::Parameter("--s1 is required".into()))?;
    let seed = resolve_seed(a.seed)?;
    let opts = ConstructOptions { retries: a.retries, ..ConstructOptions::default() };
    let mut constructor = Constructor::new(&host, &link, s1, opts)?;
    let built = constructor.construct(&mut SeededStream::new(seed, 0))?;
    let record = built.record.to_json()?;
    match &a.out {
        Some(path) => std::fs::write(path, &record)?,
        None => println!("{record}"),
    }
    let text = format!(
        "closed chain on {} vertices, {} edges, seed {seed}{}",
        host.n(),
        built.chain.edges.edge_count(),
        if constructor.desk_scale() { " (desk scale)" } else { "" }
    );
    let json = json!({"n": host.n(), "edges": built.chain.edges.edge_count(), "seed": seed,
        "desk_scale": constructor.desk_scale(), "out": a.out});
    Ok(Report { holds: true, text, json })
}

fn cmd_sweep(a: &SweepArgs, threads: usize) -> chainforge::Result<Report> {
    let mut cfg = SweepConfig::parse(&std::fs::read_to_string(&a.config)?)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let rows = run_threshold_sweep_threads(&cfg, threads)?;
    write_csv(&rows, &a.out)?;
    let text = format!("{} rows written to {}", rows.len(), a.out.display());
    Ok(Report { holds: true, text, json: json!({"rows": rows.len(), "out": a.out, "seed": cfg.seed}) })
}

fn spread_sampler(spec: &str) -> chainforge::Result<Box<dyn Sampler>> {
    match spec.split_once(':') {
        Some(("hamilton_cycle", n)) => Ok(Box::new(HamiltonCycleSampler::new(number(n, "n")?)?)),
        Some(("matching", path)) => {
            let g = read_graph(Path::new(path))?;
            Ok(Box::new(MatchingSampler::new(uniform(&g)?, None)?))
        }
        _ => Err(Error::Parameter(format!(
            "bad sampler {spec:?}; expected hamilton_cycle:<n> or matching:<graph file>"
        ))),
    }
}

fn cmd_spread(a: &SpreadArgs) -> chainforge::Result<Report> {
    let mut sampler = spread_sampler(&a.sampler)?;
    let seed = resolve_seed(a.seed)?;
    let report =
        estimate_spread(sampler.as_mut(), &TestSets::AllUpToSize(a.max_size), None, a.trials, &SeededStream::new(seed, 0))?;
    let rows = spread_rows(&report, seed);
    write_spread_csv_to(std::fs::File::create(&a.out)?, &rows)?;
    let text = format!("q_hat {:.6} over {} trials; {} rows written to {}", report.q_hat, a.trials, rows.len(), a.out.display());
    Ok(Report { holds: true, text, json: json!({"q_hat": report.q_hat, "trials": a.trials, "seed": seed, "out": a.out}) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Propgraph(a) => cmd_propgraph(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Sweep(a) => cmd_sweep(a, cli.threads),
        Command::Spread(a) => cmd_spread(a),
    };
    match result {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let line = match cli.format {
                Format::Text => report.text,
                Format::Json => report.json.to_string(),
            };
            let _ = writeln!(out, "{line}");
            ExitCode::from(if report.holds { 0 } else { 1 })
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({"error": e.to_string(), "code": exit_code(&e)})),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
