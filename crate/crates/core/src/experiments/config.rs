use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamilton::DEFAULT_SEARCH_BUDGET;
use crate::linkchain::BuiltinLink;

/// Host families for sweeps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum HostSpec {
    Complete { k: usize },
    /// The parity construction plus random extra edges with probability
    /// `mu`.
    DiracExtremal { k: usize, mu: f64 },
    /// `G^(k)(n, density)`.
    UniformlyDenseRandom { k: usize, density: f64 },
    FromFile { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub host: HostSpec,
    /// One block of rows per `n`; ignored for file hosts.
    pub ns: Vec<usize>,
    pub guest: BuiltinLink,
    pub p_grid: Vec<f64>,
    pub trials: usize,
    pub budget: u64,
    pub seed: u64,
    /// Record wall-clock time per row. Off by default so that reruns give
    /// byte-identical CSVs.
    pub timing: bool,
}

const KEYS: [&str; 12] =
    ["host", "n", "k", "host_mu", "host_density", "host_file", "guest", "p_grid", "trials", "budget", "seed", "timing"];

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::parse(line, format!("bad value {value:?} for {key}")))
}

fn parse_list<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num(line, key, s))
        .collect()
}

impl SweepConfig {
    /// Parses the flat `key = value` format. `#` starts a comment; unknown
    /// and repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values: Vec<(&str, String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim();
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(Error::parse(i + 1, format!("unknown key {key:?}")));
            };
            if values.iter().any(|(k, _, _)| *k == known) {
                return Err(Error::parse(i + 1, format!("key {key:?} given twice")));
            }
            values.push((known, value.trim().to_string(), i + 1));
        }
        let get = |key: &str| values.iter().find(|(k, _, _)| *k == key).map(|(_, v, l)| (v.as_str(), *l));
        let need = |key: &str| get(key).ok_or_else(|| Error::param(format!("config is missing {key:?}")));

        let k = match get("k") {
            Some((v, l)) => parse_num(l, "k", v)?,
            None => 2,
        };
        let (host_name, host_line) = need("host")?;
        let host = match host_name {
            "complete" => HostSpec::Complete { k },
            "dirac_extremal" => HostSpec::DiracExtremal {
                k,
                mu: get("host_mu").map(|(v, l)| parse_num(l, "host_mu", v)).transpose()?.unwrap_or(0.0),
            },
            "uniformly_dense_random" => {
                let (v, l) = need("host_density")?;
                HostSpec::UniformlyDenseRandom { k, density: parse_num(l, "host_density", v)? }
            }
            "from_file" => HostSpec::FromFile { path: PathBuf::from(need("host_file")?.0) },
            other => {
                return Err(Error::parse(
                    host_line,
                    format!("unknown host {other:?}; expected complete, dirac_extremal, uniformly_dense_random or from_file"),
                ))
            }
        };
        let ns = match (&host, get("n")) {
            (_, Some((v, l))) => parse_list(l, "n", v)?,
            (HostSpec::FromFile { .. }, None) => Vec::new(),
            (_, None) => return Err(Error::param("config is missing \"n\"")),
        };
        let (guest, _) = need("guest")?;
        let guest: BuiltinLink = guest.parse()?;
        let (grid, grid_line) = need("p_grid")?;
        let p_grid: Vec<f64> = parse_list(grid_line, "p_grid", grid)?;
        let trials = match get("trials") {
            Some((v, l)) => parse_num(l, "trials", v)?,
            None => 100,
        };
        let budget = match get("budget") {
            Some((v, l)) => parse_num(l, "budget", v)?,
            None => DEFAULT_SEARCH_BUDGET,
        };
        let seed = match get("seed") {
            Some((v, l)) => parse_num(l, "seed", v)?,
            None => 0,
        };
        let timing = match get("timing") {
            Some((v, l)) => parse_num(l, "timing", v)?,
            None => false,
        };
        let cfg = SweepConfig { host, ns, guest, p_grid, trials, budget, seed, timing };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if self.p_grid.is_empty() {
            return Err(Error::param("p_grid is empty"));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::param(format!("p = {p} lies outside [0, 1]")));
        }
        let prob = match self.host {
            HostSpec::DiracExtremal { mu, .. } => Some(mu),
            HostSpec::UniformlyDenseRandom { density, .. } => Some(density),
            _ => None,
        };
        if let Some(x) = prob.filter(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::param(format!("host probability {x} lies outside [0, 1]")));
        }
        if !matches!(self.host, HostSpec::FromFile { .. }) && self.ns.is_empty() {
            return Err(Error::param("no n given"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# Hamilton cycles in sparsified complete graphs
host = complete
n = 12, 16
k = 2
guest = ell_cycle:2:1
p_grid = 0.0, 0.5, 1.0
trials = 20
seed = 7
";

    #[test]
    fn parses_the_sample() {
        let c = SweepConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.host, HostSpec::Complete { k: 2 });
        assert_eq!(c.ns, vec![12, 16]);
        assert_eq!(c.p_grid, vec![0.0, 0.5, 1.0]);
        assert_eq!(c.guest, BuiltinLink::EllCycle { k: 2, ell: 1 });
        assert!(!c.timing);
    }

    #[test]
    fn rejects_unknown_and_bad_values() {
        assert!(SweepConfig::parse(&format!("{SAMPLE}colour = red\n")).is_err());
        assert!(SweepConfig::parse(&SAMPLE.replace("0.0, 0.5", "-0.1, 0.5")).is_err());
        assert!(SweepConfig::parse(&SAMPLE.replace("trials = 20", "trials = 0")).is_err());
        assert!(SweepConfig::parse(&format!("{SAMPLE}seed = 3\n")).is_err());
        let err = SweepConfig::parse("host = complete\nbogus line\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
