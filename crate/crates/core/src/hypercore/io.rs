use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Digraph, Hypergraph};
use crate::error::{Error, Result};

/// A parsed graph file: either a uniform hypergraph (`U k n`) or a directed
/// hypergraph (`D n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFile {
    Uniform(Hypergraph),
    Directed(Digraph),
}

impl GraphFile {
    pub fn n(&self) -> usize {
        match self {
            GraphFile::Uniform(g) => g.n(),
            GraphFile::Directed(d) => d.n(),
        }
    }
}

/// Lines with their 1-based numbers, comments stripped, blank lines dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_usize(line: usize, token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, found {token:?}")))
}

fn parse_vertices(line: usize, tokens: &str, n: usize) -> Result<Vec<usize>> {
    let vs = tokens
        .split_whitespace()
        .map(|t| parse_usize(line, t))
        .collect::<Result<Vec<_>>>()?;
    if let Some(&v) = vs.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::parse(line, format!("vertex {v} out of range 1..={n}")));
    }
    let distinct: BTreeSet<_> = vs.iter().collect();
    if distinct.len() != vs.len() {
        return Err(Error::parse(line, "edge repeats a vertex"));
    }
    Ok(vs)
}

pub fn parse(text: &str) -> Result<GraphFile> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    match fields.as_slice() {
        ["U", k, n] => {
            let k = parse_usize(hline, k)?;
            let n = parse_usize(hline, n)?;
            if k < 2 {
                return Err(Error::parse(hline, "uniformity must be at least 2"));
            }
            let mut edges = BTreeSet::new();
            for (no, line) in lines {
                let mut e = parse_vertices(no, line, n)?;
                if e.len() != k {
                    return Err(Error::parse(no, format!("edge has {} vertices, expected {k}", e.len())));
                }
                e.sort_unstable();
                if !edges.insert(e) {
                    return Err(Error::parse(no, "duplicate edge"));
                }
            }
            Ok(GraphFile::Uniform(Hypergraph::new(n, k, edges)?))
        }
        ["D", n] => {
            let n = parse_usize(hline, n)?;
            let mut tuples = BTreeSet::new();
            for (no, line) in lines {
                let (len, rest) = line
                    .split_once(':')
                    .ok_or_else(|| Error::parse(no, "expected `<len>: v1 ... vlen`"))?;
                let len = parse_usize(no, len.trim())?;
                let t = parse_vertices(no, rest, n)?;
                if t.len() != len || len == 0 {
                    return Err(Error::parse(no, format!("declared length {len} but found {} vertices", t.len())));
                }
                if !tuples.insert(t) {
                    return Err(Error::parse(no, "duplicate tuple"));
                }
            }
            Ok(GraphFile::Directed(Digraph::new(n, tuples)?))
        }
        _ => Err(Error::parse(hline, format!("unrecognised header {header:?}"))),
    }
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    match parse(text)? {
        GraphFile::Uniform(g) => Ok(g),
        GraphFile::Directed(_) => Err(Error::parse(1, "expected a uniform hypergraph (`U k n`)")),
    }
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    match parse(text)? {
        GraphFile::Directed(d) => Ok(d),
        GraphFile::Uniform(_) => Err(Error::parse(1, "expected a digraph (`D n`)")),
    }
}

pub fn serialize(graph: &GraphFile) -> String {
    let mut out = String::new();
    match graph {
        GraphFile::Uniform(g) => {
            let _ = writeln!(out, "U {} {}", g.k(), g.n());
            for e in g.edges() {
                let _ = writeln!(out, "{}", join(e));
            }
        }
        GraphFile::Directed(d) => {
            let _ = writeln!(out, "D {}", d.n());
            for t in d.edges() {
                let _ = writeln!(out, "{}: {}", t.len(), join(t));
            }
        }
    }
    out
}

pub(crate) fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

impl From<Hypergraph> for GraphFile {
    fn from(g: Hypergraph) -> Self {
        GraphFile::Uniform(g)
    }
}

impl From<Digraph> for GraphFile {
    fn from(d: Digraph) -> Self {
        GraphFile::Directed(d)
    }
}
