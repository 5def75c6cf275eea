use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;

/// Largest tableau (cells) the simplex will build.
pub const DEFAULT_LP_BUDGET: usize = 4_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct FractionalMatching {
    pub feasible: bool,
    /// Edge weights of a perfect fractional matching (edges with weight 0
    /// omitted), when feasible.
    #[serde(serialize_with = "ser_weights")]
    pub weights: Option<Vec<(Vec<usize>, BigRational)>>,
    /// When infeasible: `z` indexed by vertices `1..=n` followed by the
    /// total-weight row, with `z^T A >= 0` on every edge column and slack
    /// column and `z^T b < 0`.
    #[serde(serialize_with = "ser_certificate")]
    pub certificate: Option<Vec<BigRational>>,
}

fn ser_weights<S: serde::Serializer>(
    w: &Option<Vec<(Vec<usize>, BigRational)>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let as_text: Option<Vec<(Vec<usize>, String)>> =
        w.as_ref().map(|ws| ws.iter().map(|(e, x)| (e.clone(), x.to_string())).collect());
    serde::Serialize::serialize(&as_text, s)
}

fn ser_certificate<S: serde::Serializer>(c: &Option<Vec<BigRational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let as_text: Option<Vec<String>> = c.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect());
    serde::Serialize::serialize(&as_text, s)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Decides whether `G` has a perfect fractional matching: weights `ω >= 0`
/// on the edges with every vertex sum at most 1 and total `n/k`.
///
/// Regular graphs get the uniform weighting `1/Δ`. Otherwise an exact
/// phase-one simplex with Bland's rule decides feasibility; infeasible
/// instances come with a Farkas certificate.
pub fn has_perfect_fractional_matching(g: &Hypergraph) -> Result<FractionalMatching> {
    has_perfect_fractional_matching_with(g, DEFAULT_LP_BUDGET)
}

pub fn has_perfect_fractional_matching_with(g: &Hypergraph, budget: usize) -> Result<FractionalMatching> {
    let n = g.n();
    let deg = g.degrees();
    if n > 0 && deg[1] > 0 && deg[1..].iter().all(|&d| d == deg[1]) {
        let w = BigRational::new(BigInt::one(), BigInt::from(deg[1]));
        let weights = g.edges().map(|e| (e.clone(), w.clone())).collect();
        return Ok(FractionalMatching { feasible: true, weights: Some(weights), certificate: None });
    }
    let edges: Vec<&Vec<usize>> = g.edges().collect();
    let m = n + 1;
    let e = edges.len();
    // Columns: edges, vertex slacks, artificials, then the right-hand side.
    let cols = e + n + m;
    if (m + 1) * (cols + 1) > budget {
        return Err(Error::Budget(format!("fractional matching LP needs {} cells", (m + 1) * (cols + 1))));
    }
    let mut t = vec![vec![BigRational::zero(); cols + 1]; m + 1];
    for (j, edge) in edges.iter().enumerate() {
        for &v in edge.iter() {
            t[v - 1][j] = int(1);
        }
        t[n][j] = int(1);
    }
    for v in 0..n {
        t[v][e + v] = int(1);
        t[v][cols] = int(1);
    }
    t[n][cols] = BigRational::new(BigInt::from(n), BigInt::from(g.k()));
    for i in 0..m {
        t[i][e + n + i] = int(1);
    }
    // Objective row: reduced costs of min sum(artificials), and -w.
    for j in 0..cols + 1 {
        if (e + n..e + n + m).contains(&j) {
            continue;
        }
        let mut s = BigRational::zero();
        for row in t.iter().take(m) {
            s -= &row[j];
        }
        t[m][j] = s;
    }
    let mut basis: Vec<usize> = (e + n..e + n + m).collect();

    loop {
        let Some(enter) = (0..cols).find(|&j| t[m][j].is_negative()) else { break };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][cols] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][cols] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let Some(r) = leave else {
            return Err(Error::Internal("phase-one LP reported unbounded".into()));
        };
        pivot(&mut t, r, enter);
        basis[r] = enter;
    }

    let infeasibility = -t[m][cols].clone();
    if infeasibility.is_positive() {
        // y_i = 1 - reduced cost of artificial i; z = -y.
        let z: Vec<BigRational> = (0..m).map(|i| &t[m][e + n + i] - int(1)).collect();
        return Ok(FractionalMatching { feasible: false, weights: None, certificate: Some(z) });
    }
    let mut x = vec![BigRational::zero(); e];
    for (i, &b) in basis.iter().enumerate() {
        if b < e {
            x[b] = t[i][cols].clone();
        }
    }
    let weights = edges
        .iter()
        .zip(x)
        .filter(|(_, w)| !w.is_zero())
        .map(|(edge, w)| ((*edge).clone(), w))
        .collect();
    Ok(FractionalMatching { feasible: true, weights: Some(weights), certificate: None })
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, y) in row.iter_mut().zip(&pivot_row) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

/// Exact check of a claimed perfect fractional matching.
pub fn verify_fractional_matching(g: &Hypergraph, weights: &[(Vec<usize>, BigRational)]) -> bool {
    let mut load = vec![BigRational::zero(); g.n() + 1];
    let mut total = BigRational::zero();
    for (e, w) in weights {
        if w.is_negative() || !g.contains(e) {
            return false;
        }
        for &v in e {
            load[v] += w;
        }
        total += w;
    }
    total == BigRational::new(BigInt::from(g.n()), BigInt::from(g.k())) && load[1..].iter().all(|l| *l <= int(1))
}

/// Exact check of an infeasibility certificate `z`: every edge column and
/// every slack column has `z^T a >= 0`, and `z^T b < 0`.
pub fn verify_farkas(g: &Hypergraph, z: &[BigRational]) -> bool {
    let n = g.n();
    if z.len() != n + 1 {
        return false;
    }
    let edges_ok = g.edges().all(|e| {
        let s: BigRational = e.iter().map(|&v| z[v - 1].clone()).sum::<BigRational>() + &z[n];
        !s.is_negative()
    });
    let slacks_ok = z[..n].iter().all(|x| !x.is_negative());
    let rhs: BigRational =
        z[..n].iter().cloned().sum::<BigRational>() + &z[n] * BigRational::new(BigInt::from(n), BigInt::from(g.k()));
    edges_ok && slacks_ok && rhs.is_negative()
}
