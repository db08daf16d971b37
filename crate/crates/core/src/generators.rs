//! Graph families and edge colorings.
//!
//! Every generator is a pure function of its parameters and seed. Uncolored
//! families come out rainbow (each edge its own color); recolor with one of
//! the `color_*` functions or [`Coloring::apply`].

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeColoredGraph;

/// Restarts allowed before [`gen_random_regular`] gives up.
pub const DEFAULT_REJECTION_CAP: usize = 100_000;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rainbow(n: usize, pairs: Vec<(usize, usize)>) -> EdgeColoredGraph {
    EdgeColoredGraph::new(n, pairs.into_iter().enumerate().map(|(i, (u, v))| (u, v, i)))
        .expect("generated pairs are simple")
}

/// `K_n`, edges in lexicographic order.
pub fn gen_complete(n: usize) -> EdgeColoredGraph {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    rainbow(n, pairs)
}

/// `K_{a,b}` with sides `0..a` and `a..a+b`.
pub fn gen_complete_bipartite(a: usize, b: usize) -> EdgeColoredGraph {
    let pairs = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
    rainbow(a + b, pairs)
}

pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<EdgeColoredGraph> {
    gen_random_regular_capped(n, d, seed, DEFAULT_REJECTION_CAP)
}

/// Random simple `d`-regular graph from the pairing model.
///
/// All `n·d` half-edges are shuffled and paired; pairs that would form a
/// loop or repeat an edge go back into the pool, which is reshuffled and
/// paired again. A run restarts from scratch only when no admissible pair is
/// left in the pool. The output is asymptotically uniform for fixed `d`.
pub fn gen_random_regular_capped(n: usize, d: usize, seed: u64, cap: usize) -> Result<EdgeColoredGraph> {
    if (n * d) % 2 == 1 {
        return Err(Error::Infeasible(format!("n*d = {} is odd", n * d)));
    }
    if d >= n && !(n == 0 || d == 0) {
        return Err(Error::Infeasible(format!("degree {d} needs more than {n} vertices")));
    }
    let mut rng = rng_for(seed);
    let mut adjacent = vec![false; n * n];
    for _ in 0..cap {
        adjacent.iter_mut().for_each(|a| *a = false);
        if let Some(pairs) = try_pairing(n, d, &mut rng, &mut adjacent) {
            return Ok(rainbow(n, pairs));
        }
    }
    Err(Error::RejectionCapExceeded(cap))
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng, adjacent: &mut [bool]) -> Option<Vec<(usize, usize)>> {
    let mut pool: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut pairs = Vec::with_capacity(pool.len() / 2);
    while !pool.is_empty() {
        pool.shuffle(rng);
        let mut rest = Vec::new();
        for pair in pool.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || adjacent[u * n + v] {
                rest.extend([u, v]);
            } else {
                adjacent[u * n + v] = true;
                pairs.push((u, v));
            }
        }
        rest.sort_unstable();
        let mut open = rest.clone();
        open.dedup();
        let stuck = !open
            .iter()
            .enumerate()
            .any(|(i, &u)| open[i + 1..].iter().any(|&v| !adjacent[u * n + v]));
        if !rest.is_empty() && stuck {
            return None;
        }
        pool = rest;
    }
    pairs.sort_unstable();
    Some(pairs)
}

/// Expected degrees for the Chung–Lu model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightSequence {
    w: Vec<f64>,
    rho: f64,
}

impl WeightSequence {
    /// Needs positive weights with `w_i·w_j·ρ ≤ 1` for every pair, `ρ = 1/Σw`.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidParameter("weights must be positive and finite".into()));
        }
        let rho = 1.0 / w.iter().sum::<f64>();
        let mut top = w.clone();
        top.sort_unstable_by(|a, b| b.total_cmp(a));
        if top.len() >= 2 && top[0] * top[1] * rho > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "largest pair probability {} exceeds 1",
                top[0] * top[1] * rho
            )));
        }
        Ok(Self { w, rho })
    }

    /// Every weight `n·p`: the model reduces to `G(n, p)`.
    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![n as f64 * p; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn edge_probability(&self, i: usize, j: usize) -> f64 {
        (self.w[i] * self.w[j] * self.rho).min(1.0)
    }

    /// Expected degree of `i` once loops are dropped: `w_i(1 − w_i·ρ)`.
    pub fn expected_degree(&self, i: usize) -> f64 {
        self.w[i] - self.edge_probability(i, i)
    }
}

impl TryFrom<Vec<f64>> for WeightSequence {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<WeightSequence> for Vec<f64> {
    fn from(w: WeightSequence) -> Self {
        w.w
    }
}

#[derive(Clone, Debug)]
pub struct ChungLu {
    pub graph: EdgeColoredGraph,
    /// Loops the model sampled and the simple graph leaves out.
    pub dropped_loops: usize,
}

/// Chung–Lu `G(w)`: each pair `{i, j}` (including `i = j`) is drawn
/// independently with probability `w_i·w_j·ρ`; sampled loops are dropped
/// and counted.
pub fn gen_chung_lu(w: &WeightSequence, seed: u64) -> ChungLu {
    let n = w.len();
    let mut rng = rng_for(seed);
    let mut pairs = Vec::new();
    let mut dropped_loops = 0;
    for i in 0..n {
        for j in i..n {
            if rng.random::<f64>() < w.edge_probability(i, j) {
                if i == j {
                    dropped_loops += 1;
                } else {
                    pairs.push((i, j));
                }
            }
        }
    }
    ChungLu {
        graph: rainbow(n, pairs),
        dropped_loops,
    }
}

/// Proper coloring of `K_n` (`n` even) by `n − 1` perfect matchings.
///
/// Round `r` pairs `n−1` with `r` and `r+k` with `r−k` (mod `n−1`) for
/// `k = 1..n/2`.
pub fn color_one_factorization(g: &EdgeColoredGraph) -> Result<EdgeColoredGraph> {
    let n = g.n();
    if n % 2 == 1 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "1-factorization needs even n, got {n}"
        )));
    }
    if g.num_edges() != n * (n - 1) / 2 {
        return Err(Error::InvalidParameter("1-factorization needs a complete graph".into()));
    }
    let m = n - 1;
    let mut round = vec![vec![usize::MAX; n]; n];
    for r in 0..m {
        round[m][r] = r;
        round[r][m] = r;
        for k in 1..n / 2 {
            let a = (r + k) % m;
            let b = (r + m - k) % m;
            round[a][b] = r;
            round[b][a] = r;
        }
    }
    let colors: Vec<usize> = g.edges().iter().map(|e| round[e.u][e.v]).collect();
    g.recolored(&colors)
}

/// Each edge its own color.
pub fn color_rainbow(g: &EdgeColoredGraph) -> EdgeColoredGraph {
    let colors: Vec<usize> = (0..g.num_edges()).collect();
    g.recolored(&colors).expect("one color per edge")
}

/// Random coloring with at most `max_class_size` edges per color: shuffle
/// the edges and deal colors `0..num_colors` round-robin.
pub fn color_random_bounded(
    g: &EdgeColoredGraph,
    max_class_size: usize,
    num_colors: usize,
    seed: u64,
) -> Result<EdgeColoredGraph> {
    if max_class_size == 0 || num_colors == 0 || num_colors.saturating_mul(max_class_size) < g.num_edges() {
        return Err(Error::Infeasible(format!(
            "{num_colors} colors of at most {max_class_size} edges cannot cover {} edges",
            g.num_edges()
        )));
    }
    let mut order: Vec<usize> = (0..g.num_edges()).collect();
    order.shuffle(&mut rng_for(seed));
    let mut colors = vec![0; g.num_edges()];
    for (i, &id) in order.iter().enumerate() {
        colors[id] = i % num_colors;
    }
    g.recolored(&colors)
}

/// Adversarial bounded coloring: consecutive edges in edge order share a
/// color until it holds `max_class_size` edges. On complete graphs this
/// packs each color around a few low-numbered vertices.
pub fn color_sequential_bounded(g: &EdgeColoredGraph, max_class_size: usize) -> Result<EdgeColoredGraph> {
    if max_class_size == 0 {
        return Err(Error::Infeasible("class size cap must be positive".into()));
    }
    let colors: Vec<usize> = (0..g.num_edges()).map(|i| i / max_class_size).collect();
    g.recolored(&colors)
}

/// A coloring recipe, written `rainbow`, `factorization`, `bounded:K:S`
/// (random, at most `K` edges per color, `S` colors), `bounded:K` (as many
/// colors as needed) or `sequential:K`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Coloring {
    #[default]
    Rainbow,
    Factorization,
    Bounded {
        max_class_size: usize,
        num_colors: Option<usize>,
    },
    Sequential {
        max_class_size: usize,
    },
}

impl Coloring {
    pub fn apply(&self, g: &EdgeColoredGraph, seed: u64) -> Result<EdgeColoredGraph> {
        match *self {
            Coloring::Rainbow => Ok(color_rainbow(g)),
            Coloring::Factorization => color_one_factorization(g),
            Coloring::Bounded {
                max_class_size,
                num_colors,
            } => {
                let s = num_colors.unwrap_or_else(|| g.num_edges().div_ceil(max_class_size.max(1)).max(1));
                color_random_bounded(g, max_class_size, s, seed)
            }
            Coloring::Sequential { max_class_size } => color_sequential_bounded(g, max_class_size),
        }
    }
}

impl FromStr for Coloring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown coloring {s:?}"));
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        let fields: Vec<&str> = s.split(':').collect();
        match fields.as_slice() {
            ["rainbow"] => Ok(Coloring::Rainbow),
            ["factorization"] => Ok(Coloring::Factorization),
            ["bounded", k] => Ok(Coloring::Bounded {
                max_class_size: num(k)?,
                num_colors: None,
            }),
            ["bounded", k, c] => Ok(Coloring::Bounded {
                max_class_size: num(k)?,
                num_colors: Some(num(c)?),
            }),
            ["sequential", k] => Ok(Coloring::Sequential {
                max_class_size: num(k)?,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coloring::Rainbow => write!(f, "rainbow"),
            Coloring::Factorization => write!(f, "factorization"),
            Coloring::Bounded {
                max_class_size,
                num_colors: None,
            } => write!(f, "bounded:{max_class_size}"),
            Coloring::Bounded {
                max_class_size,
                num_colors: Some(c),
            } => write!(f, "bounded:{max_class_size}:{c}"),
            Coloring::Sequential { max_class_size } => write!(f, "sequential:{max_class_size}"),
        }
    }
}

impl Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
