//! Random edge decomposition into `q` parts, one rainbow spanning tree per part.
//!
//! Given a connected edge-colored graph with minimum degree δ, normalized
//! Laplacian gap λ₁ and every color class of size at most δλ₁/2, each edge is
//! sent to one of `q = ⌊δλ₁/(C ln n)⌋` parts uniformly at random and a
//! maximum rainbow forest is extracted from every part. When every part
//! yields a spanning tree the graph holds `q` edge-disjoint rainbow spanning
//! trees.
//!
//! The module also carries exact checkers for the structural facts behind
//! that guarantee: per-part color overlap, cut and degree concentration, the
//! `f`/`g` cut lower bounds, the threshold `M`, the rearrangement count `x`,
//! the crossing-edge lower bound for vertex partitions, and the pseudocolor
//! classes used for partitions with nearly `n` parts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeColoredGraph, VertexPartition};
use crate::par::Exec;
use crate::rainbow::{max_rainbow_forest_in, RainbowForest};
use crate::spectral::{spectrum, SpectralSummary};

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_MAX_RETRIES: usize = 50;
/// Cut concentration is checked on every cut up to this many vertices.
pub const LEMMA4_EXHAUSTIVE_MAX_N: usize = 18;
/// Random subsets drawn (in addition to all singletons) above that size.
pub const LEMMA4_SAMPLE_SIZE: usize = 10_000;
/// Slack for comparisons between floating-point bounds and exact counts.
pub const INEQUALITY_TOL: f64 = 1e-9;

const LEMMA4_STREAM: u64 = u64::MAX;
const MASK_CHUNK: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionParams {
    /// The constant `C` in `q = ⌊δλ₁/(C ln n)⌋`.
    pub c: f64,
    pub epsilon: f64,
    pub seed: u64,
    /// Attempts after the first one.
    pub max_retries: usize,
    /// Refuse inputs with a color class larger than δλ₁/2.
    pub enforce_color_cap: bool,
    /// Attach a [`Lemma4Report`] for the returned attempt.
    pub verify_lemma4: bool,
}

impl DecompositionParams {
    pub fn new(c: f64) -> Self {
        Self {
            c,
            epsilon: DEFAULT_EPSILON,
            seed: 0,
            max_retries: DEFAULT_MAX_RETRIES,
            enforce_color_cap: true,
            verify_lemma4: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be positive, got {}", self.c)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 / 9.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1/9), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// `⌊δλ₁/(C ln n)⌋`, natural logarithm.
///
/// Quotients within [`INEQUALITY_TOL`] of an integer are snapped to it, so
/// rounding in λ₁ cannot drop `q` by one at exact boundaries.
pub fn q_from(delta: f64, lambda1: f64, c: f64, n: usize) -> usize {
    let ln_n = (n as f64).ln();
    if ln_n <= 0.0 {
        return 0;
    }
    let quotient = delta * lambda1 / (c * ln_n);
    if quotient.is_nan() || quotient <= 0.0 {
        return 0;
    }
    let nearest = quotient.round();
    if (quotient - nearest).abs() < INEQUALITY_TOL {
        nearest as usize
    } else {
        quotient.floor() as usize
    }
}

/// Number of parts for `g`; zero means the hypothesis is vacuous.
pub fn compute_q(g: &EdgeColoredGraph, params: &DecompositionParams) -> Result<usize> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter("q needs n >= 2".into()));
    }
    let l1 = spectrum(g)?.lambda1;
    Ok(q_from(g.min_degree() as f64, l1, params.c, g.n()))
}

/// Edge sampling rate `p = C ln n/(δλ₁)` used in expectation formulas.
pub fn sampling_rate(delta: f64, lambda1: f64, c: f64, n: usize) -> f64 {
    c * (n as f64).ln() / (delta * lambda1)
}

/// Every color class has at most δλ₁/2 edges.
pub fn color_cap_ok(g: &EdgeColoredGraph, spectrum: &SpectralSummary) -> bool {
    let max_class = g.color_class_sizes().into_iter().max().unwrap_or(0);
    max_class as f64 <= color_cap(g, spectrum.lambda1) + INEQUALITY_TOL
}

fn color_cap(g: &EdgeColoredGraph, lambda1: f64) -> f64 {
    g.min_degree() as f64 * lambda1 / 2.0
}

/// Random stream for one decomposition attempt: the seed keys a ChaCha8
/// generator and the attempt index selects its stream.
pub fn attempt_rng(seed: u64, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// Sends each edge to one of `q` parts uniformly; returns edge indices per part.
pub fn random_partition(g: &EdgeColoredGraph, q: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    random_partition_from(g, q, &mut attempt_rng(seed, 0))
}

pub fn random_partition_from<R: Rng + ?Sized>(g: &EdgeColoredGraph, q: usize, rng: &mut R) -> Result<Vec<Vec<usize>>> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    let mut parts = vec![Vec::new(); q];
    for id in 0..g.num_edges() {
        parts[rng.random_range(0..q)].push(id);
    }
    Ok(parts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum CutCheckMode {
    /// Every cut of the vertex set was checked.
    Exhaustive { cuts: u64 },
    /// All singletons plus uniformly random subsets.
    Sampled { cuts: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartCheck {
    pub edges: usize,
    /// (i) largest `|E_j ∩ C_i|` over colors.
    pub max_color_overlap: usize,
    /// (ii) smallest `e_j(S, S̄)/E[e_j(S, S̄)]` over checked cuts with a nonzero expectation.
    pub worst_cut_ratio: Option<f64>,
    /// (iii) smallest degree inside the part.
    pub min_degree: usize,
    pub color_overlap_ok: bool,
    pub cut_ok: bool,
    pub degree_ok: bool,
}

impl PartCheck {
    pub fn all_hold(&self) -> bool {
        self.color_overlap_ok && self.cut_ok && self.degree_ok
    }
}

/// Concentration properties of a random edge partition.
///
/// Thresholds: (i) `|E_j ∩ C_i| ≤ (1+ε)C ln n/2`; (ii) `e_j(S,S̄) ≥
/// (1−ε)·e_G(S,S̄)/q`; (iii) `deg_j(v) ≥ (1−ε)C ln n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma4Report {
    pub q: usize,
    pub color_threshold: f64,
    pub cut_ratio_threshold: f64,
    pub degree_threshold: f64,
    pub mode: CutCheckMode,
    pub parts: Vec<PartCheck>,
    pub color_overlap_ok: bool,
    pub cut_ok: bool,
    pub degree_ok: bool,
    pub all_hold: bool,
}

pub fn verify_lemma4(g: &EdgeColoredGraph, parts: &[Vec<usize>], params: &DecompositionParams) -> Result<Lemma4Report> {
    verify_lemma4_with(g, parts, params, Exec::default())
}

pub fn verify_lemma4_with(
    g: &EdgeColoredGraph,
    parts: &[Vec<usize>],
    params: &DecompositionParams,
    exec: Exec,
) -> Result<Lemma4Report> {
    let q = parts.len();
    if q == 0 {
        return Err(Error::InvalidParameter("no parts".into()));
    }
    let n = g.n();
    let mut part_of = vec![usize::MAX; g.num_edges()];
    for (j, part) in parts.iter().enumerate() {
        for &id in part {
            if id >= g.num_edges() || part_of[id] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "edge {id} missing from the graph or assigned twice"
                )));
            }
            part_of[id] = j;
        }
    }
    if part_of.contains(&usize::MAX) {
        return Err(Error::InvalidParameter("parts do not cover every edge".into()));
    }

    let scale = params.c * (n as f64).ln();
    let color_threshold = (1.0 + params.epsilon) * scale / 2.0;
    let degree_threshold = (1.0 - params.epsilon) * scale;
    let cut_ratio_threshold = 1.0 - params.epsilon;

    let mut checks: Vec<PartCheck> = parts
        .iter()
        .map(|part| {
            let mut per_color = vec![0usize; g.num_colors()];
            let mut degree = vec![0usize; n];
            for &id in part {
                let e = g.edges()[id];
                per_color[e.color] += 1;
                degree[e.u] += 1;
                degree[e.v] += 1;
            }
            let max_color_overlap = per_color.into_iter().max().unwrap_or(0);
            let min_degree = degree.into_iter().min().unwrap_or(0);
            PartCheck {
                edges: part.len(),
                max_color_overlap,
                worst_cut_ratio: None,
                min_degree,
                color_overlap_ok: max_color_overlap as f64 <= color_threshold + INEQUALITY_TOL,
                cut_ok: true,
                degree_ok: min_degree as f64 + INEQUALITY_TOL >= degree_threshold,
            }
        })
        .collect();

    let (worst, mode) = if n <= LEMMA4_EXHAUSTIVE_MAX_N {
        exhaustive_cut_ratios(g, &part_of, q, exec)
    } else {
        sampled_cut_ratios(g, &part_of, q, params.seed)
    };
    for (check, ratio) in checks.iter_mut().zip(worst) {
        if let Some((part_cut, total_cut)) = ratio {
            let r = (part_cut * q as u64) as f64 / total_cut as f64;
            check.worst_cut_ratio = Some(r);
            check.cut_ok = r + INEQUALITY_TOL >= cut_ratio_threshold;
        }
    }

    let color_overlap_ok = checks.iter().all(|c| c.color_overlap_ok);
    let cut_ok = checks.iter().all(|c| c.cut_ok);
    let degree_ok = checks.iter().all(|c| c.degree_ok);
    Ok(Lemma4Report {
        q,
        color_threshold,
        cut_ratio_threshold,
        degree_threshold,
        mode,
        parts: checks,
        color_overlap_ok,
        cut_ok,
        degree_ok,
        all_hold: color_overlap_ok && cut_ok && degree_ok,
    })
}

/// Per part: the cut minimizing `e_j(S)/e_G(S)`, as `(e_j, e_G)`.
type WorstCuts = Vec<Option<(u64, u64)>>;

fn merge_worst(mut a: WorstCuts, b: WorstCuts) -> WorstCuts {
    for (x, y) in a.iter_mut().zip(b) {
        *x = match (*x, y) {
            (None, y) => y,
            (x, None) => x,
            (Some((p1, t1)), Some((p2, t2))) => {
                if p2 * t1 < p1 * t2 {
                    Some((p2, t2))
                } else {
                    Some((p1, t1))
                }
            }
        };
    }
    a
}

fn record_cut(worst: &mut WorstCuts, counts: &[u64], total: u64) {
    if total == 0 {
        return;
    }
    for (w, &c) in worst.iter_mut().zip(counts) {
        match *w {
            Some((p, t)) if p * total <= c * t => {}
            _ => *w = Some((c, total)),
        }
    }
}

// Each cut {S, S̄} has a side of volume at most Vol(G)/2 and both sides cut
// the same edges, so checking every cut checks every admissible S.
fn exhaustive_cut_ratios(g: &EdgeColoredGraph, part_of: &[usize], q: usize, exec: Exec) -> (WorstCuts, CutCheckMode) {
    let n = g.n();
    if n < 2 {
        return (vec![None; q], CutCheckMode::Exhaustive { cuts: 0 });
    }
    let cuts = (1u64 << (n - 1)) - 1;
    let chunks = cuts.div_ceil(MASK_CHUNK);
    let worst = exec.map_reduce(
        0..chunks,
        vec![None; q],
        |chunk| {
            let mut worst = vec![None; q];
            let mut counts = vec![0u64; q];
            let end = ((chunk + 1) * MASK_CHUNK).min(cuts);
            for rest in chunk * MASK_CHUNK..end {
                let mask = (rest << 1) | 1;
                counts.iter_mut().for_each(|c| *c = 0);
                let mut total = 0;
                for (id, e) in g.edges().iter().enumerate() {
                    if ((mask >> e.u) ^ (mask >> e.v)) & 1 == 1 {
                        counts[part_of[id]] += 1;
                        total += 1;
                    }
                }
                record_cut(&mut worst, &counts, total);
            }
            worst
        },
        merge_worst,
    );
    (worst, CutCheckMode::Exhaustive { cuts })
}

fn sampled_cut_ratios(g: &EdgeColoredGraph, part_of: &[usize], q: usize, seed: u64) -> (WorstCuts, CutCheckMode) {
    let n = g.n();
    let mut rng = attempt_rng(seed, LEMMA4_STREAM);
    let mut worst = vec![None; q];
    let mut counts = vec![0u64; q];
    let mut side = vec![false; n];
    let mut eval = |side: &[bool], worst: &mut WorstCuts| {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut total = 0;
        for (id, e) in g.edges().iter().enumerate() {
            if side[e.u] != side[e.v] {
                counts[part_of[id]] += 1;
                total += 1;
            }
        }
        record_cut(worst, &counts, total);
    };
    for v in 0..n {
        side[v] = true;
        eval(&side, &mut worst);
        side[v] = false;
    }
    let mut drawn = 0u64;
    while drawn < LEMMA4_SAMPLE_SIZE as u64 {
        side.iter_mut().for_each(|s| *s = rng.random());
        let k = side.iter().filter(|&&s| s).count();
        if k == 0 || k == n {
            continue;
        }
        eval(&side, &mut worst);
        drawn += 1;
    }
    (worst, CutCheckMode::Sampled { cuts: n as u64 + drawn })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub q: usize,
    pub n: usize,
    pub min_degree: usize,
    pub lambda1: f64,
    /// `C ln n/(δλ₁)`.
    pub p: f64,
    pub color_cap_ok: bool,
    /// Every part yielded a rainbow spanning tree.
    pub success: bool,
    /// Attempts consumed: up to and including the first success, otherwise all.
    pub attempts: usize,
    /// Index of the attempt whose parts are reported.
    pub chosen_attempt: usize,
    /// Edge indices of each part.
    pub parts: Vec<Vec<usize>>,
    /// Rainbow spanning tree of each part, where one exists.
    pub trees: Vec<Option<Vec<usize>>>,
    pub trees_found: usize,
    pub lemma4: Option<Lemma4Report>,
}

struct Attempt {
    index: usize,
    parts: Vec<Vec<usize>>,
    trees: Vec<Option<RainbowForest>>,
}

impl Attempt {
    fn found(&self) -> usize {
        self.trees.iter().filter(|t| t.is_some()).count()
    }
}

fn run_attempt(g: &EdgeColoredGraph, q: usize, seed: u64, index: usize) -> Attempt {
    let mut rng = attempt_rng(seed, index as u64);
    let parts = random_partition_from(g, q, &mut rng).expect("q >= 1");
    let trees = parts
        .iter()
        .map(|part| {
            let forest = max_rainbow_forest_in(g, part);
            forest.spanning.then_some(forest)
        })
        .collect();
    Attempt { index, parts, trees }
}

pub fn decompose(g: &EdgeColoredGraph, params: &DecompositionParams) -> Result<Decomposition> {
    decompose_with(g, params, Exec::default())
}

/// Runs attempts until one yields a tree in every part, or the retry budget
/// is spent; in that case the attempt with the most trees (earliest on ties)
/// is reported. Attempts run in parallel batches, but the outcome equals the
/// sequential scan.
pub fn decompose_with(g: &EdgeColoredGraph, params: &DecompositionParams, exec: Exec) -> Result<Decomposition> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter("decomposition needs n >= 2".into()));
    }
    let spec = spectrum(g)?;
    decompose_with_spectrum(g, &spec, params, exec)
}

/// As [`decompose_with`], reusing an already computed spectrum of `g`.
pub fn decompose_with_spectrum(
    g: &EdgeColoredGraph,
    spec: &SpectralSummary,
    params: &DecompositionParams,
    exec: Exec,
) -> Result<Decomposition> {
    params.validate()?;
    if g.n() < 2 {
        return Err(Error::InvalidParameter("decomposition needs n >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let delta = g.min_degree();
    let cap_ok = color_cap_ok(g, spec);
    if params.enforce_color_cap && !cap_ok {
        return Err(Error::ColorCapViolated {
            max_class: g.color_class_sizes().into_iter().max().unwrap_or(0),
            cap: color_cap(g, spec.lambda1),
        });
    }
    let q = q_from(delta as f64, spec.lambda1, params.c, g.n());
    if q == 0 {
        return Err(Error::HypothesisVacuous);
    }

    let total = params.max_retries.saturating_add(1);
    let width = exec.width();
    let mut best: Option<Attempt> = None;
    let mut used = 0;
    let mut next = 0;
    'batches: while next < total {
        let end = (next + width).min(total);
        let batch = exec.map_collect(next..end, |i| run_attempt(g, q, params.seed, i));
        next = end;
        for attempt in batch {
            used = attempt.index + 1;
            let done = attempt.found() == q;
            if best.as_ref().is_none_or(|b| attempt.found() > b.found()) {
                best = Some(attempt);
            }
            if done {
                break 'batches;
            }
        }
    }
    let best = best.expect("at least one attempt runs");

    let lemma4 = if params.verify_lemma4 {
        Some(verify_lemma4_with(g, &best.parts, params, exec)?)
    } else {
        None
    };
    let trees_found = best.found();
    Ok(Decomposition {
        q,
        n: g.n(),
        min_degree: delta,
        lambda1: spec.lambda1,
        p: sampling_rate(delta as f64, spec.lambda1, params.c, g.n()),
        color_cap_ok: cap_ok,
        success: trees_found == q,
        attempts: used,
        chosen_attempt: best.index,
        trees: best.trees.into_iter().map(|t| t.map(|f| f.edges)).collect(),
        parts: best.parts,
        trees_found,
        lemma4,
    })
}

/// `f(S) = max{(λ₁/2)·Vol(S), Vol(S) − 2·binom(|S|, 2)}`, a lower bound on `e(S, S̄)`.
pub fn f_lower_bound(g: &EdgeColoredGraph, lambda1: f64, set: &[usize]) -> Result<f64> {
    let stats = g.cut(set)?;
    let k = stats.set.len() as f64;
    let vol = stats.vol as f64;
    Ok((lambda1 / 2.0 * vol).max(vol - k * (k - 1.0)))
}

/// `g(z) = max{λ₁δz/2, δz − z(z−1)}`, a lower bound on `f(S)` for `|S| = z`.
pub fn g_lower_bound(delta: f64, lambda1: f64, z: usize) -> f64 {
    let z = z as f64;
    (lambda1 * delta * z / 2.0).max(delta * z - z * (z - 1.0))
}

/// `M = 1 + δ − λ₁δ/2`, where the two branches of [`g_lower_bound`] meet.
pub fn threshold_m(delta: f64, lambda1: f64) -> f64 {
    1.0 + delta - lambda1 * delta / 2.0
}

/// `δs − s(s−1) − λ₁δs/2`, the gap between the branches of
/// [`g_lower_bound`] at `s`; its positive root is `M`.
pub fn threshold_m_gap(delta: f64, lambda1: f64, s: f64) -> f64 {
    delta * s - s * (s - 1.0) - lambda1 * delta * s / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionX {
    /// Number of size-one parts in the extremal rearrangement of the small parts.
    pub x: usize,
    /// The leftover part size, in `(1, M]`; absent when no part is small.
    pub z_star: Option<f64>,
    /// Number of parts of size at most `M`.
    pub t_prime: usize,
    /// Total size of those parts.
    pub n_prime: usize,
}

/// Solves `N' = x + M(t' − x − 1) + z*` for the integer `x` with `1 < z* ≤ M`.
///
/// `sizes` must be weakly increasing and positive. Sizes within
/// [`INEQUALITY_TOL`] of `M` count as small, and `z*` within the same slack of
/// 1 is treated as equal to 1, so the result does not flicker with rounding
/// in `M`.
pub fn partition_x(sizes: &[usize], m: f64) -> Result<PartitionX> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("no part sizes".into()));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidParameter("part sizes must be positive".into()));
    }
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("part sizes must be weakly increasing".into()));
    }
    let t_prime = sizes.iter().take_while(|&&s| s as f64 <= m + INEQUALITY_TOL).count();
    let n_prime: usize = sizes[..t_prime].iter().sum();
    if t_prime == 0 {
        return Ok(PartitionX {
            x: 0,
            z_star: None,
            t_prime,
            n_prime,
        });
    }
    if m <= 1.0 + INEQUALITY_TOL {
        return Err(Error::DegenerateThreshold(m));
    }
    // z*(x) = N' − M(t'−1) + x(M−1) grows by M−1 per step; x is the first
    // integer with z*(x) > 1.
    let a = (m * (t_prime as f64 - 1.0) + 1.0 - n_prime as f64) / (m - 1.0);
    let nearest = a.round();
    let x = if (a - nearest).abs() < INEQUALITY_TOL {
        nearest + 1.0
    } else {
        a.floor() + 1.0
    };
    let z_star = n_prime as f64 - m * (t_prime as f64 - 1.0) + x * (m - 1.0);
    Ok(PartitionX {
        x: x.max(0.0) as usize,
        z_star: Some(z_star),
        t_prime,
        n_prime,
    })
}

/// `t − ⌊(n − t)/(M − 1)⌋ − 1`, a lower bound on the `x` of any partition of
/// `n` vertices into `t` parts.
pub fn x_lower_bound(n: usize, t: usize, m: f64) -> Result<i64> {
    if t == 0 || t > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= t <= n, got t = {t}, n = {n}"
        )));
    }
    if m <= 1.0 + INEQUALITY_TOL {
        return Err(Error::DegenerateThreshold(m));
    }
    let ratio = (n - t) as f64 / (m - 1.0);
    let nearest = ratio.round();
    let floor = if (ratio - nearest).abs() < INEQUALITY_TOL {
        nearest
    } else {
        ratio.floor()
    };
    Ok(t as i64 - floor as i64 - 1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma6Report {
    pub t: usize,
    /// `e_G(P)`, edges between parts.
    pub lhs: usize,
    /// `½(λ₁|E| + δx(1 − λ₁/2))`.
    pub rhs: f64,
    pub x: usize,
    pub m: f64,
    /// Fewer than two parts.
    pub degenerate: bool,
    /// Every part has volume at most Vol(G)/2.
    pub balanced: bool,
    pub holds: bool,
}

/// Evaluates the crossing-edge lower bound `e_G(P) ≥ ½(λ₁|E| + δx(1 − λ₁/2))`.
///
/// `holds` is the inequality itself (with [`INEQUALITY_TOL`] slack) and is
/// false for `t = 1`. The bound is derived part by part from Cheeger's
/// inequality, which only controls parts of volume at most Vol(G)/2, so it is
/// guaranteed only for `balanced` partitions.
pub fn check_lemma6(g: &EdgeColoredGraph, lambda1: f64, p: &VertexPartition) -> Result<Lemma6Report> {
    if p.n() != g.n() {
        return Err(Error::InvalidPartition(format!(
            "partition of {} vertices for a graph on {}",
            p.n(),
            g.n()
        )));
    }
    let delta = g.min_degree() as f64;
    let m = threshold_m(delta, lambda1);
    let sizes = p.sorted_sizes();
    let x = match partition_x(&sizes, m) {
        Ok(px) => px.x,
        // M = 1: every small part is a singleton
        Err(Error::DegenerateThreshold(_)) => sizes.iter().filter(|&&s| s == 1).count(),
        Err(e) => return Err(e),
    };
    let lhs = g.edges_across(p);
    let rhs = 0.5 * (lambda1 * g.num_edges() as f64 + delta * x as f64 * (1.0 - lambda1 / 2.0));
    let total = 2 * g.num_edges();
    let balanced = p.parts().iter().all(|part| 2 * g.volume(part) <= total);
    let degenerate = p.t() < 2;
    Ok(Lemma6Report {
        t: p.t(),
        lhs,
        rhs,
        x,
        m,
        degenerate,
        balanced,
        holds: !degenerate && lhs as f64 + INEQUALITY_TOL >= rhs,
    })
}

/// `(t − 2)(1 + ε)C ln n/2 + 1`: crossing edges in a part that force `t − 1`
/// colors between the parts of a `t`-partition once every color appears at
/// most `(1 + ε)C ln n/2` times in the part.
pub fn enough_edges_threshold(t: usize, n: usize, params: &DecompositionParams) -> Result<f64> {
    if t < 2 {
        return Err(Error::InvalidParameter("threshold needs t >= 2".into()));
    }
    Ok((t as f64 - 2.0) * (1.0 + params.epsilon) * params.c * (n as f64).ln() / 2.0 + 1.0)
}

/// `n − 1` disjoint unions of whole color classes, each with at least `n/4` edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudocolorPartition {
    /// Edge indices of each class.
    pub classes: Vec<Vec<usize>>,
    /// Original colors merged into each class.
    pub class_colors: Vec<Vec<usize>>,
    /// Colors not needed by any class.
    pub leftover_colors: Vec<usize>,
}

/// Greedy pseudocolor classes: scan colors in index order, closing a class as
/// soon as it reaches `n/4` edges, until `n − 1` classes exist.
pub fn pseudocolor_classes(g: &EdgeColoredGraph) -> Result<PseudocolorPartition> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter("pseudocolor classes need n >= 2".into()));
    }
    let needed = n - 1;
    if 4 * g.num_edges() < needed * n {
        return Err(Error::InsufficientEdges(format!(
            "{} edges < (n-1)n/4 = {}",
            g.num_edges(),
            needed as f64 * n as f64 / 4.0
        )));
    }
    let color_classes = g.color_classes();
    let mut classes = Vec::with_capacity(needed);
    let mut class_colors = Vec::with_capacity(needed);
    let mut current: Vec<usize> = Vec::new();
    let mut current_colors = Vec::new();
    let mut colors = color_classes.iter().enumerate();
    while classes.len() < needed {
        let Some((c, edges)) = colors.next() else {
            return Err(Error::InsufficientEdges(format!(
                "color classes ran out after {} of {needed} pseudocolor classes",
                classes.len()
            )));
        };
        current.extend(edges);
        current_colors.push(c);
        if 4 * current.len() >= n {
            classes.push(std::mem::take(&mut current));
            class_colors.push(std::mem::take(&mut current_colors));
        }
    }
    let mut leftover_colors = current_colors;
    leftover_colors.extend(colors.map(|(c, _)| c));
    Ok(PseudocolorPartition {
        classes,
        class_colors,
        leftover_colors,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChernoffBounds {
    /// Bound on `P[X ≤ E[X] − λ]`: `exp(−λ²/(2E[X]))`.
    pub lower_tail: f64,
    /// Bound on `P[X ≥ E[X] + λ]`: `exp(−λ²/(2(E[X] + λ/3)))`.
    pub upper_tail: f64,
}

pub fn chernoff_bounds(expectation: f64, lambda: f64) -> Result<ChernoffBounds> {
    if expectation.is_nan() || expectation <= 0.0 || lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need E[X] > 0 and lambda >= 0, got {expectation}, {lambda}"
        )));
    }
    let l2 = lambda * lambda;
    Ok(ChernoffBounds {
        lower_tail: (-l2 / (2.0 * expectation)).exp(),
        upper_tail: (-l2 / (2.0 * (expectation + lambda / 3.0))).exp(),
    })
}
