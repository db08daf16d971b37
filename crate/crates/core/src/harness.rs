//! Seeded batch experiments: generate a graph family, color it, decompose,
//! and tabulate one record per trial.
//!
//! Trial `i` uses seed `base_seed ^ i` for the generator, the coloring and the
//! decomposition, so trials are independent of scheduling. Records come back
//! sorted by trial index and the CSV leaves the timing column empty unless
//! asked, so reruns produce byte-identical files.
//!
//! Spec format (JSON):
//!
//! ```json
//! {
//!   "family": {"kind": "complete", "n": 16},
//!   "coloring": "factorization",
//!   "c": 2.5,
//!   "trials": 100,
//!   "seed": 7
//! }
//! ```
//!
//! Families: `complete {n}`, `bipartite {a, b}`, `regular {n, d}`,
//! `chunglu {weights}`, `gnp {n, p}`, `graph {graph}` (inline graph document)
//! and `file {path}`. Optional fields: `epsilon` (0.1), `max_retries` (50),
//! `enforce_color_cap` (true), `verify_lemma4` (false) and `outputs {csv,
//! summary}`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decomposition::{
    decompose_with_spectrum, q_from, DecompositionParams, DEFAULT_EPSILON, DEFAULT_MAX_RETRIES,
};
use crate::error::{Error, Result};
use crate::generators::{
    gen_chung_lu, gen_complete, gen_complete_bipartite, gen_random_regular, Coloring, WeightSequence,
};
use crate::graph::EdgeColoredGraph;
use crate::par::Exec;
use crate::spectral::spectrum;

/// Mixed into the trial seed before coloring, so the coloring stream differs
/// from the generator stream.
const COLORING_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Family {
    Complete { n: usize },
    Bipartite { a: usize, b: usize },
    Regular { n: usize, d: usize },
    Chunglu { weights: WeightSequence },
    Gnp { n: usize, p: f64 },
    Graph { graph: serde_json::Value },
    File { path: PathBuf },
}

impl Family {
    /// Builds one instance; the second value counts Chung–Lu loops dropped.
    pub fn build(&self, seed: u64) -> Result<(EdgeColoredGraph, usize)> {
        Ok(match self {
            Family::Complete { n } => (gen_complete(*n), 0),
            Family::Bipartite { a, b } => (gen_complete_bipartite(*a, *b), 0),
            Family::Regular { n, d } => (gen_random_regular(*n, *d, seed)?, 0),
            Family::Chunglu { weights } => {
                let cl = gen_chung_lu(weights, seed);
                (cl.graph, cl.dropped_loops)
            }
            Family::Gnp { n, p } => {
                let cl = gen_chung_lu(&WeightSequence::uniform(*n, *p)?, seed);
                (cl.graph, cl.dropped_loops)
            }
            Family::Graph { graph } => (EdgeColoredGraph::from_json(graph.to_string().as_bytes())?, 0),
            Family::File { path } => (EdgeColoredGraph::from_json(&std::fs::read(path)?)?, 0),
        })
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        match self {
            Family::Complete { n } if *n < 2 => bad(format!("complete graph needs n >= 2, got {n}")),
            Family::Bipartite { a, b } if *a == 0 || *b == 0 => bad("bipartite sides must be nonempty".into()),
            Family::Regular { n, d } if (n * d) % 2 == 1 || d >= n => {
                bad(format!("no simple {d}-regular graph on {n} vertices"))
            }
            Family::Gnp { n, p } if !(*p > 0.0 && *p <= 1.0) || *n < 2 => {
                bad(format!("gnp needs n >= 2 and 0 < p <= 1, got n = {n}, p = {p}"))
            }
            Family::Graph { graph } => EdgeColoredGraph::from_json(graph.to_string().as_bytes())
                .map(|_| ())
                .map_err(|e| Error::InvalidSpec(e.to_string())),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub family: Family,
    #[serde(default)]
    pub coloring: Coloring,
    pub c: f64,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_max_retries")]
    pub max_retries: usize,
    #[serde(default = "default_true")]
    pub enforce_color_cap: bool,
    #[serde(default)]
    pub verify_lemma4: bool,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_max_retries() -> usize {
    DEFAULT_MAX_RETRIES
}

fn default_true() -> bool {
    true
}

impl ExperimentSpec {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let spec: Self = serde_json::from_slice(bytes).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidSpec("trials must be at least 1".into()));
        }
        self.params(0)
            .validate()
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        self.family.validate()?;
        match (&self.coloring, &self.family) {
            (Coloring::Factorization, Family::Complete { n }) if n % 2 == 0 => Ok(()),
            (Coloring::Factorization, _) => Err(Error::InvalidSpec(
                "factorization coloring needs a complete family with even n".into(),
            )),
            (Coloring::Bounded { max_class_size: 0, .. } | Coloring::Sequential { max_class_size: 0 }, _) => {
                Err(Error::InvalidSpec("color class cap must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    fn params(&self, seed: u64) -> DecompositionParams {
        DecompositionParams {
            c: self.c,
            epsilon: self.epsilon,
            seed,
            max_retries: self.max_retries,
            enforce_color_cap: self.enforce_color_cap,
            verify_lemma4: self.verify_lemma4,
        }
    }
}

/// One trial. Fields that could not be computed are empty in the CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub edges: usize,
    pub colors: usize,
    pub min_degree: usize,
    pub lambda1: f64,
    pub q: usize,
    pub trees_found: usize,
    pub success: bool,
    pub attempts: usize,
    pub retries_used: usize,
    pub color_cap_ok: bool,
    pub dropped_loops: usize,
    pub lemma4_color: Option<bool>,
    pub lemma4_cut: Option<bool>,
    pub lemma4_degree: Option<bool>,
    /// Why no decomposition ran, if it did not.
    pub note: String,
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    /// Trials with `q > 0` that ran a decomposition.
    pub eligible: usize,
    pub successes: usize,
    /// Successes over eligible trials; absent when no trial was eligible.
    pub success_rate: Option<f64>,
    /// Set when `success_rate` is undefined.
    pub flag: Option<String>,
    /// `trees_found` value to number of trials.
    pub trees_found: BTreeMap<usize, usize>,
    pub mean_lambda1: f64,
    pub mean_q: f64,
    pub mean_attempts: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    run_experiment_with(spec, Exec::default())
}

pub fn run_experiment_with(spec: &ExperimentSpec, exec: Exec) -> Result<ExperimentResult> {
    spec.validate()?;
    let mut records = exec
        .map_collect(0..spec.trials, |i| run_trial(spec, i, exec))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.trial);
    let summary = summarize(&records);
    Ok(ExperimentResult { records, summary })
}

/// Runs a single trial of `spec`.
pub fn run_trial(spec: &ExperimentSpec, trial: usize, exec: Exec) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = spec.seed ^ trial as u64;
    let (base, dropped_loops) = spec.family.build(seed)?;
    let g = spec.coloring.apply(&base, seed ^ COLORING_SALT)?;
    let summary = spectrum(&g)?;
    let params = spec.params(seed);
    let mut record = TrialRecord {
        trial,
        seed,
        n: g.n(),
        edges: g.num_edges(),
        colors: g.num_colors(),
        min_degree: g.min_degree(),
        lambda1: summary.lambda1,
        q: 0,
        trees_found: 0,
        success: false,
        attempts: 0,
        retries_used: 0,
        color_cap_ok: crate::decomposition::color_cap_ok(&g, &summary),
        dropped_loops,
        lemma4_color: None,
        lemma4_cut: None,
        lemma4_degree: None,
        note: String::new(),
        wall_ms: None,
    };
    if g.n() < 2 || !g.is_connected() {
        record.note = "disconnected".into();
    } else {
        record.q = q_from(record.min_degree as f64, summary.lambda1, spec.c, g.n());
        match decompose_with_spectrum(&g, &summary, &params, exec) {
            Ok(d) => {
                record.trees_found = d.trees_found;
                record.success = d.success;
                record.attempts = d.attempts;
                record.retries_used = d.attempts - 1;
                if let Some(l4) = d.lemma4 {
                    record.lemma4_color = Some(l4.color_overlap_ok);
                    record.lemma4_cut = Some(l4.cut_ok);
                    record.lemma4_degree = Some(l4.degree_ok);
                }
            }
            Err(Error::HypothesisVacuous) => record.note = "q = 0".into(),
            Err(Error::ColorCapViolated { .. }) => {
                record.q = 0;
                record.note = "color cap violated".into();
            }
            Err(e) => return Err(e),
        }
    }
    record.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(record)
}

/// Summary statistics, computed from the records alone.
pub fn summarize(records: &[TrialRecord]) -> Summary {
    let eligible: Vec<&TrialRecord> = records.iter().filter(|r| r.q > 0).collect();
    let successes = eligible.iter().filter(|r| r.success).count();
    let mut trees_found = BTreeMap::new();
    for r in records {
        *trees_found.entry(r.trees_found).or_insert(0) += 1;
    }
    let mean = |xs: &mut dyn Iterator<Item = f64>, len: usize| {
        if len == 0 {
            0.0
        } else {
            xs.sum::<f64>() / len as f64
        }
    };
    let (success_rate, flag) = if eligible.is_empty() {
        (None, Some("undefined: no trial had q > 0".to_string()))
    } else {
        (Some(successes as f64 / eligible.len() as f64), None)
    };
    Summary {
        trials: records.len(),
        eligible: eligible.len(),
        successes,
        success_rate,
        flag,
        trees_found,
        mean_lambda1: mean(&mut records.iter().map(|r| r.lambda1), records.len()),
        mean_q: mean(&mut records.iter().map(|r| r.q as f64), records.len()),
        mean_attempts: (!eligible.is_empty())
            .then(|| mean(&mut eligible.iter().map(|r| r.attempts as f64), eligible.len())),
    }
}

/// CSV with a fixed header, one row per record. `wall_ms` stays empty unless
/// `include_timing` is set.
pub fn emit_csv(records: &[TrialRecord], include_timing: bool) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        if include_timing {
            w.serialize(r)?;
        } else {
            w.serialize(TrialRecord {
                wall_ms: None,
                ..r.clone()
            })?;
        }
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Column order of [`emit_csv`].
pub const CSV_HEADER: [&str; 19] = [
    "trial",
    "seed",
    "n",
    "edges",
    "colors",
    "min_degree",
    "lambda1",
    "q",
    "trees_found",
    "success",
    "attempts",
    "retries_used",
    "color_cap_ok",
    "dropped_loops",
    "lemma4_color",
    "lemma4_cut",
    "lemma4_degree",
    "note",
    "wall_ms",
];

pub fn read_csv(bytes: &[u8]) -> Result<Vec<TrialRecord>> {
    let mut r = csv::Reader::from_reader(bytes);
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn emit_json(summary: &Summary) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(summary)?;
    out.push(b'\n');
    Ok(out)
}
