//! `rainbow-decomp`: command-line access to the spectral, rainbow-forest and
//! decomposition tools, graph generators and the experiment harness.
//!
//! Exit codes: 0 on success, 1 when a computation cannot proceed on valid
//! input (disconnected graph, vacuous `q`, enumeration cap), 2 on malformed
//! input or invalid arguments/specs, 3 on I/O errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rainbow_core::decomposition::{check_lemma6, decompose, DecompositionParams, DEFAULT_EPSILON, DEFAULT_MAX_RETRIES};
use rainbow_core::generators::{
    gen_chung_lu, gen_complete, gen_complete_bipartite, gen_random_regular, Coloring, WeightSequence,
};
use rainbow_core::harness::{emit_csv, emit_json, run_experiment_with, ExperimentSpec};
use rainbow_core::partitions::random_partition_with_parts;
use rainbow_core::rainbow::{
    extract_disjoint_rsts, max_rainbow_forest, schrijver_bruteforce_with_cap, DEFAULT_SCHRIJVER_CAP,
};
use rainbow_core::spectral::{check_cheeger_inequality_with, cheeger_exact_with, spectrum, DEFAULT_CHEEGER_CAP};
use rainbow_core::{EdgeColoredGraph, Error, Exec, VertexPartition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "rainbow-decomp",
    version,
    about = "Edge-disjoint rainbow spanning trees in edge-colored graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized Laplacian gap, optionally the full spectrum and exact Cheeger constant.
    Spectral {
        graph: PathBuf,
        #[arg(long)]
        full_spectrum: bool,
        #[arg(long)]
        cheeger: bool,
        #[arg(long, default_value_t = DEFAULT_CHEEGER_CAP)]
        cheeger_cap: usize,
    },
    /// Maximum rainbow forest, optionally the partition criterion and disjoint trees.
    Rainbow {
        graph: PathBuf,
        #[arg(long)]
        schrijver: bool,
        #[arg(long, default_value_t = DEFAULT_SCHRIJVER_CAP)]
        schrijver_cap: usize,
        /// Greedily peel up to K edge-disjoint rainbow spanning trees.
        #[arg(long, value_name = "K")]
        peel: Option<usize>,
    },
    /// Random decomposition into q parts with one rainbow spanning tree each.
    Decompose {
        graph: PathBuf,
        #[arg(long = "C", value_name = "C")]
        c: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
        retries: usize,
        #[arg(long)]
        verify_lemma4: bool,
        /// Run even if a color class exceeds delta*lambda1/2.
        #[arg(long)]
        ignore_color_cap: bool,
    },
    /// Crossing-edge lower bound on vertex partitions, as CSV.
    CheckInequalities {
        graph: PathBuf,
        /// A JSON file holding a list of partitions (lists of parts), or `random:N`.
        #[arg(long)]
        partitions: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a graph family in the JSON graph format.
    Generate {
        family: FamilyKind,
        /// complete N | bipartite A B | regular N D | chunglu N P
        dims: Vec<String>,
        /// Explicit Chung-Lu weights, comma separated (replaces N P).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, default_value = "rainbow")]
        coloring: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a batch experiment from a JSON spec.
    Experiment {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, value_name = "K")]
        workers: Option<usize>,
        /// Fill the wall_ms column (makes the CSV run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Complete,
    Bipartite,
    Regular,
    Chunglu,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => 3,
            Error::Malformed(_)
            | Error::LoopEdge(_)
            | Error::DuplicateEdge(..)
            | Error::VertexOutOfRange { .. }
            | Error::InvalidPartition(_)
            | Error::InvalidParameter(_)
            | Error::InvalidSpec(_)
            | Error::Infeasible(_)
            | Error::Json(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| io_failure(path, e))
}

fn load_graph(path: &Path) -> CliResult<EdgeColoredGraph> {
    Ok(EdgeColoredGraph::from_json(&read(path)?)?)
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> CliResult {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| io_failure(p, e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn print_json(value: &Value) -> CliResult {
    let mut text = serde_json::to_vec_pretty(value).map_err(Error::from)?;
    text.push(b'\n');
    write_out(None, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Spectral {
            graph,
            full_spectrum,
            cheeger,
            cheeger_cap,
        } => {
            let g = load_graph(&graph)?;
            let s = spectrum(&g)?;
            let mut out = json!({"n": g.n(), "lambda1": s.lambda1});
            if full_spectrum {
                out["eigenvalues"] = json!(s.eigenvalues);
            }
            if cheeger {
                let cert = cheeger_exact_with(&g, cheeger_cap, Exec::default())?;
                let report = check_cheeger_inequality_with(&g, cheeger_cap, Exec::default())?;
                out["h"] = json!(cert.h);
                out["cheeger_witness"] = json!(cert.witness);
                out["cheeger_holds"] = json!(report.holds);
            }
            print_json(&out)
        }
        Command::Rainbow {
            graph,
            schrijver,
            schrijver_cap,
            peel,
        } => {
            let g = load_graph(&graph)?;
            let forest = max_rainbow_forest(&g);
            let mut out = json!({
                "max_forest_size": forest.size(),
                "has_rst": forest.spanning,
                "forest_edges": forest.edges,
            });
            if schrijver {
                let verdict = schrijver_bruteforce_with_cap(&g, schrijver_cap)?;
                out["schrijver"] = json!({
                    "has_rst": verdict.has_rst,
                    "violating_partition": verdict.violating_partition.map(|p| p.parts().to_vec()),
                });
            }
            if let Some(k) = peel {
                let trees: Vec<Vec<usize>> = extract_disjoint_rsts(&g, k).into_iter().map(|t| t.edges).collect();
                out["trees"] = json!(trees);
            }
            print_json(&out)
        }
        Command::Decompose {
            graph,
            c,
            epsilon,
            seed,
            retries,
            verify_lemma4,
            ignore_color_cap,
        } => {
            let g = load_graph(&graph)?;
            let params = DecompositionParams {
                c,
                epsilon,
                seed,
                max_retries: retries,
                enforce_color_cap: !ignore_color_cap,
                verify_lemma4,
            };
            let d = decompose(&g, &params)?;
            print_json(&serde_json::to_value(&d).map_err(Error::from)?)
        }
        Command::CheckInequalities {
            graph,
            partitions,
            seed,
            output,
        } => {
            let g = load_graph(&graph)?;
            let parts = load_partitions(&g, &partitions, seed)?;
            let l1 = spectrum(&g)?.lambda1;
            let mut csv = String::from("t,lhs,rhs,x,M,holds,balanced,degenerate\n");
            for p in &parts {
                let r = check_lemma6(&g, l1, p)?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.t, r.lhs, r.rhs, r.x, r.m, r.holds, r.balanced, r.degenerate
                ));
            }
            write_out(output.as_deref(), csv.as_bytes())
        }
        Command::Generate {
            family,
            dims,
            weights,
            coloring,
            seed,
            output,
        } => {
            let coloring: Coloring = coloring.parse()?;
            let num = |i: usize| -> CliResult<usize> {
                dims.get(i)
                    .ok_or_else(|| usage("missing dimension"))?
                    .parse()
                    .map_err(|_| usage(format!("bad dimension {:?}", dims[i])))
            };
            let expect = |k: usize| -> CliResult {
                if dims.len() == k {
                    Ok(())
                } else {
                    Err(usage(format!("expected {k} dimensions, got {}", dims.len())))
                }
            };
            let base = match family {
                FamilyKind::Complete => {
                    expect(1)?;
                    gen_complete(num(0)?)
                }
                FamilyKind::Bipartite => {
                    expect(2)?;
                    gen_complete_bipartite(num(0)?, num(1)?)
                }
                FamilyKind::Regular => {
                    expect(2)?;
                    gen_random_regular(num(0)?, num(1)?, seed)?
                }
                FamilyKind::Chunglu => {
                    let w = match weights {
                        Some(w) => {
                            expect(0)?;
                            WeightSequence::new(w)?
                        }
                        None => {
                            expect(2)?;
                            let p: f64 = dims[1]
                                .parse()
                                .map_err(|_| usage(format!("bad probability {:?}", dims[1])))?;
                            WeightSequence::uniform(num(0)?, p)?
                        }
                    };
                    let cl = gen_chung_lu(&w, seed);
                    eprintln!("{}", json!({"dropped_loops": cl.dropped_loops}));
                    cl.graph
                }
            };
            let g = coloring.apply(&base, seed)?;
            let mut text = g.to_json().into_bytes();
            text.push(b'\n');
            write_out(output.as_deref(), &text)
        }
        Command::Experiment {
            spec,
            output,
            summary,
            workers,
            timings,
        } => {
            let spec = ExperimentSpec::from_json(&read(&spec)?)?;
            let csv_path = output.or_else(|| spec.outputs.csv.clone());
            let summary_path = summary.or_else(|| spec.outputs.summary.clone());
            let result = run_with_workers(&spec, workers)?;
            write_out(csv_path.as_deref(), &emit_csv(&result.records, timings)?)?;
            let json = emit_json(&result.summary)?;
            match summary_path {
                Some(p) => write_out(Some(&p), &json),
                None if csv_path.is_some() => write_out(None, &json),
                None => Ok(()),
            }
        }
    }
}

fn run_with_workers(
    spec: &ExperimentSpec,
    workers: Option<usize>,
) -> CliResult<rainbow_core::harness::ExperimentResult> {
    match workers {
        Some(0) => Err(usage("--workers must be at least 1")),
        Some(1) => Ok(run_experiment_with(spec, Exec::Sequential)?),
        #[cfg(feature = "parallel")]
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| usage(e.to_string()))?;
            Ok(pool.install(|| run_experiment_with(spec, Exec::Parallel))?)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(run_experiment_with(spec, Exec::Sequential)?),
        None => Ok(run_experiment_with(spec, Exec::default())?),
    }
}

fn load_partitions(g: &EdgeColoredGraph, source: &str, seed: u64) -> CliResult<Vec<VertexPartition>> {
    let n = g.n();
    if let Some(count) = source.strip_prefix("random:") {
        let count: usize = count
            .parse()
            .map_err(|_| usage(format!("bad partition count {count:?}")))?;
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..count)
            .map(|_| {
                let t = rng.random_range(1..=n);
                random_partition_with_parts(n, t, &mut rng)
            })
            .collect());
    }
    let path = Path::new(source);
    let lists: Vec<Vec<Vec<usize>>> =
        serde_json::from_slice(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    lists
        .into_iter()
        .map(|parts| VertexPartition::new(n, parts).map_err(Failure::from))
        .collect()
}
