//! Command-line front end. `bbgraph <command> --help` lists the flags of each
//! command.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | bad command line |
//! | 3 | input file missing, unreadable or malformed |
//! | 4 | input parsed but violates a graph or query invariant |
//! | 5 | runtime failure: timeout, generation or extraction failure, write error |
//! | 6 | a results file holds an invalid embedding |

use std::ffi::OsString;
use std::fmt;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use crate::baselines::{global_candidate_match_until, oracle_enumerate, OracleBudget};
use crate::bench::{run_bench, workload_queries, BenchOptions, MatcherKind};
use crate::embedding::{dedup_by_image, validate_embedding, Embedding};
use crate::gen::{extract_workload, generate_graph, GenSpec, LabelDistribution, QueryKind, WorkloadSpec};
use crate::graph::{Graph, QueryGraph};
use crate::io::{self, IoError, ResultDocument};
use crate::matcher::{match_all, match_all_parallel, SearchConfig, StartStrategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_RUNTIME: i32 = 5;
pub const EXIT_INVALID_EMBEDDING: i32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "bbgraph",
    version,
    about = "Subgraph isomorphism for labeled directed multigraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StartArg {
    First,
    Rarest,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Path,
    Complex,
}

#[derive(Debug, clap::Args)]
pub struct Inputs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub query: PathBuf,
    /// Write the results document here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find all embeddings with the branch-and-bound local search.
    Match {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value = "first")]
        start: StartArg,
        /// Stop after this many embeddings.
        #[arg(long)]
        limit: Option<NonZeroUsize>,
        /// Record search counters in the results document.
        #[arg(long)]
        counters: bool,
        /// Keep one embedding per distinct matched node and edge set.
        #[arg(long)]
        dedup_subgraphs: bool,
        /// Search start candidates on all cores.
        #[arg(long)]
        parallel: bool,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Enumerate embeddings by brute force (tiny inputs only).
    Oracle {
        #[command(flatten)]
        inputs: Inputs,
        /// Complete node maps to test before giving up.
        #[arg(long, default_value_t = OracleBudget::default().max_mappings_explored)]
        budget: u64,
    },
    /// Find all embeddings with the global-candidate baseline.
    Global {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Write a seeded random graph.
    Generate {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 14)]
        node_labels: usize,
        #[arg(long, default_value_t = 18)]
        edge_labels: usize,
        /// Zipf exponent for label frequencies; uniform when absent.
        #[arg(long)]
        zipf: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        self_loops: bool,
        #[arg(long)]
        parallel_edges: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract a workload of queries from a graph.
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Query node count.
        #[arg(long)]
        nodes: usize,
        /// Edges beyond a spanning tree, for complex queries.
        #[arg(long, default_value_t = 1)]
        extra_edges: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relabel one node per query; embeddings are no longer guaranteed.
        #[arg(long)]
        perturb: bool,
        /// Workload document to write.
        #[arg(long)]
        out: PathBuf,
        /// Also write each query as `<id>.json` into this directory.
        #[arg(long)]
        queries_dir: Option<PathBuf>,
    },
    /// Time matchers over a workload and write a report.
    Bench {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        workload: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "bbgraph,global")]
        matchers: Vec<MatcherKind>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// Per-run limit in seconds.
        #[arg(long, default_value_t = 1800.0)]
        timeout: f64,
        #[arg(long)]
        counters: bool,
        /// Report document; the table goes next to it with a `.csv` extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check every embedding of a results document.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        results: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(IoError),
    Output(IoError),
    Runtime(String),
    InvalidEmbedding { index: usize, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(IoError::Validation { .. }) => EXIT_VALIDATION,
            CliError::Input(_) => EXIT_PARSE,
            CliError::Output(_) | CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::InvalidEmbedding { .. } => EXIT_INVALID_EMBEDDING,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) | CliError::Output(e) => write!(f, "{e}"),
            CliError::Runtime(m) => f.write_str(m),
            CliError::InvalidEmbedding { index, reason } => write!(f, "invalid embedding at index {index}: {reason}"),
        }
    }
}

fn inputs(i: &Inputs) -> Result<(QueryGraph, Graph), CliError> {
    let g = io::load_graph(&i.graph).map_err(CliError::Input)?;
    let q = io::load_query(&i.query).map_err(CliError::Input)?;
    Ok((q, g))
}

fn deadline(timeout: Option<f64>) -> Option<Instant> {
    timeout.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0)))
}

fn finish(
    i: &Inputs,
    matcher: &str,
    found: &[Embedding],
    started: Instant,
    counters: Option<crate::SearchCounters>,
) -> Result<String, CliError> {
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    if let Some(out) = &i.out {
        let doc = ResultDocument::new(matcher, found)
            .with_files(i.query.display().to_string(), i.graph.display().to_string())
            .with_elapsed_ms(elapsed_ms)
            .with_counters(counters);
        io::write_results(&doc, out).map_err(CliError::Output)?;
    }
    Ok(format!("{} embeddings in {elapsed_ms:.3} ms", found.len()))
}

/// Runs one parsed command and returns its summary line.
pub fn execute(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Match {
            inputs: i,
            start,
            limit,
            counters,
            dedup_subgraphs,
            parallel,
            timeout,
        } => {
            let (q, g) = inputs(&i)?;
            let cfg = SearchConfig {
                start_strategy: match start {
                    StartArg::First => StartStrategy::FirstNode,
                    StartArg::Rarest => StartStrategy::RarestLabel,
                },
                result_limit: limit,
                collect_counters: counters,
                deadline: deadline(timeout),
                ..SearchConfig::default()
            };
            let started = Instant::now();
            let run = if parallel {
                match_all_parallel(&q, &g, &cfg)
            } else {
                match_all(&q, &g, &cfg)
            };
            let outcome = run.map_err(|e| CliError::Runtime(e.to_string()))?;
            let found = if dedup_subgraphs {
                dedup_by_image(&outcome.embeddings)
            } else {
                outcome.embeddings
            };
            finish(&i, "bbgraph", &found, started, outcome.counters)
        }
        Command::Oracle { inputs: i, budget } => {
            let (q, g) = inputs(&i)?;
            let started = Instant::now();
            let found = oracle_enumerate(
                &q,
                &g,
                OracleBudget {
                    max_mappings_explored: budget,
                    deadline: None,
                },
            )
            .map_err(|e| CliError::Runtime(e.to_string()))?;
            finish(&i, "oracle", &found, started, None)
        }
        Command::Global { inputs: i, timeout } => {
            let (q, g) = inputs(&i)?;
            let started = Instant::now();
            let found = global_candidate_match_until(&q, &g, deadline(timeout))
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            finish(&i, "global", &found, started, None)
        }
        Command::Generate {
            nodes,
            edges,
            node_labels,
            edge_labels,
            zipf,
            seed,
            self_loops,
            parallel_edges,
            out,
        } => {
            let spec = GenSpec {
                node_count: nodes,
                edge_count: edges,
                node_label_alphabet: node_labels,
                edge_label_alphabet: edge_labels,
                label_distribution: zipf.map_or(LabelDistribution::Uniform, LabelDistribution::Zipf),
                seed,
                allow_self_loops: self_loops,
                allow_parallel_edges: parallel_edges,
            };
            let doc = generate_graph(&spec).map_err(|e| CliError::Runtime(e.to_string()))?;
            io::write_graph(&doc, &out).map_err(CliError::Output)?;
            Ok(format!(
                "wrote {} nodes and {} edges to {}",
                doc.nodes.len(),
                doc.edges.len(),
                out.display()
            ))
        }
        Command::Extract {
            graph,
            kind,
            nodes,
            extra_edges,
            count,
            seed,
            perturb,
            out,
            queries_dir,
        } => {
            let g = io::load_graph(&graph).map_err(CliError::Input)?;
            let query_kind = match kind {
                KindArg::Path => QueryKind::Path { nodes },
                KindArg::Complex => QueryKind::Complex { nodes, extra_edges },
            };
            let spec = WorkloadSpec {
                query_kind,
                count,
                seed,
                perturb,
            };
            let doc = extract_workload(&g, &spec).map_err(|e| CliError::Runtime(e.to_string()))?;
            io::write_workload(&doc, &out).map_err(CliError::Output)?;
            if let Some(dir) = queries_dir {
                for entry in &doc.queries {
                    io::write_query(&entry.query, dir.join(format!("{}.json", entry.id))).map_err(CliError::Output)?;
                }
            }
            Ok(format!("wrote {} queries to {}", doc.queries.len(), out.display()))
        }
        Command::Bench {
            graph,
            workload,
            matchers,
            reps,
            timeout,
            counters,
            out,
        } => {
            let g = io::load_graph(&graph).map_err(CliError::Input)?;
            let w = io::load_workload(&workload).map_err(CliError::Input)?;
            let queries = workload_queries(&w).map_err(|(id, source)| {
                CliError::Input(IoError::Validation {
                    path: workload.join(id),
                    source,
                })
            })?;
            let opts = BenchOptions {
                repetitions: reps,
                timeout: Duration::from_secs_f64(timeout.max(0.0)),
                counters,
                ..BenchOptions::default()
            };
            let report = run_bench(&graph_name(&graph), &g, &queries, &matchers, &opts);
            let table = io::write_report(&report, &out).map_err(CliError::Output)?;
            let agreed = report.queries.iter().filter(|q| q.agreement == Some(true)).count();
            Ok(format!(
                "{} queries, {agreed} with full agreement; report in {} and {}",
                report.queries.len(),
                out.display(),
                table.display()
            ))
        }
        Command::Validate { graph, query, results } => {
            let g = io::load_graph(&graph).map_err(CliError::Input)?;
            let q = io::load_query(&query).map_err(CliError::Input)?;
            let doc = io::load_results(&results).map_err(CliError::Input)?;
            validate_results(&q, &g, &doc)?;
            Ok(format!("{} embeddings valid", doc.embeddings.len()))
        }
    }
}

fn graph_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Checks every embedding in `doc`, reporting the first failure.
pub fn validate_results(q: &QueryGraph, g: &Graph, doc: &ResultDocument) -> Result<(), CliError> {
    for (index, e) in doc.embeddings.iter().enumerate() {
        let emb = e.to_embedding().ok_or_else(|| CliError::InvalidEmbedding {
            index,
            reason: "maps must be keyed by every query id exactly once".into(),
        })?;
        validate_embedding(q, g, &emb).map_err(|v| CliError::InvalidEmbedding {
            index,
            reason: v.to_string(),
        })?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command, prints the summary
/// line or error, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.exit_code() {
                0 => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
