//! Timed comparison of matchers over a workload.
//!
//! Runs execute one after another on the calling thread, so timings do not
//! interfere. Timing covers the matcher call only; loading files and building
//! graphs happens before the clock starts.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::baselines::{global_candidate_match_until, oracle_enumerate, OracleBudget, OracleError};
use crate::embedding::{canonical_set, Embedding};
use crate::graph::{Graph, GraphError, QueryGraph};
use crate::matcher::{match_all, MatchError, SearchConfig, SearchCounters};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatcherKind {
    BbGraph,
    Global,
    Oracle,
}

impl MatcherKind {
    pub const ALL: [MatcherKind; 3] = [MatcherKind::BbGraph, MatcherKind::Global, MatcherKind::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            MatcherKind::BbGraph => "bbgraph",
            MatcherKind::Global => "global",
            MatcherKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for MatcherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatcherKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        MatcherKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown matcher {s:?} (expected bbgraph, global or oracle)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchOptions {
    pub repetitions: usize,
    /// Wall-clock limit for a single run.
    pub timeout: Duration,
    /// Rerun the local search once, untimed, to record its counters.
    pub counters: bool,
    pub oracle_budget: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            repetitions: 10,
            timeout: Duration::from_secs(1800),
            counters: false,
            oracle_budget: OracleBudget::default().max_mappings_explored,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "message")]
pub enum CellStatus {
    Ok,
    Timeout,
    Error(String),
}

/// One (query, matcher) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub matcher: MatcherKind,
    pub status: CellStatus,
    /// Completed runs; fewer than requested once a run fails or times out.
    pub runs: usize,
    pub mean_seconds: Option<f64>,
    pub embedding_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counters: Option<SearchCounters>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub query: String,
    pub query_nodes: usize,
    pub query_edges: usize,
    pub cells: Vec<BenchCell>,
    /// Whether every matcher returned the same embedding set; absent when some
    /// cell did not complete.
    pub agreement: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub graph: String,
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub repetitions: usize,
    pub timeout_seconds: f64,
    pub queries: Vec<QueryResult>,
}

impl BenchReport {
    /// Comma-separated table, one row per (query, matcher) cell.
    pub fn to_table(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "query",
            "graph",
            "nq",
            "eq",
            "matcher",
            "mean_seconds",
            "embedding_count",
            "status",
            "agreement",
        ])
        .expect("writing to memory");
        for q in &self.queries {
            for c in &q.cells {
                let mean = match (&c.status, c.mean_seconds) {
                    (CellStatus::Timeout, _) => format!(">{:.1}", self.timeout_seconds),
                    (_, Some(s)) => format!("{s:.6}"),
                    (_, None) => String::new(),
                };
                let status = match &c.status {
                    CellStatus::Ok => "ok".to_owned(),
                    CellStatus::Timeout => "timeout".to_owned(),
                    CellStatus::Error(m) => format!("error: {m}"),
                };
                w.write_record([
                    q.query.clone(),
                    self.graph.clone(),
                    q.query_nodes.to_string(),
                    q.query_edges.to_string(),
                    c.matcher.to_string(),
                    mean,
                    c.embedding_count.map(|n| n.to_string()).unwrap_or_default(),
                    status,
                    q.agreement.map(|a| a.to_string()).unwrap_or_default(),
                ])
                .expect("writing to memory");
            }
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
    }
}

enum RunError {
    Timeout,
    Failed(String),
}

fn run_once(
    kind: MatcherKind,
    q: &QueryGraph,
    g: &Graph,
    deadline: Instant,
    budget: u64,
) -> Result<Vec<Embedding>, RunError> {
    let timeout = |e: MatchError| match e {
        MatchError::DeadlineExceeded { .. } => RunError::Timeout,
    };
    match kind {
        MatcherKind::BbGraph => {
            let cfg = SearchConfig {
                deadline: Some(deadline),
                ..SearchConfig::default()
            };
            match_all(q, g, &cfg).map(|o| o.embeddings).map_err(timeout)
        }
        MatcherKind::Global => global_candidate_match_until(q, g, Some(deadline)).map_err(timeout),
        MatcherKind::Oracle => oracle_enumerate(
            q,
            g,
            OracleBudget {
                max_mappings_explored: budget,
                deadline: Some(deadline),
            },
        )
        .map_err(|e| match e {
            OracleError::DeadlineExceeded => RunError::Timeout,
            other => RunError::Failed(other.to_string()),
        }),
    }
}

fn run_cell(kind: MatcherKind, q: &QueryGraph, g: &Graph, opts: &BenchOptions) -> (BenchCell, Option<Vec<Embedding>>) {
    let mut total = Duration::ZERO;
    let mut runs = 0;
    let mut status = CellStatus::Ok;
    let mut found: Option<Vec<Embedding>> = None;
    for _ in 0..opts.repetitions.max(1) {
        let start = Instant::now();
        let res = run_once(kind, q, g, start + opts.timeout, opts.oracle_budget);
        let elapsed = start.elapsed();
        match res {
            Ok(embs) => {
                total += elapsed;
                runs += 1;
                if found.is_none() {
                    found = Some(embs);
                }
            }
            Err(RunError::Timeout) => {
                status = CellStatus::Timeout;
                break;
            }
            Err(RunError::Failed(m)) => {
                status = CellStatus::Error(m);
                break;
            }
        }
    }
    let counters = (opts.counters && kind == MatcherKind::BbGraph && status == CellStatus::Ok)
        .then(|| {
            let cfg = SearchConfig {
                collect_counters: true,
                ..SearchConfig::default()
            };
            match_all(q, g, &cfg).ok().and_then(|o| o.counters)
        })
        .flatten();
    let ok = status == CellStatus::Ok;
    let cell = BenchCell {
        matcher: kind,
        runs,
        mean_seconds: (ok && runs > 0).then(|| total.as_secs_f64() / runs as f64),
        embedding_count: if ok { found.as_ref().map(Vec::len) } else { None },
        status,
        counters,
    };
    (cell, if ok { found } else { None })
}

/// Times every matcher on every query. Failures and timeouts are recorded in
/// the affected cell; the other cells still run.
pub fn run_bench(
    graph_name: &str,
    g: &Graph,
    workload: &[(String, QueryGraph)],
    matchers: &[MatcherKind],
    opts: &BenchOptions,
) -> BenchReport {
    let queries = workload
        .iter()
        .map(|(id, q)| {
            let mut cells = Vec::with_capacity(matchers.len());
            let mut sets: Vec<Option<Vec<Embedding>>> = Vec::with_capacity(matchers.len());
            for &m in matchers {
                let (cell, found) = run_cell(m, q, g, opts);
                cells.push(cell);
                sets.push(found.map(|f| canonical_set(&f)));
            }
            let agreement = if sets.iter().all(Option::is_some) {
                Some(sets.windows(2).all(|w| w[0] == w[1]))
            } else {
                None
            };
            QueryResult {
                query: id.clone(),
                query_nodes: q.node_count(),
                query_edges: q.edge_count(),
                cells,
                agreement,
            }
        })
        .collect();
    BenchReport {
        graph: graph_name.to_owned(),
        graph_nodes: g.node_count(),
        graph_edges: g.edge_count(),
        repetitions: opts.repetitions.max(1),
        timeout_seconds: opts.timeout.as_secs_f64(),
        queries,
    }
}

/// Converts a loaded workload document into validated queries.
pub fn workload_queries(doc: &crate::io::WorkloadDocument) -> Result<Vec<(String, QueryGraph)>, (String, GraphError)> {
    doc.queries
        .iter()
        .map(|e| {
            e.query
                .to_query()
                .map(|q| (e.id.clone(), q))
                .map_err(|err| (e.id.clone(), err))
        })
        .collect()
}
