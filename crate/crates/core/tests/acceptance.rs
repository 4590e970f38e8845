//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! per criterion and exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bbgraph::bench::{run_bench, BenchOptions, CellStatus, MatcherKind};
use bbgraph::embedding::canonical_set;
use bbgraph::io::{load_graph, load_query, GraphDocument, ResultDocument};
use bbgraph::matcher::{candidate_cell_bound, MatchState, StateContent};
use bbgraph::{
    global_candidate_match, match_all, oracle_enumerate, validate_embedding, EdgeId, Embedding, Graph, NodeId,
    OracleBudget, QueryGraph, SearchConfig, StartStrategy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL_CORPUS: u64 = 500;
const LARGE_CORPUS: u64 = 100;
const PERF_SEED: u64 = 2026;

/// State and space observations collected from every local-search run of
/// criteria 1 to 3.
#[derive(Default)]
struct Audit {
    runs: u64,
    unclean: u64,
    restore_mismatches: u64,
    bound_violations: u64,
    worst_ratio: f64,
}

impl Audit {
    fn run(&mut self, q: &QueryGraph, g: &Graph, strategy: StartStrategy) -> Vec<Embedding> {
        let cfg = SearchConfig {
            start_strategy: strategy,
            collect_counters: true,
            audit_restores: true,
            ..Default::default()
        };
        let out = match_all(q, g, &cfg).expect("no deadline set");
        let c = out.counters.expect("counters requested");
        let bound = candidate_cell_bound(q, g);
        self.runs += 1;
        self.unclean += c.unclean_finishes;
        self.restore_mismatches += c.restore_mismatches;
        if c.peak_candidate_cells > bound {
            self.bound_violations += 1;
        }
        if bound > 0 {
            self.worst_ratio = self.worst_ratio.max(c.peak_candidate_cells as f64 / bound as f64);
        }
        out.embeddings
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn criterion1(audit: &mut Audit) -> Outcome {
    let g = load_graph(fixture("fig1_graph.json")).map_err(|e| e.to_string())?;
    let q = load_query(fixture("fig1_query.json")).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let found = audit.run(&q, &g, StartStrategy::FirstNode);
    let elapsed = started.elapsed();
    let expected = [
        Embedding {
            node_map: [1, 0, 3, 4].map(NodeId).to_vec(),
            edge_map: [3, 0, 1, 6].map(EdgeId).to_vec(),
        },
        Embedding {
            node_map: [1, 2, 3, 4].map(NodeId).to_vec(),
            edge_map: [3, 4, 5, 6].map(EdgeId).to_vec(),
        },
    ];
    ensure(found == expected, || format!("got {found:?}"))?;
    let images: Vec<_> = found.iter().map(Embedding::image).collect();
    let expected_images: Vec<_> = expected.iter().map(Embedding::image).collect();
    ensure(images == expected_images, || "matched node/edge sets differ".into())?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "2 embeddings, node sets {{1,0,3,4}} and {{1,2,3,4}}, {:.3} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn criterion2(audit: &mut Audit) -> Outcome {
    let started = Instant::now();
    let mut total = 0usize;
    for seed in 0..SMALL_CORPUS {
        let (q, g) = common::small_instance(seed);
        let local = canonical_set(&audit.run(&q, &g, StartStrategy::FirstNode));
        let global = canonical_set(&global_candidate_match(&q, &g));
        let oracle = canonical_set(&oracle_enumerate(&q, &g, OracleBudget::default()).map_err(|e| e.to_string())?);
        ensure(local == oracle, || {
            format!("seed {seed}: local {} vs oracle {}", local.len(), oracle.len())
        })?;
        ensure(global == oracle, || {
            format!("seed {seed}: global {} vs oracle {}", global.len(), oracle.len())
        })?;
        total += oracle.len();
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("suite took {elapsed:?}"))?;
    Ok(format!(
        "{SMALL_CORPUS} instances, {total} embeddings, all three matchers set-equal, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn criterion3(audit: &mut Audit) -> Outcome {
    let (mut embeddings, mut violations, mut empty) = (0usize, 0usize, 0usize);
    let mut first = None;
    for seed in 0..LARGE_CORPUS {
        let (q, g) = common::large_instance(seed);
        ensure((g.node_count(), g.edge_count()) == (10_000, 30_000), || {
            "wrong database size".into()
        })?;
        let found = audit.run(&q, &g, StartStrategy::FirstNode);
        empty += found.is_empty() as usize;
        for (i, e) in found.iter().enumerate() {
            if let Err(v) = validate_embedding(&q, &g, e) {
                violations += 1;
                first.get_or_insert_with(|| format!("seed {seed} embedding {i}: {v}"));
            }
        }
        embeddings += found.len();
    }
    ensure(violations == 0, || {
        format!("{violations} violations, first: {}", first.unwrap_or_default())
    })?;
    Ok(format!(
        "{LARGE_CORPUS} instances, {embeddings} embeddings validated, {empty} queries without matches, 0 violations"
    ))
}

/// Random push/pop/match sequences with snapshots taken and restored at
/// random points, compared against wholesale copies.
fn snapshot_property(cases: u64) -> Result<u64, String> {
    let mut restores = 0;
    for case in 0..cases {
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let (nq, eq) = (rng.random_range(1..8usize), rng.random_range(0..10usize));
        let mut s = MatchState::new(nq, eq);
        let mut marks: Vec<(bbgraph::matcher::StateSnapshot, StateContent)> = Vec::new();
        for _ in 0..rng.random_range(0..300) {
            match rng.random_range(0..6) {
                0 => s.push(NodeId(rng.random_range(0..nq as u32)), NodeId(rng.random_range(0..50))),
                1 => {
                    s.pop();
                }
                2 => {
                    let (u, v) = (NodeId(rng.random_range(0..nq as u32)), NodeId(rng.random_range(0..50)));
                    if s.image_of(u).is_none() && s.query_node_of(v).is_none() {
                        s.match_node(u, v);
                    }
                }
                3 if eq > 0 => {
                    let (r, e) = (EdgeId(rng.random_range(0..eq as u32)), EdgeId(rng.random_range(0..80)));
                    if !s.edge_is_matched(r) && s.query_edge_of(e).is_none() {
                        s.match_edge(r, e);
                    }
                }
                4 => marks.push((s.snapshot(), s.content())),
                _ => {
                    // Backtrack one or more levels at once.
                    let depth = rng.random_range(1..=marks.len().max(1));
                    for _ in 0..depth {
                        if let Some((snap, copy)) = marks.pop() {
                            s.restore(snap);
                            restores += 1;
                            ensure(s.content() == copy, || format!("case {case}: restore diverged"))?;
                        }
                    }
                }
            }
        }
        while let Some((snap, copy)) = marks.pop() {
            s.restore(snap);
            restores += 1;
            ensure(s.content() == copy, || format!("case {case}: final restore diverged"))?;
        }
    }
    Ok(restores)
}

fn criterion4(audit: &Audit) -> Outcome {
    ensure(audit.unclean == 0, || {
        format!("{} runs left state behind", audit.unclean)
    })?;
    ensure(audit.restore_mismatches == 0, || {
        format!("{} in-search restores diverged", audit.restore_mismatches)
    })?;
    let restores = snapshot_property(2000)?;
    Ok(format!(
        "{} searches finished clean with every backtrack audited; {restores} randomized restores match copies",
        audit.runs
    ))
}

fn criterion5(audit: &Audit) -> Outcome {
    ensure(audit.bound_violations == 0, || {
        format!("{} runs exceeded the cell bound", audit.bound_violations)
    })?;
    Ok(format!(
        "{} runs within bound, highest peak/bound ratio {:.3}",
        audit.runs, audit.worst_ratio
    ))
}

fn criterion6() -> Outcome {
    let (g, queries) = common::perf_workload(PERF_SEED);
    let global_limit = Duration::from_secs(10);
    let bb = run_bench(
        "perf",
        &g,
        &queries,
        &[MatcherKind::BbGraph],
        &BenchOptions {
            repetitions: 3,
            timeout: Duration::from_secs(60),
            ..Default::default()
        },
    );
    let global = run_bench(
        "perf",
        &g,
        &queries,
        &[MatcherKind::Global],
        &BenchOptions {
            repetitions: 3,
            timeout: global_limit,
            ..Default::default()
        },
    );
    let (mut wins, mut slowest, mut global_timeouts) = (0, 0.0f64, 0);
    for (b, gl) in bb.queries.iter().zip(&global.queries) {
        let (b, gl) = (&b.cells[0], &gl.cells[0]);
        ensure(b.status == CellStatus::Ok, || {
            format!("{}: local search status {:?}", b.matcher, b.status)
        })?;
        let bt = b.mean_seconds.expect("completed runs have a mean");
        slowest = slowest.max(bt);
        let faster = match (&gl.status, gl.mean_seconds) {
            (CellStatus::Ok, Some(gt)) => {
                ensure(gl.embedding_count == b.embedding_count, || {
                    "embedding counts differ".into()
                })?;
                bt <= gt
            }
            (CellStatus::Timeout, _) => {
                global_timeouts += 1;
                bt <= global_limit.as_secs_f64()
            }
            (status, _) => return Err(format!("global baseline status {status:?}")),
        };
        wins += faster as usize;
    }
    let n = queries.len();
    ensure(wins * 10 >= n * 8, || {
        format!("local search no slower on only {wins}/{n} queries")
    })?;
    ensure(slowest < 60.0, || {
        format!("slowest local-search query took {slowest:.2} s")
    })?;
    Ok(format!(
        "local search no slower on {wins}/{n} queries (baseline censored at {} s on {global_timeouts}), slowest {:.3} s",
        global_limit.as_secs(),
        slowest
    ))
}

fn workload_results(seed: u64) -> String {
    let (g, queries) = common::perf_workload(seed);
    let mut out = GraphDocument::from_graph(&g).to_json();
    for (id, q) in &queries {
        let cfg = SearchConfig {
            collect_counters: true,
            ..Default::default()
        };
        let found = match_all(q, &g, &cfg).expect("no deadline set");
        let doc = ResultDocument::new("bbgraph", &found.embeddings)
            .with_files(format!("{id}.json"), "perf.json")
            .with_elapsed_ms(0.0)
            .with_counters(found.counters);
        out.push_str(&doc.to_json(false));
    }
    out
}

fn criterion7() -> Outcome {
    let first = workload_results(PERF_SEED);
    let second = workload_results(PERF_SEED);
    ensure(first == second, || "result documents differ between runs".into())?;
    Ok(format!(
        "two runs produced identical {} bytes of graph and result documents",
        first.len()
    ))
}

fn criterion8() -> Outcome {
    for seed in 0..SMALL_CORPUS {
        let (q, g) = common::small_instance(seed);
        let run = |s| {
            let cfg = SearchConfig {
                start_strategy: s,
                ..Default::default()
            };
            canonical_set(&match_all(&q, &g, &cfg).expect("no deadline set").embeddings)
        };
        ensure(run(StartStrategy::FirstNode) == run(StartStrategy::RarestLabel), || {
            format!("seed {seed} differs")
        })?;
    }
    Ok(format!(
        "{SMALL_CORPUS} instances set-equal under both start strategies"
    ))
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut audit = Audit::default();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let started = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = started.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {n} ({name}): PASS [{secs:.1} s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{secs:.1} s] {detail}");
            }
        }
    };
    report(1, "golden example", &mut || criterion1(&mut audit));
    report(2, "oracle equivalence", &mut || criterion2(&mut audit));
    report(3, "soundness at 10k/30k", &mut || criterion3(&mut audit));
    report(4, "state restoration", &mut || criterion4(&audit));
    report(5, "space bound", &mut || criterion5(&audit));
    report(6, "relative performance", &mut criterion6);
    report(7, "determinism", &mut criterion7);
    report(8, "start-strategy invariance", &mut criterion8);
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
