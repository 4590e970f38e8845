//! Times the local search against the global-candidate baseline on a
//! generated workload and prints the report table.
//!
//! cargo run --release --example benchmark

use std::time::Duration;

use bbgraph::bench::{run_bench, BenchOptions, MatcherKind};
use bbgraph::gen::{extract_workload, generate_graph, GenSpec, LabelDistribution, QueryKind, WorkloadSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = GenSpec {
        node_count: 50_000,
        edge_count: 150_000,
        node_label_alphabet: 12,
        edge_label_alphabet: 17,
        label_distribution: LabelDistribution::Zipf(1.0),
        seed: 7,
        ..Default::default()
    };
    let g = generate_graph(&spec)?.to_graph()?;
    let mut queries = Vec::new();
    for (kind, seed) in [
        (QueryKind::Path { nodes: 5 }, 1),
        (
            QueryKind::Complex {
                nodes: 6,
                extra_edges: 1,
            },
            2,
        ),
    ] {
        for entry in extract_workload(
            &g,
            &WorkloadSpec {
                query_kind: kind,
                count: 3,
                seed,
                perturb: false,
            },
        )?
        .queries
        {
            queries.push((entry.id, entry.query.to_query()?));
        }
    }
    let opts = BenchOptions {
        repetitions: 5,
        timeout: Duration::from_secs(30),
        counters: true,
        ..Default::default()
    };
    let report = run_bench(
        "synthetic-50k",
        &g,
        &queries,
        &[MatcherKind::BbGraph, MatcherKind::Global],
        &opts,
    );
    print!("{}", report.to_table());
    Ok(())
}
