//! Generates a labeled graph and a mixed workload of path and complex queries,
//! then writes them as JSON documents.
//!
//! cargo run --example generate_workload -- [OUT_DIR]

use std::path::PathBuf;

use bbgraph::gen::{extract_workload, generate_graph, GenSpec, LabelDistribution, QueryKind, WorkloadSpec};
use bbgraph::io::{write_graph, write_workload, WorkloadDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("bbgraph-workload"));
    let spec = GenSpec {
        node_count: 5_000,
        edge_count: 15_000,
        node_label_alphabet: 12,
        edge_label_alphabet: 17,
        label_distribution: LabelDistribution::Zipf(1.0),
        seed: 42,
        ..Default::default()
    };
    let doc = generate_graph(&spec)?;
    let g = doc.to_graph()?;
    write_graph(&doc, out.join("graph.json"))?;

    let mut workload = WorkloadDocument::default();
    for (kind, seed) in [
        (QueryKind::Path { nodes: 5 }, 1),
        (
            QueryKind::Complex {
                nodes: 5,
                extra_edges: 1,
            },
            2,
        ),
    ] {
        let part = extract_workload(
            &g,
            &WorkloadSpec {
                query_kind: kind,
                count: 5,
                seed,
                perturb: false,
            },
        )?;
        workload.queries.extend(part.queries);
    }
    for entry in &workload.queries {
        println!(
            "{}: {} nodes, {} edges",
            entry.id,
            entry.query.nodes.len(),
            entry.query.edges.len()
        );
    }
    write_workload(&workload, out.join("workload.json"))?;
    println!("wrote {}", out.display());
    Ok(())
}
