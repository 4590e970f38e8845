//! Matches the four-node query of the bundled fixture against its ten-node
//! database and prints both embeddings along with the search counters.
//!
//! cargo run --example fig1_walkthrough

use bbgraph::io::{load_graph, load_query};
use bbgraph::matcher::candidate_cell_bound;
use bbgraph::{candidates_for_start, match_all, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let g = load_graph(format!("{dir}/fig1_graph.json"))?;
    let q = load_query(format!("{dir}/fig1_query.json"))?;

    let start = q.start_node();
    println!(
        "start node {start}, candidates {:?}",
        candidates_for_start(&q, start, &g)
    );

    let cfg = SearchConfig {
        collect_counters: true,
        ..Default::default()
    };
    let outcome = match_all(&q, &g, &cfg)?;
    for (i, e) in outcome.embeddings.iter().enumerate() {
        let nodes: Vec<String> = q.nodes().map(|u| format!("{u}->{}", e.node(u))).collect();
        let edges: Vec<String> = q.edge_ids().map(|r| format!("{r}->{}", e.edge(r))).collect();
        println!("embedding {i}: {}  |  {}", nodes.join(" "), edges.join(" "));
    }
    let c = outcome.counters.expect("requested");
    println!(
        "checks {}, backtracks {}, peak candidate cells {} (bound {})",
        c.checks,
        c.backtracks,
        c.peak_candidate_cells,
        candidate_cell_bound(&q, &g)
    );
    Ok(())
}
