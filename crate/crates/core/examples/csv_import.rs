//! Loads a graph from a CSV edge list with a node-label sidecar, the shape many
//! public datasets ship in, and runs a query on it.
//!
//! cargo run --example csv_import

use bbgraph::io::{import_edge_list, load_graph, QueryDocument};
use bbgraph::{match_all, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let edges = dir.path().join("cup.csv");
    std::fs::write(
        &edges,
        "# src,dst,type\n101,7,IN_SQUAD\n102,7,IN_SQUAD\n7,30,NAMED_SQUAD\n101,102,PLAYED_WITH\n",
    )?;
    std::fs::write(
        dir.path().join("cup.nodes.csv"),
        "101,Player\n102,Player\n7,Squad\n30,Country\n",
    )?;

    let (_, external) = import_edge_list(&edges, Some(&dir.path().join("cup.nodes.csv")))?;
    let g = load_graph(&edges)?;
    println!(
        "{} nodes, {} edges; dense id i is external id external[i] = {external:?}",
        g.node_count(),
        g.edge_count()
    );

    let q: QueryDocument = serde_json::from_str(
        r#"{"nodes": [{"id": 0, "labels": ["Player"]}, {"id": 1, "labels": ["Squad"]}, {"id": 2, "labels": ["Player"]}],
            "edges": [{"id": 0, "src": 0, "dst": 1, "labels": ["IN_SQUAD"]},
                      {"id": 1, "src": 2, "dst": 1, "labels": ["IN_SQUAD"]}]}"#,
    )?;
    for e in match_all(&q.to_query()?, &g, &SearchConfig::default())?.embeddings {
        let players: Vec<u64> = [0, 2].iter().map(|&u| external[e.node_map[u].index()]).collect();
        println!("squad mates {players:?}");
    }
    Ok(())
}
