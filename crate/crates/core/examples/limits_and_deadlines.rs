//! Stops a search early: after a number of embeddings, at a wall-clock
//! deadline, and shows the parallel driver returning the sequential order.
//!
//! cargo run --release --example limits_and_deadlines

use std::num::NonZeroUsize;
use std::time::{Duration, Instant};

use bbgraph::gen::{generate_graph, GenSpec};
use bbgraph::{match_all, match_all_parallel, Graph, MatchError, QueryGraph, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = GenSpec {
        node_count: 3_000,
        edge_count: 30_000,
        node_label_alphabet: 2,
        edge_label_alphabet: 1,
        seed: 1,
        ..Default::default()
    };
    let g = generate_graph(&spec)?.to_graph()?;
    let triangle = Graph::builder()
        .node(0, ["N0"])
        .node(1, Vec::<&str>::new())
        .node(2, Vec::<&str>::new())
        .edge(0, 0, 1, ["E0"])
        .edge(1, 1, 2, ["E0"])
        .edge(2, 2, 0, ["E0"])
        .build()?;
    let q = QueryGraph::new(triangle, None)?;

    let limited = SearchConfig {
        result_limit: NonZeroUsize::new(5),
        ..Default::default()
    };
    println!(
        "first five: {:?}",
        match_all(&q, &g, &limited)?
            .embeddings
            .iter()
            .map(|e| &e.node_map)
            .collect::<Vec<_>>()
    );

    let hurried = SearchConfig {
        deadline: Some(Instant::now() + Duration::from_micros(200)),
        ..Default::default()
    };
    match match_all(&q, &g, &hurried) {
        Ok(out) => println!("finished within the deadline: {} embeddings", out.embeddings.len()),
        Err(MatchError::DeadlineExceeded { found }) => println!("deadline hit after {found} embeddings"),
    }

    let started = Instant::now();
    let seq = match_all(&q, &g, &SearchConfig::default())?;
    let t_seq = started.elapsed();
    let started = Instant::now();
    let par = match_all_parallel(&q, &g, &SearchConfig::default())?;
    println!(
        "{} embeddings; sequential {:?}, parallel {:?}, same order: {}",
        seq.embeddings.len(),
        t_seq,
        started.elapsed(),
        seq == par
    );
    Ok(())
}
