//! Writes a results document, reads it back and re-checks every embedding
//! with the independent validator, then shows what a corrupted entry reports.
//!
//! cargo run --example validate_results

use bbgraph::cli::validate_results;
use bbgraph::fixtures::{fig1_graph, fig1_query};
use bbgraph::io::{load_results, write_results, ResultDocument};
use bbgraph::{match_all, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (q, g) = (fig1_query(), fig1_graph());
    let found = match_all(&q, &g, &SearchConfig::default())?.embeddings;
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("results.json");
    write_results(
        &ResultDocument::new("bbgraph", &found).with_files("query.json", "graph.json"),
        &path,
    )?;

    let mut doc = load_results(&path)?;
    validate_results(&q, &g, &doc).map_err(|e| e.to_string())?;
    println!("{} embeddings re-validated", doc.embeddings.len());

    doc.embeddings[1].edges.insert(2, 7);
    match validate_results(&q, &g, &doc) {
        Ok(()) => println!("corruption went unnoticed"),
        Err(e) => println!("corrupted document rejected: {e}"),
    }
    Ok(())
}
