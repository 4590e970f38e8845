//! Runs the local search, the global-candidate baseline and the brute-force
//! oracle on small random graphs and confirms they find the same embeddings.
//!
//! cargo run --example oracle_crosscheck

use bbgraph::embedding::canonical_set;
use bbgraph::gen::{extract_query, generate_graph, GenSpec, QueryKind, WorkloadSpec};
use bbgraph::{global_candidate_match, match_all, oracle_enumerate, OracleBudget, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut total = 0;
    for seed in 0..200 {
        let spec = GenSpec {
            node_count: 10,
            edge_count: 18,
            node_label_alphabet: 2,
            edge_label_alphabet: 2,
            seed,
            allow_self_loops: true,
            allow_parallel_edges: true,
            ..Default::default()
        };
        let g = generate_graph(&spec)?.to_graph()?;
        let kind = if seed % 2 == 0 {
            QueryKind::Path { nodes: 3 }
        } else {
            QueryKind::Complex {
                nodes: 3,
                extra_edges: 1,
            }
        };
        let Ok(doc) = extract_query(
            &g,
            &WorkloadSpec {
                query_kind: kind,
                count: 1,
                seed,
                perturb: seed % 7 == 0,
            },
        ) else {
            continue;
        };
        let q = doc.to_query()?;
        let local = canonical_set(&match_all(&q, &g, &SearchConfig::default())?.embeddings);
        let global = canonical_set(&global_candidate_match(&q, &g));
        let oracle = canonical_set(&oracle_enumerate(&q, &g, OracleBudget::default())?);
        assert_eq!(local, oracle, "seed {seed}");
        assert_eq!(global, oracle, "seed {seed}");
        total += oracle.len();
    }
    println!("all matchers agree; {total} embeddings over 200 instances");
    Ok(())
}
