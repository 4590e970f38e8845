//! Compares the two start-node strategies on a generated graph. Both return
//! the same embeddings; the rarest-label start usually seeds fewer searches.
//!
//! cargo run --release --example start_strategies

use bbgraph::embedding::canonical_set;
use bbgraph::gen::{extract_query, generate_graph, GenSpec, LabelDistribution, QueryKind, WorkloadSpec};
use bbgraph::{match_all, SearchConfig, StartStrategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = GenSpec {
        node_count: 20_000,
        edge_count: 60_000,
        node_label_alphabet: 10,
        edge_label_alphabet: 8,
        label_distribution: LabelDistribution::Zipf(1.2),
        seed: 3,
        ..Default::default()
    };
    let g = generate_graph(&spec)?.to_graph()?;
    for seed in 0..5 {
        let w = WorkloadSpec {
            query_kind: QueryKind::Complex {
                nodes: 5,
                extra_edges: 1,
            },
            count: 1,
            seed,
            perturb: false,
        };
        let q = extract_query(&g, &w)?.to_query()?;
        let mut sets = Vec::new();
        for strategy in [StartStrategy::FirstNode, StartStrategy::RarestLabel] {
            let cfg = SearchConfig {
                start_strategy: strategy,
                collect_counters: true,
                ..Default::default()
            };
            let out = match_all(&q, &g, &cfg)?;
            let c = out.counters.expect("requested");
            println!(
                "query {seed} {strategy:?}: {} embeddings, {} start candidates, {} checks",
                out.embeddings.len(),
                c.start_candidates,
                c.checks
            );
            sets.push(canonical_set(&out.embeddings));
        }
        assert_eq!(sets[0], sets[1]);
    }
    Ok(())
}
