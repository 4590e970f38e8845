//! Instance generators shared by the integration tests.
#![allow(dead_code)]

use bbgraph::gen::{extract_query, generate_graph, GenSpec, LabelDistribution, QueryKind, WorkloadSpec};
use bbgraph::{Graph, QueryGraph};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NODE_LABELS: [&str; 4] = ["A", "B", "C", "Z"];
const EDGE_LABELS: [&str; 3] = ["x", "y", "z"];

fn label_subset(rng: &mut ChaCha8Rng, alphabet: &[&str], p: f64) -> Vec<String> {
    alphabet
        .iter()
        .filter(|_| rng.random_bool(p))
        .map(|l| l.to_string())
        .collect()
}

/// Small random multigraph: up to 12 nodes and 20 edges, self-loops and
/// parallel edges allowed, nodes carrying zero to three labels.
pub fn small_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.random_range(1..=12u32);
    let m = rng.random_range(0..=20u32);
    let mut b = Graph::builder();
    for v in 0..n {
        b.add_node(v, label_subset(rng, &NODE_LABELS[..3], 0.45));
    }
    for e in 0..m {
        let (s, d) = (rng.random_range(0..n), rng.random_range(0..n));
        b.add_edge(e, s, d, label_subset(rng, &EDGE_LABELS[..2], 0.5));
    }
    b.build().expect("generated ids are dense")
}

/// Connected subgraph of `g` (spanning tree plus at most three more edges)
/// with some labels dropped, so it embeds at least once.
fn extracted_query(rng: &mut ChaCha8Rng, g: &Graph, size: usize) -> QueryGraph {
    let mut nodes = vec![bbgraph::NodeId(rng.random_range(0..g.node_count() as u32))];
    let mut edges = Vec::new();
    while nodes.len() < size {
        let grow: Vec<_> = nodes
            .iter()
            .flat_map(|&v| g.incidences(v).iter())
            .filter(|i| !nodes.contains(&i.other))
            .copied()
            .collect();
        let Some(step) = grow.choose(rng) else { break };
        nodes.push(step.other);
        edges.push(step.edge);
    }
    let tree_edges = edges.len();
    for e in g.edge_ids() {
        let rec = g.edge(e);
        if edges.len() < tree_edges + 3
            && nodes.contains(&rec.src)
            && nodes.contains(&rec.dst)
            && !edges.contains(&e)
            && rng.random_bool(0.4)
        {
            edges.push(e);
        }
    }
    let local = |v| nodes.iter().position(|&x| x == v).unwrap() as u32;
    let keep = |rng: &mut ChaCha8Rng, names: Vec<&str>| -> Vec<String> {
        names
            .into_iter()
            .filter(|_| rng.random_bool(0.7))
            .map(str::to_owned)
            .collect()
    };
    let mut b = Graph::builder();
    for (i, &v) in nodes.iter().enumerate() {
        b.add_node(i as u32, keep(rng, g.label_names(g.node_labels(v))));
    }
    for (j, &e) in edges.iter().enumerate() {
        let rec = g.edge(e);
        b.add_edge(
            j as u32,
            local(rec.src),
            local(rec.dst),
            keep(rng, g.label_names(&rec.labels)),
        );
    }
    let start = rng.random_range(0..nodes.len() as u32);
    QueryGraph::new(b.build().unwrap(), Some(bbgraph::NodeId(start))).unwrap()
}

/// Random connected query: a random tree plus up to three extra edges,
/// labels drawn from an alphabet that includes one the databases never use.
fn random_query(rng: &mut ChaCha8Rng, size: usize) -> QueryGraph {
    let mut b = Graph::builder();
    for v in 0..size as u32 {
        let labels = if rng.random_bool(0.05) {
            vec!["Z".to_owned()]
        } else {
            label_subset(rng, &NODE_LABELS[..3], 0.3)
        };
        b.add_node(v, labels);
    }
    let mut id = 0;
    for v in 1..size as u32 {
        let w = rng.random_range(0..v);
        let (s, d) = if rng.random_bool(0.5) { (v, w) } else { (w, v) };
        b.add_edge(id, s, d, label_subset(rng, &EDGE_LABELS, 0.25));
        id += 1;
    }
    for _ in 0..rng.random_range(0..=3) {
        let (s, d) = (rng.random_range(0..size as u32), rng.random_range(0..size as u32));
        b.add_edge(id, s, d, label_subset(rng, &EDGE_LABELS[..2], 0.3));
        id += 1;
    }
    QueryGraph::new(b.build().unwrap(), None).unwrap()
}

/// One instance of the small corpus: database of at most 12 nodes and 20
/// edges, connected query of 1 to 5 nodes, extracted or random.
pub fn small_instance(seed: u64) -> (QueryGraph, Graph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = small_graph(&mut rng);
    let size = rng.random_range(1..=5usize);
    let q = if rng.random_bool(0.5) {
        extracted_query(&mut rng, &g, size)
    } else {
        random_query(&mut rng, size)
    };
    (q, g)
}

/// Generated 10k-node, 30k-edge database with an extracted query. Every
/// fourth instance allows self-loops and parallel edges; every fifth query is
/// perturbed so it may have no embedding.
pub fn large_instance(seed: u64) -> (QueryGraph, Graph) {
    let multi = seed.is_multiple_of(4);
    let spec = GenSpec {
        node_count: 10_000,
        edge_count: 30_000,
        node_label_alphabet: 8,
        edge_label_alphabet: 6,
        label_distribution: if seed.is_multiple_of(2) {
            LabelDistribution::Uniform
        } else {
            LabelDistribution::Zipf(1.0)
        },
        seed,
        allow_self_loops: multi,
        allow_parallel_edges: multi,
    };
    let g = generate_graph(&spec).unwrap().to_graph().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let nodes = rng.random_range(2..=6usize);
    let kind = if rng.random_bool(0.5) {
        QueryKind::Path { nodes }
    } else {
        QueryKind::Complex {
            nodes: nodes.max(3),
            extra_edges: rng.random_range(1..=2),
        }
    };
    let w = WorkloadSpec {
        query_kind: kind,
        count: 1,
        seed,
        perturb: seed.is_multiple_of(5),
    };
    let doc = extract_query(&g, &w)
        .or_else(|_| {
            extract_query(
                &g,
                &WorkloadSpec {
                    query_kind: QueryKind::Path { nodes: 3 },
                    ..w
                },
            )
        })
        .expect("a 10k-node random graph has 3-node paths");
    (doc.to_query().unwrap(), g)
}

/// Performance workload: 50k nodes, 150k edges, 12 node and 17 edge labels
/// drawn from a Zipf distribution, ten 5-node path queries and ten complex
/// queries of 4 to 7 nodes with at least one cycle.
pub fn perf_workload(seed: u64) -> (Graph, Vec<(String, QueryGraph)>) {
    let spec = GenSpec {
        node_count: 50_000,
        edge_count: 150_000,
        node_label_alphabet: 12,
        edge_label_alphabet: 17,
        label_distribution: LabelDistribution::Zipf(1.0),
        seed,
        allow_self_loops: false,
        allow_parallel_edges: false,
    };
    let g = generate_graph(&spec).unwrap().to_graph().unwrap();
    let mut queries = Vec::new();
    for i in 0..10u64 {
        let w = WorkloadSpec {
            query_kind: QueryKind::Path { nodes: 5 },
            count: 1,
            seed: seed + i,
            perturb: false,
        };
        queries.push((format!("path{i}"), extract_query(&g, &w).unwrap().to_query().unwrap()));
    }
    for i in 0..10u64 {
        let kind = QueryKind::Complex {
            nodes: 4 + (i as usize % 4),
            extra_edges: 1,
        };
        let w = WorkloadSpec {
            query_kind: kind,
            count: 1,
            seed: seed + 100 + i,
            perturb: false,
        };
        queries.push((
            format!("complex{i}"),
            extract_query(&g, &w).unwrap().to_query().unwrap(),
        ));
    }
    (g, queries)
}
