//! The four-node query and ten-node database used throughout the docs and tests.
//!
//! The query is `u0:A -> u2:B`, `u1:B -> u0`, `u1 -> u2`, `u2 -> u3:D`. It has
//! exactly two embeddings in the database: `{u0→1, u1→0, u2→3, u3→4}` and
//! `{u0→1, u1→2, u2→3, u3→4}`. All edges are unlabeled.

use crate::graph::{Graph, QueryGraph};

const DB_NODES: [&str; 10] = ["B", "A", "B", "B", "D", "C", "A", "B", "D", "A"];
const DB_EDGES: [(u32, u32); 12] = [
    (0, 1),
    (0, 3),
    (0, 5),
    (1, 3),
    (2, 1),
    (2, 3),
    (3, 4),
    (6, 0),
    (7, 0),
    (7, 6),
    (7, 8),
    (7, 9),
];

const QUERY_NODES: [&str; 4] = ["A", "B", "B", "D"];
const QUERY_EDGES: [(u32, u32); 4] = [(0, 2), (1, 0), (1, 2), (2, 3)];

fn build(nodes: &[&str], edges: &[(u32, u32)]) -> Graph {
    let mut b = Graph::builder();
    for (i, label) in nodes.iter().enumerate() {
        b.add_node(i as u32, [*label]);
    }
    for (i, &(s, d)) in edges.iter().enumerate() {
        b.add_edge(i as u32, s, d, Vec::<&str>::new());
    }
    b.build().expect("fixture is well formed")
}

pub fn fig1_graph() -> Graph {
    build(&DB_NODES, &DB_EDGES)
}

pub fn fig1_query() -> QueryGraph {
    QueryGraph::new(build(&QUERY_NODES, &QUERY_EDGES), None).expect("fixture query is connected")
}
