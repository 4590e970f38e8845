//! Embeddings and an independent validator for them.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::graph::{EdgeId, Graph, NodeId};

/// One exact match: `node_map[u]` is the database node of query node `u`, and
/// `edge_map[r]` the database edge of query edge `r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding {
    pub node_map: Vec<NodeId>,
    pub edge_map: Vec<EdgeId>,
}

impl Embedding {
    pub fn node(&self, u: NodeId) -> NodeId {
        self.node_map[u.index()]
    }

    pub fn edge(&self, r: EdgeId) -> EdgeId {
        self.edge_map[r.index()]
    }

    /// Matched database nodes and edges, ignoring which query element maps where.
    pub fn image(&self) -> (BTreeSet<NodeId>, BTreeSet<EdgeId>) {
        (
            self.node_map.iter().copied().collect(),
            self.edge_map.iter().copied().collect(),
        )
    }
}

/// Sorted copy of `embeddings`, for order-insensitive comparison.
pub fn canonical_set(embeddings: &[Embedding]) -> Vec<Embedding> {
    let mut v = embeddings.to_vec();
    v.sort_unstable();
    v
}

/// Keeps the first embedding for each distinct matched subgraph.
pub fn dedup_by_image(embeddings: &[Embedding]) -> Vec<Embedding> {
    let mut seen = HashSet::new();
    embeddings.iter().filter(|e| seen.insert(e.image())).cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingViolation {
    #[error("node map has {found} entries, query has {expected} nodes")]
    NodeMapSize { expected: usize, found: usize },
    #[error("edge map has {found} entries, query has {expected} edges")]
    EdgeMapSize { expected: usize, found: usize },
    #[error("query node {query} maps to missing database node {target}")]
    UnknownNode { query: u32, target: u32 },
    #[error("query edge {query} maps to missing database edge {target}")]
    UnknownEdge { query: u32, target: u32 },
    #[error("node map not injective: query nodes {first} and {second} share a target")]
    NodeNotInjective { first: u32, second: u32 },
    #[error("edge map not injective: query edges {first} and {second} share a target")]
    EdgeNotInjective { first: u32, second: u32 },
    #[error("query node {query}: labels are not a subset of the target's labels")]
    NodeLabels { query: u32 },
    #[error("query edge {query}: labels are not a subset of the target's labels")]
    EdgeLabels { query: u32 },
    #[error("query edge {query}: target edge endpoints or direction disagree with the node map")]
    Endpoints { query: u32 },
}

fn labels_of<'g>(g: &'g Graph, set: &crate::label::LabelSet) -> BTreeSet<&'g str> {
    set.ids().iter().map(|&l| g.vocabulary().name(l)).collect()
}

/// Re-checks an embedding against the raw graphs: totality, injectivity, label
/// containment by name, and edge endpoint/direction consistency.
pub fn validate_embedding(query: &Graph, g: &Graph, emb: &Embedding) -> Result<(), EmbeddingViolation> {
    if emb.node_map.len() != query.node_count() {
        return Err(EmbeddingViolation::NodeMapSize {
            expected: query.node_count(),
            found: emb.node_map.len(),
        });
    }
    if emb.edge_map.len() != query.edge_count() {
        return Err(EmbeddingViolation::EdgeMapSize {
            expected: query.edge_count(),
            found: emb.edge_map.len(),
        });
    }
    let mut owner = std::collections::HashMap::new();
    for (u, &v) in emb.node_map.iter().enumerate() {
        if v.index() >= g.node_count() {
            return Err(EmbeddingViolation::UnknownNode {
                query: u as u32,
                target: v.0,
            });
        }
        if let Some(prev) = owner.insert(v, u) {
            return Err(EmbeddingViolation::NodeNotInjective {
                first: prev as u32,
                second: u as u32,
            });
        }
        let ql = labels_of(query, query.node_labels(NodeId(u as u32)));
        let gl = labels_of(g, g.node_labels(v));
        if !ql.is_subset(&gl) {
            return Err(EmbeddingViolation::NodeLabels { query: u as u32 });
        }
    }
    let mut owner = std::collections::HashMap::new();
    for (r, &e) in emb.edge_map.iter().enumerate() {
        if e.index() >= g.edge_count() {
            return Err(EmbeddingViolation::UnknownEdge {
                query: r as u32,
                target: e.0,
            });
        }
        if let Some(prev) = owner.insert(e, r) {
            return Err(EmbeddingViolation::EdgeNotInjective {
                first: prev as u32,
                second: r as u32,
            });
        }
        let qe = &query.edges()[r];
        let de = g.edge(e);
        if !labels_of(query, &qe.labels).is_subset(&labels_of(g, &de.labels)) {
            return Err(EmbeddingViolation::EdgeLabels { query: r as u32 });
        }
        if emb.node_map[qe.src.index()] != de.src || emb.node_map[qe.dst.index()] != de.dst {
            return Err(EmbeddingViolation::Endpoints { query: r as u32 });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1_graph, fig1_query};

    fn first_fig1() -> Embedding {
        Embedding {
            node_map: [1, 0, 3, 4].map(NodeId).to_vec(),
            edge_map: [3, 0, 1, 6].map(EdgeId).to_vec(),
        }
    }

    #[test]
    fn accepts_known_match() {
        let (q, g) = (fig1_query(), fig1_graph());
        assert_eq!(validate_embedding(&q, &g, &first_fig1()), Ok(()));
    }

    #[test]
    fn rejects_each_clause() {
        let (q, g) = (fig1_query(), fig1_graph());

        let mut e = first_fig1();
        e.node_map[1] = NodeId(1);
        assert_eq!(
            validate_embedding(&q, &g, &e),
            Err(EmbeddingViolation::NodeNotInjective { first: 0, second: 1 })
        );

        let mut e = first_fig1();
        e.node_map[3] = NodeId(5);
        assert_eq!(
            validate_embedding(&q, &g, &e),
            Err(EmbeddingViolation::NodeLabels { query: 3 })
        );

        let mut e = first_fig1();
        e.edge_map[2] = EdgeId(5);
        assert_eq!(
            validate_embedding(&q, &g, &e),
            Err(EmbeddingViolation::Endpoints { query: 2 })
        );

        let mut e = first_fig1();
        e.edge_map[2] = EdgeId(3);
        assert_eq!(
            validate_embedding(&q, &g, &e),
            Err(EmbeddingViolation::EdgeNotInjective { first: 0, second: 2 })
        );

        let mut e = first_fig1();
        e.edge_map.pop();
        assert!(matches!(
            validate_embedding(&q, &g, &e),
            Err(EmbeddingViolation::EdgeMapSize { .. })
        ));

        let mut e = first_fig1();
        e.node_map[0] = NodeId(40);
        assert!(matches!(
            validate_embedding(&q, &g, &e),
            Err(EmbeddingViolation::UnknownNode { .. })
        ));
    }

    #[test]
    fn dedup_keeps_first_per_subgraph() {
        let a = Embedding {
            node_map: vec![NodeId(0), NodeId(1)],
            edge_map: vec![EdgeId(0), EdgeId(1)],
        };
        let b = Embedding {
            node_map: vec![NodeId(1), NodeId(0)],
            edge_map: vec![EdgeId(1), EdgeId(0)],
        };
        let c = Embedding {
            node_map: vec![NodeId(1), NodeId(2)],
            edge_map: vec![EdgeId(2), EdgeId(3)],
        };
        assert_eq!(dedup_by_image(&[a.clone(), b, c.clone()]), vec![a, c]);
    }
}
