//! Node and relationship compatibility tests used for pruning.
//!
//! A query node `u` may map to a database node `u'` only if `u'` carries every
//! label of `u` and, for every `(edge label, direction)` group and for both
//! direction totals, `u'` has at least as many incident edges as `u`. A query
//! edge `r` at anchor `u` may map to a database edge `r'` at anchor `u'` only
//! if `r'` carries every label of `r` and both realize a common direction at
//! their anchors. Both are necessary conditions, never sufficient ones.
//!
//! Query and database graphs intern labels independently, so query-side label
//! ids are first translated into the database vocabulary by a [`QueryBinding`].
//! A query label missing from the database makes the owning element
//! unmatchable.

use crate::graph::{DegreeSignature, EdgeId, Graph, GraphError, NodeId, QueryGraph};
use crate::label::{LabelSet, Vocabulary};

fn translate_labels(set: &LabelSet, from: &Vocabulary, to: &Vocabulary) -> Option<LabelSet> {
    let mut ids = Vec::with_capacity(set.len());
    for &l in set.ids() {
        ids.push(to.get(from.name(l))?);
    }
    Some(LabelSet::from_ids(ids))
}

fn translate_signature(sig: &DegreeSignature, from: &Vocabulary, to: &Vocabulary) -> Option<DegreeSignature> {
    use crate::graph::Direction::*;
    let mut counts = Vec::with_capacity(sig.entries().len());
    for &(l, d, c) in sig.entries() {
        counts.push((to.get(from.name(l))?, d, c));
    }
    Some(DegreeSignature::from_parts(
        [sig.total(Outgoing), sig.total(Incoming)],
        counts,
    ))
}

/// Query labels and signatures re-keyed into one database's vocabulary.
#[derive(Debug, Clone)]
pub struct QueryBinding<'a> {
    query: &'a QueryGraph,
    node_labels: Vec<Option<LabelSet>>,
    signatures: Vec<Option<DegreeSignature>>,
    edge_labels: Vec<Option<LabelSet>>,
}

impl<'a> QueryBinding<'a> {
    pub fn new(query: &'a QueryGraph, g: &Graph) -> Self {
        let (qv, gv) = (query.vocabulary(), g.vocabulary());
        let node_labels = query
            .nodes()
            .map(|u| translate_labels(query.node_labels(u), qv, gv))
            .collect();
        let signatures = query
            .nodes()
            .map(|u| translate_signature(query.signature(u), qv, gv))
            .collect();
        let edge_labels = query
            .edges()
            .iter()
            .map(|e| translate_labels(&e.labels, qv, gv))
            .collect();
        QueryBinding {
            query,
            node_labels,
            signatures,
            edge_labels,
        }
    }

    pub fn query(&self) -> &'a QueryGraph {
        self.query
    }

    /// Query node labels in database ids, `None` if some label is absent from the database.
    pub fn node_labels(&self, u: NodeId) -> Option<&LabelSet> {
        self.node_labels[u.index()].as_ref()
    }

    /// Whether `u` can possibly match anything in the bound database.
    pub fn node_matchable(&self, u: NodeId) -> bool {
        self.node_labels[u.index()].is_some() && self.signatures[u.index()].is_some()
    }

    /// Matching node principle for `u` (query) and `v` (database).
    #[inline]
    pub fn node_compatible(&self, u: NodeId, g: &Graph, v: NodeId) -> bool {
        match (&self.node_labels[u.index()], &self.signatures[u.index()]) {
            (Some(labels), Some(sig)) => labels.is_subset(g.node_labels(v)) && sig.is_dominated_by(g.signature(v)),
            _ => false,
        }
    }

    /// Matching relationship principle for query edge `r` anchored at `u` and
    /// database edge `rp` anchored at `up`. Anchors are assumed incident.
    #[inline]
    pub fn edge_compatible(&self, r: EdgeId, u: NodeId, g: &Graph, rp: EdgeId, up: NodeId) -> bool {
        let Some(labels) = &self.edge_labels[r.index()] else {
            return false;
        };
        let db = g.edge(rp);
        if !labels.is_subset(&db.labels) {
            return false;
        }
        let (q_out, q_in) = self.query.edge(r).directions_at(u);
        let (d_out, d_in) = db.directions_at(up);
        (q_out && d_out) || (q_in && d_in)
    }
}

/// Matching node principle: `L_u ⊆ L_u'` and the degree signature of `u` is
/// dominated by that of `u_prime`.
pub fn mnp(q: &QueryGraph, u: NodeId, g: &Graph, u_prime: NodeId) -> Result<bool, GraphError> {
    if !q.contains_node(u) {
        return Err(GraphError::UnknownNode(u.0));
    }
    if !g.contains_node(u_prime) {
        return Err(GraphError::UnknownNode(u_prime.0));
    }
    let (qv, gv) = (q.vocabulary(), g.vocabulary());
    let Some(labels) = translate_labels(q.node_labels(u), qv, gv) else {
        return Ok(false);
    };
    let Some(sig) = translate_signature(q.signature(u), qv, gv) else {
        return Ok(false);
    };
    Ok(labels.is_subset(g.node_labels(u_prime)) && sig.is_dominated_by(g.signature(u_prime)))
}

/// Matching relationship principle: `L_r ⊆ L_r'` and `r` at `u` shares a
/// direction with `r_prime` at `u_prime` (a self-loop realizes both).
pub fn mrp(
    q: &QueryGraph,
    r: EdgeId,
    u: NodeId,
    g: &Graph,
    r_prime: EdgeId,
    u_prime: NodeId,
) -> Result<bool, GraphError> {
    incident(q, r, u)?;
    incident(g, r_prime, u_prime)?;
    let Some(labels) = translate_labels(&q.edge(r).labels, q.vocabulary(), g.vocabulary()) else {
        return Ok(false);
    };
    let db = g.edge(r_prime);
    let (q_out, q_in) = q.edge(r).directions_at(u);
    let (d_out, d_in) = db.directions_at(u_prime);
    Ok(labels.is_subset(&db.labels) && ((q_out && d_out) || (q_in && d_in)))
}

fn incident(g: &Graph, e: EdgeId, v: NodeId) -> Result<(), GraphError> {
    if e.index() >= g.edge_count() {
        return Err(GraphError::UnknownEdge(e.0));
    }
    let rec = g.edge(e);
    if rec.src != v && rec.dst != v {
        return Err(GraphError::EdgeNotIncident { edge: e.0, node: v.0 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1_graph, fig1_query};

    #[test]
    fn fig1_u0_rejects_v9_on_outgoing_degree() {
        let (q, g) = (fig1_query(), fig1_graph());
        assert!(!mnp(&q, NodeId(0), &g, NodeId(9)).unwrap());
        assert!(mnp(&q, NodeId(0), &g, NodeId(1)).unwrap());
        assert!(mnp(&q, NodeId(0), &g, NodeId(6)).unwrap());
    }

    #[test]
    fn fig1_u2_accepts_v3() {
        let (q, g) = (fig1_query(), fig1_graph());
        assert!(mnp(&q, NodeId(2), &g, NodeId(3)).unwrap());
    }

    #[test]
    fn node_against_its_own_copy() {
        let q = fig1_query();
        let copy = q.graph().clone();
        for u in q.nodes() {
            assert!(mnp(&q, u, &copy, u).unwrap());
        }
    }

    #[test]
    fn empty_node_matches_everything() {
        let q = QueryGraph::new(Graph::builder().node(0, Vec::<&str>::new()).build().unwrap(), None).unwrap();
        let g = fig1_graph();
        for v in g.nodes() {
            assert!(mnp(&q, NodeId(0), &g, v).unwrap());
        }
    }

    #[test]
    fn unknown_label_never_matches() {
        let q = QueryGraph::new(Graph::builder().node(0, ["Z"]).build().unwrap(), None).unwrap();
        let g = fig1_graph();
        assert!(g.nodes().all(|v| !mnp(&q, NodeId(0), &g, v).unwrap()));
        assert_eq!(mnp(&q, NodeId(3), &g, NodeId(0)), Err(GraphError::UnknownNode(3)));
    }

    #[test]
    fn fig1_incoming_edges_match() {
        let (q, g) = (fig1_query(), fig1_graph());
        // query e1 = u1 -> u0 at u0, database e0 = v0 -> v1 at v1
        assert!(mrp(&q, EdgeId(1), NodeId(0), &g, EdgeId(0), NodeId(1)).unwrap());
        // query e0 = u0 -> u2 is outgoing at u0; database e0 is incoming at v1
        assert!(!mrp(&q, EdgeId(0), NodeId(0), &g, EdgeId(0), NodeId(1)).unwrap());
        assert_eq!(
            mrp(&q, EdgeId(3), NodeId(0), &g, EdgeId(0), NodeId(1)),
            Err(GraphError::EdgeNotIncident { edge: 3, node: 0 })
        );
    }

    #[test]
    fn edge_label_subset() {
        let q = QueryGraph::new(
            Graph::builder()
                .node(0, ["P"])
                .node(1, ["P"])
                .edge(0, 0, 1, ["F"])
                .build()
                .unwrap(),
            None,
        )
        .unwrap();
        let g = Graph::builder()
            .node(0, ["P"])
            .node(1, ["P"])
            .edge(0, 0, 1, ["F", "Verified"])
            .edge(1, 0, 1, ["M"])
            .build()
            .unwrap();
        assert!(mrp(&q, EdgeId(0), NodeId(0), &g, EdgeId(0), NodeId(0)).unwrap());
        assert!(!mrp(&q, EdgeId(0), NodeId(0), &g, EdgeId(1), NodeId(0)).unwrap());
    }

    #[test]
    fn self_loops_realize_both_directions() {
        let q = QueryGraph::new(
            Graph::builder().node(0, ["X"]).edge(0, 0, 0, ["r"]).build().unwrap(),
            None,
        )
        .unwrap();
        let g = Graph::builder()
            .node(0, ["X"])
            .node(1, ["X"])
            .edge(0, 0, 1, ["r"])
            .edge(1, 1, 0, ["r"])
            .build()
            .unwrap();
        assert!(mrp(&q, EdgeId(0), NodeId(0), &g, EdgeId(0), NodeId(0)).unwrap());
        assert!(mrp(&q, EdgeId(0), NodeId(0), &g, EdgeId(1), NodeId(0)).unwrap());
    }
}
