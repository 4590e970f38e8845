//! Immutable labeled directed multigraphs and their indexes.
//!
//! A [`Graph`] is built once from node and edge lists and never mutated. At
//! construction it interns labels, builds a per-label node index, a per-node
//! incidence list ordered by edge id, and a [`DegreeSignature`] per node.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::label::{LabelId, LabelSet, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Direction of an edge relative to an anchor node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Outgoing,
    Incoming,
}

impl Direction {
    #[inline]
    fn slot(self) -> usize {
        match self {
            Direction::Outgoing => 0,
            Direction::Incoming => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Node,
    Edge,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::Node => "node",
            ElementKind::Edge => "edge",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: ElementKind, id: u32 },
    #[error("{kind} ids are not dense: id {missing} is missing")]
    NonDenseIds { kind: ElementKind, missing: u32 },
    #[error("edge {edge} references missing node {node}")]
    DanglingEndpoint { edge: u32, node: u32 },
    #[error("unknown node {0}")]
    UnknownNode(u32),
    #[error("unknown edge {0}")]
    UnknownEdge(u32),
    #[error("edge {edge} is not incident to node {node}")]
    EdgeNotIncident { edge: u32, node: u32 },
    #[error("query graph has no nodes")]
    EmptyQuery,
    #[error("query graph is disconnected: node {unreachable} is not reachable from node {from}")]
    DisconnectedQuery { from: u32, unreachable: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub src: NodeId,
    pub dst: NodeId,
    pub labels: LabelSet,
}

impl EdgeRecord {
    pub fn is_self_loop(&self) -> bool {
        self.src == self.dst
    }

    /// The endpoint that is not `anchor`. For a self-loop this is the anchor itself.
    pub fn other_endpoint(&self, anchor: NodeId) -> NodeId {
        if self.src == anchor {
            self.dst
        } else {
            self.src
        }
    }

    /// Directions this edge realizes at `anchor`, as `(outgoing, incoming)`.
    pub fn directions_at(&self, anchor: NodeId) -> (bool, bool) {
        (self.src == anchor, self.dst == anchor)
    }
}

/// One entry of a node's incidence list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Incidence {
    pub edge: EdgeId,
    pub dir: Direction,
    pub other: NodeId,
}

/// Incident-edge counts of one node, keyed by edge label and direction.
///
/// An edge is counted once under each label it carries; a self-loop counts in
/// both directions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeSignature {
    totals: [u32; 2],
    counts: Vec<(LabelId, Direction, u32)>,
}

impl DegreeSignature {
    pub fn total(&self, dir: Direction) -> u32 {
        self.totals[dir.slot()]
    }

    pub fn count(&self, label: LabelId, dir: Direction) -> u32 {
        self.counts
            .binary_search_by(|&(l, d, _)| (l, d).cmp(&(label, dir)))
            .map(|i| self.counts[i].2)
            .unwrap_or(0)
    }

    /// Non-zero `(label, direction, count)` entries in ascending key order.
    pub fn entries(&self) -> &[(LabelId, Direction, u32)] {
        &self.counts
    }

    pub(crate) fn from_parts(totals: [u32; 2], mut counts: Vec<(LabelId, Direction, u32)>) -> Self {
        counts.sort_unstable_by_key(|&(l, d, _)| (l, d));
        DegreeSignature { totals, counts }
    }

    fn recount<'a>(incidences: &[Incidence], edge_labels: impl Fn(EdgeId) -> &'a LabelSet) -> Self {
        let mut totals = [0u32; 2];
        let mut counts: Vec<(LabelId, Direction, u32)> = Vec::new();
        for inc in incidences {
            totals[inc.dir.slot()] += 1;
            for &l in edge_labels(inc.edge).ids() {
                match counts.iter_mut().find(|(cl, cd, _)| *cl == l && *cd == inc.dir) {
                    Some(entry) => entry.2 += 1,
                    None => counts.push((l, inc.dir, 1)),
                }
            }
        }
        Self::from_parts(totals, counts)
    }

    /// Component-wise `self <= other` over totals and every key present in `self`.
    pub fn is_dominated_by(&self, other: &DegreeSignature) -> bool {
        if self.totals[0] > other.totals[0] || self.totals[1] > other.totals[1] {
            return false;
        }
        let mut theirs = other.counts.iter();
        'outer: for &(l, d, c) in &self.counts {
            for &(ol, od, oc) in theirs.by_ref() {
                match (ol, od).cmp(&(l, d)) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => {
                        if c > oc {
                            return false;
                        }
                        continue 'outer;
                    }
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }
}

/// Immutable labeled directed multigraph.
#[derive(Debug, Clone)]
pub struct Graph {
    vocabulary: Vocabulary,
    node_labels: Vec<LabelSet>,
    edges: Vec<EdgeRecord>,
    label_index: Vec<Vec<NodeId>>,
    adj_offsets: Vec<usize>,
    adjacency: Vec<Incidence>,
    signatures: Vec<DegreeSignature>,
    max_degree: usize,
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn node_count(&self) -> usize {
        self.node_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.node_labels.len() as u32).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        v.index() < self.node_labels.len()
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn node_labels(&self, v: NodeId) -> &LabelSet {
        &self.node_labels[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e.index()]
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    /// Incidence entries of `v`, ascending by edge id. A self-loop contributes an
    /// outgoing entry followed by an incoming one.
    #[inline]
    pub fn incidences(&self, v: NodeId) -> &[Incidence] {
        &self.adjacency[self.adj_offsets[v.index()]..self.adj_offsets[v.index() + 1]]
    }

    /// Number of incidence entries of `v` (in + out, self-loops twice).
    pub fn degree(&self, v: NodeId) -> usize {
        self.adj_offsets[v.index() + 1] - self.adj_offsets[v.index()]
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    #[inline]
    pub fn signature(&self, v: NodeId) -> &DegreeSignature {
        &self.signatures[v.index()]
    }

    pub fn degree_signature(&self, v: NodeId) -> Result<&DegreeSignature, GraphError> {
        self.signatures.get(v.index()).ok_or(GraphError::UnknownNode(v.0))
    }

    /// Nodes carrying `label`, ascending.
    pub fn nodes_with_label(&self, label: LabelId) -> &[NodeId] {
        self.label_index.get(label.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn label_names(&self, set: &LabelSet) -> Vec<&str> {
        set.ids().iter().map(|&l| self.vocabulary.name(l)).collect()
    }

    /// Recomputes the signature of `v` from the raw edge records.
    pub fn recount_signature(&self, v: NodeId) -> DegreeSignature {
        DegreeSignature::recount(self.incidences(v), |e| &self.edges[e.index()].labels)
    }

    /// Smallest node not reachable from `from` when edge direction is ignored.
    pub fn first_unreachable_from(&self, from: NodeId) -> Option<NodeId> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([from]);
        seen[from.index()] = true;
        while let Some(v) = queue.pop_front() {
            for inc in self.incidences(v) {
                if !seen[inc.other.index()] {
                    seen[inc.other.index()] = true;
                    queue.push_back(inc.other);
                }
            }
        }
        seen.iter().position(|s| !s).map(|i| NodeId(i as u32))
    }
}

/// Collects nodes and edges with string labels, then validates and indexes them.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    nodes: Vec<(u32, Vec<String>)>,
    edges: Vec<(u32, u32, u32, Vec<String>)>,
}

impl GraphBuilder {
    pub fn node<S: AsRef<str>>(mut self, id: u32, labels: impl IntoIterator<Item = S>) -> Self {
        self.add_node(id, labels);
        self
    }

    pub fn edge<S: AsRef<str>>(mut self, id: u32, src: u32, dst: u32, labels: impl IntoIterator<Item = S>) -> Self {
        self.add_edge(id, src, dst, labels);
        self
    }

    pub fn add_node<S: AsRef<str>>(&mut self, id: u32, labels: impl IntoIterator<Item = S>) {
        self.nodes
            .push((id, labels.into_iter().map(|s| s.as_ref().to_owned()).collect()));
    }

    pub fn add_edge<S: AsRef<str>>(&mut self, id: u32, src: u32, dst: u32, labels: impl IntoIterator<Item = S>) {
        self.edges.push((
            id,
            src,
            dst,
            labels.into_iter().map(|s| s.as_ref().to_owned()).collect(),
        ));
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        build_graph(self.nodes, self.edges)
    }
}

fn check_ids(ids: impl Iterator<Item = u32>, kind: ElementKind) -> Result<(), GraphError> {
    let mut sorted: Vec<u32> = ids.collect();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(GraphError::DuplicateId { kind, id: w[0] });
    }
    if let Some(missing) = sorted.iter().enumerate().position(|(i, &id)| id != i as u32) {
        return Err(GraphError::NonDenseIds {
            kind,
            missing: missing as u32,
        });
    }
    Ok(())
}

/// Builds a graph from `(id, labels)` nodes and `(id, src, dst, labels)` edges.
///
/// Ids of each kind must be exactly `0..n` in any order. Construction is
/// deterministic: label ids are assigned in order of first appearance, scanning
/// nodes by ascending id and then edges by ascending id.
pub fn build_graph(
    nodes: Vec<(u32, Vec<String>)>,
    edges: Vec<(u32, u32, u32, Vec<String>)>,
) -> Result<Graph, GraphError> {
    check_ids(nodes.iter().map(|n| n.0), ElementKind::Node)?;
    check_ids(edges.iter().map(|e| e.0), ElementKind::Edge)?;

    let n = nodes.len();
    let mut nodes = nodes;
    let mut edges = edges;
    nodes.sort_unstable_by_key(|n| n.0);
    edges.sort_unstable_by_key(|e| e.0);
    for &(id, src, dst, _) in &edges {
        for endpoint in [src, dst] {
            if endpoint as usize >= n {
                return Err(GraphError::DanglingEndpoint {
                    edge: id,
                    node: endpoint,
                });
            }
        }
    }

    let mut vocabulary = Vocabulary::new();
    let node_labels: Vec<LabelSet> = nodes
        .iter()
        .map(|(_, labels)| LabelSet::from_ids(labels.iter().map(|l| vocabulary.intern(l))))
        .collect();
    let edge_records: Vec<EdgeRecord> = edges
        .iter()
        .map(|(_, src, dst, labels)| EdgeRecord {
            src: NodeId(*src),
            dst: NodeId(*dst),
            labels: LabelSet::from_ids(labels.iter().map(|l| vocabulary.intern(l))),
        })
        .collect();

    let mut label_index = vec![Vec::new(); vocabulary.len()];
    for (v, labels) in node_labels.iter().enumerate() {
        for &l in labels.ids() {
            label_index[l.index()].push(NodeId(v as u32));
        }
    }

    // Counting sort into CSR; edges are visited in id order so each row stays sorted.
    let mut degree = vec![0usize; n];
    for e in &edge_records {
        degree[e.src.index()] += 1;
        degree[e.dst.index()] += 1;
    }
    let mut adj_offsets = Vec::with_capacity(n + 1);
    adj_offsets.push(0);
    for d in &degree {
        adj_offsets.push(adj_offsets.last().unwrap() + d);
    }
    let mut cursor = adj_offsets[..n].to_vec();
    let placeholder = Incidence {
        edge: EdgeId(0),
        dir: Direction::Outgoing,
        other: NodeId(0),
    };
    let mut adjacency = vec![placeholder; adj_offsets[n]];
    for (i, e) in edge_records.iter().enumerate() {
        let edge = EdgeId(i as u32);
        adjacency[cursor[e.src.index()]] = Incidence {
            edge,
            dir: Direction::Outgoing,
            other: e.dst,
        };
        cursor[e.src.index()] += 1;
        adjacency[cursor[e.dst.index()]] = Incidence {
            edge,
            dir: Direction::Incoming,
            other: e.src,
        };
        cursor[e.dst.index()] += 1;
    }

    let signatures = (0..n)
        .map(|v| {
            DegreeSignature::recount(&adjacency[adj_offsets[v]..adj_offsets[v + 1]], |e| {
                &edge_records[e.index()].labels
            })
        })
        .collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);

    Ok(Graph {
        vocabulary,
        node_labels,
        edges: edge_records,
        label_index,
        adj_offsets,
        adjacency,
        signatures,
        max_degree,
    })
}

/// A validated, weakly connected, non-empty pattern graph with a starting node.
#[derive(Debug, Clone)]
pub struct QueryGraph {
    graph: Graph,
    start: NodeId,
}

impl QueryGraph {
    /// Validates `graph` as a query. `start` defaults to node 0, the first node
    /// in input order.
    pub fn new(graph: Graph, start: Option<NodeId>) -> Result<Self, GraphError> {
        if graph.node_count() == 0 {
            return Err(GraphError::EmptyQuery);
        }
        let start = start.unwrap_or(NodeId(0));
        if !graph.contains_node(start) {
            return Err(GraphError::UnknownNode(start.0));
        }
        if let Some(unreachable) = graph.first_unreachable_from(start) {
            return Err(GraphError::DisconnectedQuery {
                from: start.0,
                unreachable: unreachable.0,
            });
        }
        Ok(QueryGraph { graph, start })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn start_node(&self) -> NodeId {
        self.start
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }
}

impl std::ops::Deref for QueryGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}
