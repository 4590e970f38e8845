use crate::graph::{EdgeId, NodeId};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Undo {
    Push,
    Pop(NodeId, NodeId),
    Node(NodeId),
    Edge(EdgeId),
}

/// Restore point taken by [`MatchState::snapshot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateSnapshot(usize);

/// Search state: the stack of node pairs awaiting branching and the matched
/// node and edge maps.
///
/// Every mutation is journaled, so [`restore`](MatchState::restore) rewinds to
/// a snapshot in time proportional to the work done since it was taken. The
/// matched maps are indexed by query element; reverse lookups scan them, which
/// is cheap for query-sized maps and keeps the state independent of the
/// database size.
#[derive(Debug, Clone)]
pub struct MatchState {
    stack: Vec<(NodeId, NodeId)>,
    node_image: Vec<u32>,
    edge_image: Vec<u32>,
    journal: Vec<Undo>,
}

/// Plain copy of the observable state, used to audit restores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateContent {
    pub stack: Vec<(NodeId, NodeId)>,
    pub v_matched: Vec<Option<NodeId>>,
    pub e_matched: Vec<Option<EdgeId>>,
}

impl MatchState {
    pub fn new(query_nodes: usize, query_edges: usize) -> Self {
        MatchState {
            stack: Vec::with_capacity(query_nodes),
            node_image: vec![NONE; query_nodes],
            edge_image: vec![NONE; query_edges],
            journal: Vec::new(),
        }
    }

    pub fn push(&mut self, u: NodeId, v: NodeId) {
        self.stack.push((u, v));
        self.journal.push(Undo::Push);
    }

    pub fn pop(&mut self) -> Option<(NodeId, NodeId)> {
        let top = self.stack.pop()?;
        self.journal.push(Undo::Pop(top.0, top.1));
        Some(top)
    }

    pub fn stack(&self) -> &[(NodeId, NodeId)] {
        &self.stack
    }

    /// Records `<u, v>` in the node map. Both sides must be unmatched.
    pub fn match_node(&mut self, u: NodeId, v: NodeId) {
        debug_assert_eq!(self.node_image[u.index()], NONE);
        debug_assert!(self.query_node_of(v).is_none());
        self.node_image[u.index()] = v.0;
        self.journal.push(Undo::Node(u));
    }

    /// Records `<r, e>` in the edge map. Both sides must be unmatched.
    pub fn match_edge(&mut self, r: EdgeId, e: EdgeId) {
        debug_assert_eq!(self.edge_image[r.index()], NONE);
        debug_assert!(self.query_edge_of(e).is_none());
        self.edge_image[r.index()] = e.0;
        self.journal.push(Undo::Edge(r));
    }

    #[inline]
    pub fn image_of(&self, u: NodeId) -> Option<NodeId> {
        match self.node_image[u.index()] {
            NONE => None,
            v => Some(NodeId(v)),
        }
    }

    #[inline]
    pub fn query_node_of(&self, v: NodeId) -> Option<NodeId> {
        self.node_image.iter().position(|&x| x == v.0).map(|i| NodeId(i as u32))
    }

    #[inline]
    pub fn edge_image_of(&self, r: EdgeId) -> Option<EdgeId> {
        match self.edge_image[r.index()] {
            NONE => None,
            e => Some(EdgeId(e)),
        }
    }

    #[inline]
    pub fn query_edge_of(&self, e: EdgeId) -> Option<EdgeId> {
        self.edge_image.iter().position(|&x| x == e.0).map(|i| EdgeId(i as u32))
    }

    #[inline]
    pub fn edge_is_matched(&self, r: EdgeId) -> bool {
        self.edge_image[r.index()] != NONE
    }

    pub fn snapshot(&self) -> StateSnapshot {
        StateSnapshot(self.journal.len())
    }

    /// Rewinds every push, pop and match made since `snap`.
    pub fn restore(&mut self, snap: StateSnapshot) {
        while self.journal.len() > snap.0 {
            match self.journal.pop().expect("journal longer than snapshot") {
                Undo::Push => {
                    self.stack.pop();
                }
                Undo::Pop(u, v) => self.stack.push((u, v)),
                Undo::Node(u) => self.node_image[u.index()] = NONE,
                Undo::Edge(r) => self.edge_image[r.index()] = NONE,
            }
        }
    }

    /// Whether the stack and both maps are empty.
    pub fn is_clean(&self) -> bool {
        self.stack.is_empty()
            && self.node_image.iter().all(|&x| x == NONE)
            && self.edge_image.iter().all(|&x| x == NONE)
    }

    pub fn clear(&mut self) {
        self.stack.clear();
        self.node_image.fill(NONE);
        self.edge_image.fill(NONE);
        self.journal.clear();
    }

    pub fn content(&self) -> StateContent {
        StateContent {
            stack: self.stack.clone(),
            v_matched: (0..self.node_image.len())
                .map(|u| self.image_of(NodeId(u as u32)))
                .collect(),
            e_matched: (0..self.edge_image.len())
                .map(|r| self.edge_image_of(EdgeId(r as u32)))
                .collect(),
        }
    }

    pub(crate) fn node_map(&self) -> Vec<NodeId> {
        self.node_image.iter().map(|&v| NodeId(v)).collect()
    }

    pub(crate) fn edge_map(&self) -> Vec<EdgeId> {
        self.edge_image.iter().map(|&e| EdgeId(e)).collect()
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.node_image.iter().all(|&x| x != NONE) && self.edge_image.iter().all(|&x| x != NONE)
    }
}
