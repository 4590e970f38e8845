//! Global-candidate matcher: filter candidates for every query node across the
//! whole database first, then backtrack over query nodes in id order.
//!
//! It uses the same node principle as the local search but never restricts a
//! later query node to the neighbourhood of earlier matches, so each level
//! scans the full candidate list of its query node.

use std::time::Instant;

use crate::embedding::Embedding;
use crate::graph::{EdgeId, Graph, NodeId, QueryGraph};
use crate::matcher::MatchError;
use crate::principles::QueryBinding;

struct Global<'a> {
    q: &'a QueryGraph,
    g: &'a Graph,
    binding: QueryBinding<'a>,
    candidates: Vec<Vec<NodeId>>,
    map: Vec<NodeId>,
    used: Vec<bool>,
    out: Vec<Embedding>,
    deadline: Option<Instant>,
    ticks: u32,
}

impl Global<'_> {
    /// Database edges realizing query edge `r` under the current node map.
    fn edge_options(&self, r: EdgeId, out: &mut Vec<EdgeId>) {
        let qe = self.q.edge(r);
        let (src, dst) = (self.map[qe.src.index()], self.map[qe.dst.index()]);
        let mut last = None;
        for inc in self.g.incidences(src) {
            if inc.dir == crate::graph::Direction::Outgoing
                && inc.other == dst
                && Some(inc.edge) != last
                && self.binding.edge_compatible(r, qe.src, self.g, inc.edge, src)
            {
                out.push(inc.edge);
            }
            last = Some(inc.edge);
        }
    }

    /// Every query edge between `u` and an already assigned node has at least one realization.
    fn consistent(&self, u: NodeId, scratch: &mut Vec<EdgeId>) -> bool {
        for inc in self.q.incidences(u) {
            if inc.other > u {
                continue;
            }
            scratch.clear();
            self.edge_options(inc.edge, scratch);
            if scratch.is_empty() {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, u: usize) -> Result<(), MatchError> {
        if u == self.q.node_count() {
            self.emit_edge_assignments();
            return Ok(());
        }
        let qu = NodeId(u as u32);
        let mut scratch = Vec::new();
        for i in 0..self.candidates[u].len() {
            self.ticks = self.ticks.wrapping_add(1);
            if self.ticks & 0xfff == 0 {
                if let Some(deadline) = self.deadline {
                    if Instant::now() >= deadline {
                        return Err(MatchError::DeadlineExceeded { found: self.out.len() });
                    }
                }
            }
            let v = self.candidates[u][i];
            if self.used[v.index()] {
                continue;
            }
            self.map[u] = v;
            if !self.consistent(qu, &mut scratch) {
                continue;
            }
            self.used[v.index()] = true;
            let res = self.assign(u + 1);
            self.used[v.index()] = false;
            res?;
        }
        Ok(())
    }

    fn emit_edge_assignments(&mut self) {
        let options: Vec<Vec<EdgeId>> = self
            .q
            .edge_ids()
            .map(|r| {
                let mut v = Vec::new();
                self.edge_options(r, &mut v);
                v
            })
            .collect();
        let mut chosen = Vec::with_capacity(options.len());
        self.extend_edges(&options, &mut chosen);
    }

    fn extend_edges(&mut self, options: &[Vec<EdgeId>], chosen: &mut Vec<EdgeId>) {
        if chosen.len() == options.len() {
            self.out.push(Embedding {
                node_map: self.map.clone(),
                edge_map: chosen.clone(),
            });
            return;
        }
        for &e in &options[chosen.len()] {
            if !chosen.contains(&e) {
                chosen.push(e);
                self.extend_edges(options, chosen);
                chosen.pop();
            }
        }
    }
}

/// Finds every embedding using globally filtered candidates.
pub fn global_candidate_match(q: &QueryGraph, g: &Graph) -> Vec<Embedding> {
    global_candidate_match_until(q, g, None).expect("no deadline was set")
}

/// [`global_candidate_match`] that gives up once `deadline` passes.
pub fn global_candidate_match_until(
    q: &QueryGraph,
    g: &Graph,
    deadline: Option<Instant>,
) -> Result<Vec<Embedding>, MatchError> {
    let binding = QueryBinding::new(q, g);
    let candidates: Vec<Vec<NodeId>> = q
        .nodes()
        .map(|u| g.nodes().filter(|&v| binding.node_compatible(u, g, v)).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let mut search = Global {
        q,
        g,
        binding,
        candidates,
        map: vec![NodeId(0); q.node_count()],
        used: vec![false; g.node_count()],
        out: Vec::new(),
        deadline,
        ticks: 0,
    };
    search.assign(0)?;
    Ok(search.out)
}
