//! Exhaustive enumeration straight from the definition of a subgraph
//! isomorphism. Only suitable for tiny instances; used as ground truth.

use std::time::Instant;

use thiserror::Error;

use crate::embedding::Embedding;
use crate::graph::{EdgeId, Graph, NodeId, QueryGraph};
use crate::label::{LabelId, LabelSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Complete node maps the oracle may test before giving up.
    pub max_mappings_explored: u64,
    pub deadline: Option<Instant>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_mappings_explored: 10_000_000,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle budget of {limit} node maps exhausted")]
    BudgetExceeded { limit: u64 },
    #[error("oracle deadline passed")]
    DeadlineExceeded,
}

/// Query labels looked up by name in the database vocabulary; `None` marks a
/// label the database never uses.
fn labels_by_name(q: &Graph, set: &LabelSet, g: &Graph) -> Vec<Option<LabelId>> {
    set.ids()
        .iter()
        .map(|&l| g.vocabulary().get(q.vocabulary().name(l)))
        .collect()
}

fn contains_all(wanted: &[Option<LabelId>], have: &LabelSet) -> bool {
    wanted.iter().all(|l| l.is_some_and(|l| have.contains(l)))
}

struct Oracle<'a> {
    q: &'a QueryGraph,
    g: &'a Graph,
    node_labels: Vec<Vec<Option<LabelId>>>,
    edge_labels: Vec<Vec<Option<LabelId>>>,
    budget: u64,
    deadline: Option<Instant>,
    explored: u64,
    map: Vec<NodeId>,
    used: Vec<bool>,
    out: Vec<Embedding>,
}

impl Oracle<'_> {
    fn assign(&mut self, u: usize) -> Result<(), OracleError> {
        if u == self.q.node_count() {
            self.explored += 1;
            if self.explored > self.budget {
                return Err(OracleError::BudgetExceeded { limit: self.budget });
            }
            if self.explored.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(OracleError::DeadlineExceeded);
            }
            self.accept();
            return Ok(());
        }
        for v in 0..self.g.node_count() {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.map[u] = NodeId(v as u32);
            let res = self.assign(u + 1);
            self.used[v] = false;
            res?;
        }
        Ok(())
    }

    fn accept(&mut self) {
        for (u, wanted) in self.node_labels.iter().enumerate() {
            if !contains_all(wanted, self.g.node_labels(self.map[u])) {
                return;
            }
        }
        let mut options: Vec<Vec<EdgeId>> = Vec::with_capacity(self.q.edge_count());
        for (r, qe) in self.q.edges().iter().enumerate() {
            let (src, dst) = (self.map[qe.src.index()], self.map[qe.dst.index()]);
            let fits: Vec<EdgeId> = self
                .g
                .edge_ids()
                .filter(|&e| {
                    let de = self.g.edge(e);
                    de.src == src && de.dst == dst && contains_all(&self.edge_labels[r], &de.labels)
                })
                .collect();
            if fits.is_empty() {
                return;
            }
            options.push(fits);
        }
        let mut chosen = Vec::with_capacity(options.len());
        self.assign_edges(&options, &mut chosen);
    }

    fn assign_edges(&mut self, options: &[Vec<EdgeId>], chosen: &mut Vec<EdgeId>) {
        let r = chosen.len();
        if r == options.len() {
            self.out.push(Embedding {
                node_map: self.map.clone(),
                edge_map: chosen.clone(),
            });
            return;
        }
        for &e in &options[r] {
            if chosen.contains(&e) {
                continue;
            }
            chosen.push(e);
            self.assign_edges(options, chosen);
            chosen.pop();
        }
    }
}

/// Tests every injective node map in lexicographic order and, for each that
/// respects node labels, every injective assignment of compatible edges.
pub fn oracle_enumerate(q: &QueryGraph, g: &Graph, budget: OracleBudget) -> Result<Vec<Embedding>, OracleError> {
    let mut oracle = Oracle {
        q,
        g,
        node_labels: q.nodes().map(|u| labels_by_name(q, q.node_labels(u), g)).collect(),
        edge_labels: q.edges().iter().map(|e| labels_by_name(q, &e.labels, g)).collect(),
        budget: budget.max_mappings_explored,
        deadline: budget.deadline,
        explored: 0,
        map: vec![NodeId(0); q.node_count()],
        used: vec![false; g.node_count()],
        out: Vec::new(),
    };
    oracle.assign(0)?;
    Ok(oracle.out)
}
