//! Local-candidate branch-and-bound search with backtracking.
//!
//! Candidates are filtered globally only for the starting query node. Every
//! other query node and edge is matched inside the neighbourhood of an already
//! matched pair: popping `<u, u'>` from the stack, the search collects, for each
//! still-unmatched query edge `r_i` at `u`, the edges at `u'` that pass the
//! relationship principle, then tries every combination of them. Each tried
//! edge pair must agree on its far endpoints ([`check`]); a newly implied node
//! pair is pushed for later branching. When the stack runs dry every query
//! element is matched and an embedding is recorded. The search then keeps
//! backtracking until all combinations are exhausted.

mod state;

use std::num::NonZeroUsize;
use std::ops::ControlFlow;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::Embedding;
use crate::graph::{EdgeId, Graph, NodeId, QueryGraph};
use crate::principles::QueryBinding;

pub use state::{MatchState, StateContent, StateSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartStrategy {
    /// The query's designated start node.
    #[default]
    FirstNode,
    /// The query node with the fewest label-compatible database nodes.
    RarestLabel,
}

#[derive(Debug, Clone, Default)]
pub struct SearchConfig {
    pub start_strategy: StartStrategy,
    /// Stop after this many embeddings.
    pub result_limit: Option<NonZeroUsize>,
    pub collect_counters: bool,
    /// Abort with [`MatchError::DeadlineExceeded`] once this instant passes.
    pub deadline: Option<Instant>,
    /// Compare every restore against a full copy of the state taken at the
    /// snapshot; mismatches land in [`SearchCounters::restore_mismatches`].
    pub audit_restores: bool,
}

/// Instrumentation gathered during one search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounters {
    pub start_candidates: u64,
    pub search_calls: u64,
    pub branch_calls: u64,
    pub checks: u64,
    pub backtracks: u64,
    pub max_depth: u64,
    pub peak_candidate_cells: u64,
    pub live_candidate_cells: u64,
    pub embeddings: u64,
    pub restore_mismatches: u64,
    pub unclean_finishes: u64,
}

impl SearchCounters {
    fn merge(&mut self, other: &SearchCounters) {
        self.start_candidates += other.start_candidates;
        self.search_calls += other.search_calls;
        self.branch_calls += other.branch_calls;
        self.checks += other.checks;
        self.backtracks += other.backtracks;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.peak_candidate_cells = self.peak_candidate_cells.max(other.peak_candidate_cells);
        self.live_candidate_cells += other.live_candidate_cells;
        self.embeddings += other.embeddings;
        self.restore_mismatches += other.restore_mismatches;
        self.unclean_finishes += other.unclean_finishes;
    }
}

/// Upper bound on simultaneously live relationship-candidate cells:
/// `|E_Q| × deg_G^max`.
pub fn candidate_cell_bound(q: &QueryGraph, g: &Graph) -> u64 {
    q.edge_count() as u64 * g.max_degree() as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    pub embeddings: Vec<Embedding>,
    pub counters: Option<SearchCounters>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("deadline exceeded after {found} embeddings")]
    DeadlineExceeded { found: usize },
}

/// Picks the query node that seeds every search region.
pub fn choose_start(q: &QueryGraph, strategy: StartStrategy, g: &Graph) -> NodeId {
    match strategy {
        StartStrategy::FirstNode => q.start_node(),
        StartStrategy::RarestLabel => {
            let binding = QueryBinding::new(q, g);
            q.nodes()
                .min_by_key(|&u| (label_candidate_estimate(&binding, u, g), u))
                .expect("queries are non-empty")
        }
    }
}

/// `|{v : labels(u) ⊆ labels(v)}|`, read off the label index.
fn label_candidate_estimate(binding: &QueryBinding<'_>, u: NodeId, g: &Graph) -> usize {
    let Some(labels) = binding.node_labels(u) else {
        return 0;
    };
    match rarest_label_nodes(labels, g) {
        None => g.node_count(),
        Some(list) => list.iter().filter(|&&v| labels.is_subset(g.node_labels(v))).count(),
    }
}

fn rarest_label_nodes<'g>(labels: &crate::label::LabelSet, g: &'g Graph) -> Option<&'g [NodeId]> {
    labels
        .ids()
        .iter()
        .map(|&l| g.nodes_with_label(l))
        .min_by_key(|list| list.len())
}

fn start_candidates(binding: &QueryBinding<'_>, u: NodeId, g: &Graph) -> Vec<NodeId> {
    let Some(labels) = binding.node_labels(u) else {
        return Vec::new();
    };
    let compatible = |&v: &NodeId| binding.node_compatible(u, g, v);
    match rarest_label_nodes(labels, g) {
        Some(list) => list.iter().copied().filter(compatible).collect(),
        None => g.nodes().filter(compatible).collect(),
    }
}

/// Database nodes passing the node principle against `u_start`, ascending.
pub fn candidates_for_start(q: &QueryGraph, u_start: NodeId, g: &Graph) -> Vec<NodeId> {
    start_candidates(&QueryBinding::new(q, g), u_start, g)
}

/// Query edges at `u` not yet in the edge map, ascending and without repeats.
pub fn unmatched_edges(state: &MatchState, q: &QueryGraph, u: NodeId) -> Vec<EdgeId> {
    let mut out = Vec::new();
    push_unmatched_edges(state, q, u, &mut out);
    out
}

fn push_unmatched_edges(state: &MatchState, q: &QueryGraph, u: NodeId, out: &mut Vec<EdgeId>) {
    let mut last = None;
    for inc in q.incidences(u) {
        if Some(inc.edge) != last && !state.edge_is_matched(inc.edge) {
            out.push(inc.edge);
        }
        last = Some(inc.edge);
    }
}

/// Edges at `u_prime` passing the relationship principle for query edge `r`
/// anchored at `u`, ascending by edge id. Matched edges are not excluded here.
pub fn relationship_candidates(
    binding: &QueryBinding<'_>,
    g: &Graph,
    r: EdgeId,
    u: NodeId,
    u_prime: NodeId,
) -> Vec<EdgeId> {
    let mut out = Vec::new();
    push_relationship_candidates(binding, g, r, u, u_prime, &mut out);
    out
}

fn push_relationship_candidates(
    binding: &QueryBinding<'_>,
    g: &Graph,
    r: EdgeId,
    u: NodeId,
    u_prime: NodeId,
    out: &mut Vec<EdgeId>,
) {
    let mut last = None;
    for inc in g.incidences(u_prime) {
        // a self-loop shows up twice in a row
        if Some(inc.edge) != last && binding.edge_compatible(r, u, g, inc.edge, u_prime) {
            out.push(inc.edge);
        }
        last = Some(inc.edge);
    }
}

/// End-point consistency test for the prospective pair `<r, r_prime>` at the
/// matched anchor `<u, u_prime>`.
///
/// With `v`/`v'` the far endpoints (the anchor itself for a self-loop): fails
/// if either is matched to something other than the other; if both are
/// unmatched, they must pass the node principle and are then pushed and
/// matched. Matched-to-each-other is accepted without side effects.
pub fn check(
    state: &mut MatchState,
    binding: &QueryBinding<'_>,
    g: &Graph,
    r: EdgeId,
    r_prime: EdgeId,
    u: NodeId,
    u_prime: NodeId,
) -> bool {
    let v = binding.query().edge(r).other_endpoint(u);
    let vp = g.edge(r_prime).other_endpoint(u_prime);
    if state.query_node_of(vp).is_some_and(|x| x != v) {
        return false;
    }
    match state.image_of(v) {
        Some(x) => x == vp,
        None => {
            if binding.node_compatible(v, g, vp) {
                state.push(v, vp);
                state.match_node(v, vp);
                true
            } else {
                false
            }
        }
    }
}

enum Halt {
    Limit,
    Deadline,
}

type Flow = ControlFlow<Halt>;

#[derive(Clone, Copy)]
struct Level {
    query_edge: EdgeId,
    start: usize,
    end: usize,
}

struct Searcher<'a> {
    g: &'a Graph,
    binding: &'a QueryBinding<'a>,
    state: MatchState,
    counters: SearchCounters,
    found: Vec<Embedding>,
    limit: Option<usize>,
    deadline: Option<Instant>,
    audit: bool,
    ticks: u32,
    // Candidate lists of all live branch frames, stacked.
    cells: Vec<EdgeId>,
    levels: Vec<Level>,
    pending: Vec<EdgeId>,
}

impl<'a> Searcher<'a> {
    fn new(binding: &'a QueryBinding<'a>, g: &'a Graph, cfg: &SearchConfig) -> Self {
        let q = binding.query();
        Searcher {
            g,
            binding,
            state: MatchState::new(q.node_count(), q.edge_count()),
            counters: SearchCounters::default(),
            found: Vec::new(),
            limit: cfg.result_limit.map(NonZeroUsize::get),
            deadline: cfg.deadline,
            audit: cfg.audit_restores,
            ticks: 0,
            cells: Vec::new(),
            levels: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn run_seed(&mut self, u_start: NodeId, seed: NodeId) -> Flow {
        self.state.clear();
        let base = self.state.snapshot();
        self.state.push(u_start, seed);
        self.state.match_node(u_start, seed);
        let flow = self.search(1);
        self.state.restore(base);
        if !self.state.is_clean() {
            self.counters.unclean_finishes += 1;
        }
        flow
    }

    fn search(&mut self, depth: u64) -> Flow {
        self.counters.search_calls += 1;
        self.counters.max_depth = self.counters.max_depth.max(depth);
        let q = self.binding.query();
        while let Some((u, up)) = self.state.pop() {
            let has_unmatched = q.incidences(u).iter().any(|inc| !self.state.edge_is_matched(inc.edge));
            if has_unmatched {
                return self.branch_nodes(u, up, depth + 1);
            }
        }
        debug_assert!(self.state.is_complete());
        self.found.push(Embedding {
            node_map: self.state.node_map(),
            edge_map: self.state.edge_map(),
        });
        self.counters.embeddings += 1;
        match self.limit {
            Some(n) if self.found.len() >= n => ControlFlow::Break(Halt::Limit),
            _ => ControlFlow::Continue(()),
        }
    }

    fn branch_nodes(&mut self, u: NodeId, up: NodeId, depth: u64) -> Flow {
        self.counters.branch_calls += 1;
        let q = self.binding.query();
        let level_base = self.levels.len();
        let cell_base = self.cells.len();

        self.pending.clear();
        push_unmatched_edges(&self.state, q, u, &mut self.pending);
        for i in 0..self.pending.len() {
            let r = self.pending[i];
            let start = self.cells.len();
            push_relationship_candidates(self.binding, self.g, r, u, up, &mut self.cells);
            self.levels.push(Level {
                query_edge: r,
                start,
                end: self.cells.len(),
            });
        }
        let k = self.levels.len() - level_base;
        let live = (self.cells.len() - cell_base) as u64;
        self.counters.live_candidate_cells += live;
        self.counters.peak_candidate_cells = self
            .counters
            .peak_candidate_cells
            .max(self.counters.live_candidate_cells);

        let flow = if k == 0 {
            self.search(depth)
        } else {
            self.match_relationship(level_base, 0, k, u, up, depth)
        };

        self.counters.live_candidate_cells -= live;
        self.levels.truncate(level_base);
        self.cells.truncate(cell_base);
        flow
    }

    fn match_relationship(&mut self, level_base: usize, i: usize, k: usize, u: NodeId, up: NodeId, depth: u64) -> Flow {
        self.counters.max_depth = self.counters.max_depth.max(depth);
        let Level {
            query_edge: r,
            start,
            end,
        } = self.levels[level_base + i];
        for j in start..end {
            let rp = self.cells[j];
            if self.state.query_edge_of(rp).is_some() {
                continue;
            }
            self.tick()?;
            let snap = self.state.snapshot();
            let copy = self.audit.then(|| self.state.content());
            self.counters.checks += 1;
            if !check(&mut self.state, self.binding, self.g, r, rp, u, up) {
                continue;
            }
            self.state.match_edge(r, rp);
            let flow = if i + 1 < k {
                self.match_relationship(level_base, i + 1, k, u, up, depth + 1)
            } else {
                self.search(depth + 1)
            };
            self.state.restore(snap);
            self.counters.backtracks += 1;
            if let Some(copy) = copy {
                if self.state.content() != copy {
                    self.counters.restore_mismatches += 1;
                }
            }
            flow?;
        }
        ControlFlow::Continue(())
    }

    #[inline]
    fn tick(&mut self) -> Flow {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks & 0x3ff == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return ControlFlow::Break(Halt::Deadline);
                }
            }
        }
        ControlFlow::Continue(())
    }
}

/// Finds every embedding of `q` in `g`.
///
/// Start candidates are processed in ascending id order; within a region,
/// query edges are taken in ascending id order and their candidates in
/// ascending database edge id order, so the output sequence is deterministic.
/// Embeddings that differ only by a query automorphism are reported
/// separately.
pub fn match_all(q: &QueryGraph, g: &Graph, cfg: &SearchConfig) -> Result<MatchOutcome, MatchError> {
    let binding = QueryBinding::new(q, g);
    let u_start = choose_start(q, cfg.start_strategy, g);
    let seeds = start_candidates(&binding, u_start, g);

    let mut searcher = Searcher::new(&binding, g, cfg);
    searcher.counters.start_candidates = seeds.len() as u64;
    let mut halted = None;
    for &seed in &seeds {
        if let ControlFlow::Break(h) = searcher.run_seed(u_start, seed) {
            halted = Some(h);
            break;
        }
    }
    if let Some(Halt::Deadline) = halted {
        return Err(MatchError::DeadlineExceeded {
            found: searcher.found.len(),
        });
    }
    Ok(MatchOutcome {
        embeddings: searcher.found,
        counters: cfg.collect_counters.then_some(searcher.counters),
    })
}

/// [`match_all`] with start candidates searched on the rayon pool.
///
/// Each region gets a private state; results are concatenated in candidate
/// order, so the embedding sequence equals the sequential one. Counters equal
/// the sequential ones when no result limit is set.
pub fn match_all_parallel(q: &QueryGraph, g: &Graph, cfg: &SearchConfig) -> Result<MatchOutcome, MatchError> {
    let binding = QueryBinding::new(q, g);
    let u_start = choose_start(q, cfg.start_strategy, g);
    let seeds = start_candidates(&binding, u_start, g);

    let regions: Vec<(Vec<Embedding>, SearchCounters, Option<Halt>)> = seeds
        .par_iter()
        .map(|&seed| {
            let mut searcher = Searcher::new(&binding, g, cfg);
            let halt = searcher.run_seed(u_start, seed).break_value();
            (searcher.found, searcher.counters, halt)
        })
        .collect();

    let mut counters = SearchCounters {
        start_candidates: seeds.len() as u64,
        ..Default::default()
    };
    let mut embeddings = Vec::new();
    let limit = cfg.result_limit.map(NonZeroUsize::get).unwrap_or(usize::MAX);
    for (found, c, halt) in regions {
        if matches!(halt, Some(Halt::Deadline)) {
            return Err(MatchError::DeadlineExceeded {
                found: embeddings.len() + found.len(),
            });
        }
        counters.merge(&c);
        let room = limit - embeddings.len();
        embeddings.extend(found.into_iter().take(room));
        if embeddings.len() >= limit {
            break;
        }
    }
    counters.embeddings = embeddings.len() as u64;
    Ok(MatchOutcome {
        embeddings,
        counters: cfg.collect_counters.then_some(counters),
    })
}
