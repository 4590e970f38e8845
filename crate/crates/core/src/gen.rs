//! Seeded random graphs and query workloads extracted from them.
//!
//! All randomness comes from a ChaCha8 stream seeded by the spec, and no hash
//! map iteration order leaks into the output, so a spec fixes the document
//! byte for byte.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Direction, EdgeId, Graph, NodeId};
use crate::io::{EdgeDoc, GraphDocument, NodeDoc, QueryDocument, WorkloadDocument, WorkloadEntry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("infeasible spec: {0}")]
    InfeasibleSpec(String),
    #[error("could not extract a {kind} query after {attempts} attempts")]
    ExtractionFailed { kind: String, attempts: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelDistribution {
    Uniform,
    /// Label `i` (0-based) drawn with weight `1 / (i + 1)^s`.
    Zipf(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub node_count: usize,
    pub edge_count: usize,
    pub node_label_alphabet: usize,
    pub edge_label_alphabet: usize,
    pub label_distribution: LabelDistribution,
    pub seed: u64,
    pub allow_self_loops: bool,
    pub allow_parallel_edges: bool,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            node_count: 1000,
            edge_count: 3000,
            node_label_alphabet: 14,
            edge_label_alphabet: 18,
            label_distribution: LabelDistribution::Uniform,
            seed: 0,
            allow_self_loops: false,
            allow_parallel_edges: false,
        }
    }
}

pub fn node_label_name(i: usize) -> String {
    format!("N{i}")
}

pub fn edge_label_name(i: usize) -> String {
    format!("E{i}")
}

enum LabelSampler {
    Uniform(usize),
    Zipf(Zipf<f64>),
}

impl LabelSampler {
    fn new(alphabet: usize, dist: LabelDistribution) -> Result<Self, GenError> {
        if alphabet == 0 {
            return Err(GenError::InfeasibleSpec("label alphabets must be non-empty".into()));
        }
        match dist {
            LabelDistribution::Uniform => Ok(LabelSampler::Uniform(alphabet)),
            LabelDistribution::Zipf(s) => Zipf::new(alphabet as f64, s)
                .map(LabelSampler::Zipf)
                .map_err(|e| GenError::InfeasibleSpec(format!("zipf exponent {s}: {e}"))),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            LabelSampler::Uniform(n) => rng.random_range(0..*n),
            LabelSampler::Zipf(z) => z.sample(rng) as usize - 1,
        }
    }
}

/// Random graph: one label per node and per edge, endpoints uniform.
///
/// Without parallel edges each ordered pair is used at most once, so at most
/// `n(n-1)` edges fit, plus `n` when self-loops are allowed.
pub fn generate_graph(spec: &GenSpec) -> Result<GraphDocument, GenError> {
    let n = spec.node_count;
    if n == 0 {
        return Err(GenError::InfeasibleSpec("node_count must be positive".into()));
    }
    let pair_capacity = (n as u128) * (n as u128 - 1) + if spec.allow_self_loops { n as u128 } else { 0 };
    if pair_capacity == 0 && spec.edge_count > 0 {
        return Err(GenError::InfeasibleSpec(
            "a single node without self-loops has no edges".into(),
        ));
    }
    if !spec.allow_parallel_edges && spec.edge_count as u128 > pair_capacity {
        return Err(GenError::InfeasibleSpec(format!(
            "{} edges exceed the {pair_capacity} distinct ordered pairs of {n} nodes",
            spec.edge_count
        )));
    }
    let node_sampler = LabelSampler::new(spec.node_label_alphabet, spec.label_distribution)?;
    let edge_sampler = LabelSampler::new(spec.edge_label_alphabet, spec.label_distribution)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let nodes: Vec<NodeDoc> = (0..n)
        .map(|i| NodeDoc {
            id: i as u32,
            labels: vec![node_label_name(node_sampler.sample(&mut rng))],
        })
        .collect();

    let pairs: Vec<(u32, u32)> = if !spec.allow_parallel_edges && (spec.edge_count as u128) * 2 > pair_capacity {
        // Dense request: shuffle every admissible pair instead of rejection sampling.
        let mut all: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|s| (0..n as u32).map(move |d| (s, d)))
            .filter(|&(s, d)| s != d || spec.allow_self_loops)
            .collect();
        all.shuffle(&mut rng);
        all.truncate(spec.edge_count);
        all
    } else {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(spec.edge_count);
        while out.len() < spec.edge_count {
            let (s, d) = (rng.random_range(0..n as u32), rng.random_range(0..n as u32));
            if (s == d && !spec.allow_self_loops) || (!spec.allow_parallel_edges && !seen.insert((s, d))) {
                continue;
            }
            out.push((s, d));
        }
        out
    };
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (src, dst))| EdgeDoc {
            id: i as u32,
            src,
            dst,
            labels: vec![edge_label_name(edge_sampler.sample(&mut rng))],
        })
        .collect();
    Ok(GraphDocument { nodes, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryKind {
    /// Directed path through `nodes` distinct nodes.
    Path { nodes: usize },
    /// Connected `nodes`-node subgraph: a spanning tree plus `extra_edges`
    /// further induced edges, the first of which closes a cycle.
    Complex { nodes: usize, extra_edges: usize },
}

impl QueryKind {
    pub fn name(&self) -> &'static str {
        match self {
            QueryKind::Path { .. } => "path",
            QueryKind::Complex { .. } => "complex",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadSpec {
    pub query_kind: QueryKind,
    pub count: usize,
    pub seed: u64,
    /// Relabel one query node at random, so an embedding is no longer guaranteed.
    #[serde(default)]
    pub perturb: bool,
}

const MAX_ATTEMPTS: usize = 2000;

/// One query copied out of `g`. Labels come along unchanged, so unless
/// `perturb` is set the query embeds into `g` at least once.
pub fn extract_query(g: &Graph, spec: &WorkloadSpec) -> Result<QueryDocument, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    extract_with(g, spec.query_kind, spec.perturb, &mut rng)
}

/// `spec.count` queries, each extracted from its own seed derived from
/// `spec.seed` and its index.
pub fn extract_workload(g: &Graph, spec: &WorkloadSpec) -> Result<WorkloadDocument, GenError> {
    let mut queries = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(i as u64 + 1);
        let query = extract_with(g, spec.query_kind, spec.perturb, &mut rng)?;
        queries.push(WorkloadEntry {
            id: format!("{}{}", spec.query_kind.name(), i),
            kind: spec.query_kind.name().into(),
            query,
        });
    }
    Ok(WorkloadDocument { queries })
}

fn extract_with(g: &Graph, kind: QueryKind, perturb: bool, rng: &mut ChaCha8Rng) -> Result<QueryDocument, GenError> {
    let failed = || GenError::ExtractionFailed {
        kind: kind.name().into(),
        attempts: MAX_ATTEMPTS,
    };
    if g.node_count() == 0 {
        return Err(failed());
    }
    let picked = (0..MAX_ATTEMPTS).find_map(|_| match kind {
        QueryKind::Path { nodes } => try_path(g, nodes, rng),
        QueryKind::Complex { nodes, extra_edges } => try_complex(g, nodes, extra_edges, rng),
    });
    let (nodes, edges) = picked.ok_or_else(failed)?;
    let mut doc = copy_subgraph(g, &nodes, &edges);
    if perturb {
        let names: Vec<&str> = g
            .nodes()
            .flat_map(|v| g.label_names(g.node_labels(v)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let target = rng.random_range(0..doc.nodes.len());
        doc.nodes[target].labels = names.choose(rng).map(|l| vec![l.to_string()]).unwrap_or_default();
    }
    Ok(doc)
}

fn try_path(g: &Graph, len: usize, rng: &mut ChaCha8Rng) -> Option<(Vec<NodeId>, Vec<EdgeId>)> {
    if len == 0 {
        return None;
    }
    let mut path = vec![NodeId(rng.random_range(0..g.node_count() as u32))];
    let mut edges = Vec::new();
    while path.len() < len {
        let here = *path.last().expect("path is non-empty");
        let next: Vec<_> = g
            .incidences(here)
            .iter()
            .filter(|i| i.dir == Direction::Outgoing && !path.contains(&i.other))
            .collect();
        let step = next.choose(rng)?;
        path.push(step.other);
        edges.push(step.edge);
    }
    Some((path, edges))
}

/// Finds a short cycle by breadth-first search from a random node, then grows
/// the node set to `size` along random incident edges.
fn try_complex(g: &Graph, size: usize, extra: usize, rng: &mut ChaCha8Rng) -> Option<(Vec<NodeId>, Vec<EdgeId>)> {
    if size < 2 || extra == 0 {
        return None;
    }
    let root = NodeId(rng.random_range(0..g.node_count() as u32));
    let (cycle_nodes, cycle_edges) = short_cycle(g, root, size, rng)?;

    let mut nodes = cycle_nodes;
    let mut edges = cycle_edges;
    while nodes.len() < size {
        let grow: Vec<_> = nodes
            .iter()
            .flat_map(|&v| g.incidences(v).iter())
            .filter(|i| !nodes.contains(&i.other))
            .copied()
            .collect();
        let step = grow.choose(rng)?;
        nodes.push(step.other);
        edges.push(step.edge);
    }

    let mut spare: Vec<EdgeId> = nodes
        .iter()
        .flat_map(|&v| g.incidences(v).iter())
        .filter(|i| nodes.contains(&i.other) && !edges.contains(&i.edge))
        .map(|i| i.edge)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let more = extra - 1;
    if spare.len() < more {
        return None;
    }
    spare.shuffle(rng);
    edges.extend_from_slice(&spare[..more]);
    Some((nodes, edges))
}

/// A cycle through at most `max_len` nodes in the undirected view, found by
/// breadth-first search from `root` with neighbours visited in random order.
fn short_cycle(g: &Graph, root: NodeId, max_len: usize, rng: &mut ChaCha8Rng) -> Option<(Vec<NodeId>, Vec<EdgeId>)> {
    const VISIT_BUDGET: usize = 4096;
    let max_depth = max_len / 2;
    let mut parent: BTreeMap<NodeId, (NodeId, EdgeId, usize)> = BTreeMap::new();
    parent.insert(root, (root, EdgeId(u32::MAX), 0));
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let depth = parent[&x].2;
        let mut incs: Vec<_> = g.incidences(x).iter().filter(|i| i.other != x).copied().collect();
        incs.shuffle(rng);
        for inc in incs {
            if parent[&x].1 == inc.edge {
                continue;
            }
            if let Some(&(_, _, dy)) = parent.get(&inc.other) {
                let len = depth + dy + 1;
                if len > max_len {
                    continue;
                }
                let (a, ea) = walk_to_root(&parent, x);
                let (b, eb) = walk_to_root(&parent, inc.other);
                // Trim the shared suffix above the lowest common ancestor.
                let common = a.iter().rev().zip(b.iter().rev()).take_while(|(p, q)| p == q).count();
                let (a, b) = (&a[..a.len() - common + 1], &b[..b.len() - common]);
                let (ea, eb) = (&ea[..a.len() - 1], &eb[..b.len()]);
                let nodes: Vec<NodeId> = a.iter().rev().chain(b.iter()).copied().collect();
                if nodes.len() > max_len {
                    continue;
                }
                let mut edges: Vec<EdgeId> = ea.iter().rev().chain(eb.iter()).copied().collect();
                edges.push(inc.edge);
                return Some((nodes, edges));
            }
            if depth < max_depth && parent.len() < VISIT_BUDGET {
                parent.insert(inc.other, (x, inc.edge, depth + 1));
                queue.push_back(inc.other);
            }
        }
    }
    None
}

/// Nodes from `v` up to the root, and the tree edges between them.
fn walk_to_root(parent: &BTreeMap<NodeId, (NodeId, EdgeId, usize)>, mut v: NodeId) -> (Vec<NodeId>, Vec<EdgeId>) {
    let (mut nodes, mut edges) = (vec![v], Vec::new());
    loop {
        let (p, e, d) = parent[&v];
        if d == 0 {
            return (nodes, edges);
        }
        edges.push(e);
        nodes.push(p);
        v = p;
    }
}

/// Query document for the given database nodes and edges; query node `i` is
/// `nodes[i]`, query edge `j` is `edges[j]`.
fn copy_subgraph(g: &Graph, nodes: &[NodeId], edges: &[EdgeId]) -> QueryDocument {
    let local = |v: NodeId| {
        nodes
            .iter()
            .position(|&x| x == v)
            .expect("edge endpoints are in the node set") as u32
    };
    let sorted = |names: Vec<&str>| {
        let mut v: Vec<String> = names.into_iter().map(str::to_owned).collect();
        v.sort();
        v
    };
    QueryDocument {
        nodes: nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| NodeDoc {
                id: i as u32,
                labels: sorted(g.label_names(g.node_labels(v))),
            })
            .collect(),
        edges: edges
            .iter()
            .enumerate()
            .map(|(j, &e)| {
                let rec = g.edge(e);
                EdgeDoc {
                    id: j as u32,
                    src: local(rec.src),
                    dst: local(rec.dst),
                    labels: sorted(g.label_names(&rec.labels)),
                }
            })
            .collect(),
        start: None,
    }
}
