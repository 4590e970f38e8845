//! JSON documents for graphs, queries, workloads and results, plus a CSV
//! edge-list importer.
//!
//! Writers are deterministic: nodes and edges by ascending id, labels sorted,
//! map keys in ascending numeric order. Timing is the only field allowed to
//! differ between two writes of the same results, and it can be left out.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::Embedding;
use crate::graph::{EdgeId, Graph, GraphError, NodeId, QueryGraph};
use crate::matcher::SearchCounters;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Validation { path: PathBuf, source: GraphError },
}

impl IoError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_owned(),
            source,
        }
    }

    fn json(path: &Path, err: serde_json::Error) -> Self {
        IoError::Parse {
            path: path.to_owned(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: u32,
    #[serde(default)]
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: u32,
    pub src: u32,
    pub dst: u32,
    #[serde(default)]
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        let sorted = |names: Vec<&str>| {
            let mut v: Vec<String> = names.into_iter().map(str::to_owned).collect();
            v.sort();
            v
        };
        GraphDocument {
            nodes: g
                .nodes()
                .map(|v| NodeDoc {
                    id: v.0,
                    labels: sorted(g.label_names(g.node_labels(v))),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeDoc {
                    id: i as u32,
                    src: e.src.0,
                    dst: e.dst.0,
                    labels: sorted(g.label_names(&e.labels)),
                })
                .collect(),
        }
    }

    /// Sorts elements by id and labels lexicographically, dropping repeated labels.
    pub fn normalize(&mut self) {
        self.nodes.sort_by_key(|n| n.id);
        self.edges.sort_by_key(|e| e.id);
        for labels in self
            .nodes
            .iter_mut()
            .map(|n| &mut n.labels)
            .chain(self.edges.iter_mut().map(|e| &mut e.labels))
        {
            labels.sort();
            labels.dedup();
        }
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        crate::graph::build_graph(
            self.nodes.iter().map(|n| (n.id, n.labels.clone())).collect(),
            self.edges
                .iter()
                .map(|e| (e.id, e.src, e.dst, e.labels.clone()))
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let mut doc = self.clone();
        doc.normalize();
        serde_json::to_string_pretty(&doc).expect("documents serialize")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryDocument {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    /// Starting node; the smallest node id when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<u32>,
}

impl QueryDocument {
    pub fn from_query(q: &QueryGraph) -> Self {
        let GraphDocument { nodes, edges } = GraphDocument::from_graph(q.graph());
        QueryDocument {
            nodes,
            edges,
            start: Some(q.start_node().0),
        }
    }

    pub fn graph_document(&self) -> GraphDocument {
        GraphDocument {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn to_query(&self) -> Result<QueryGraph, GraphError> {
        let start = self.start.or_else(|| self.nodes.iter().map(|n| n.id).min());
        QueryGraph::new(self.graph_document().to_graph()?, start.map(NodeId))
    }

    pub fn to_json(&self) -> String {
        let mut g = self.graph_document();
        g.normalize();
        let doc = QueryDocument {
            nodes: g.nodes,
            edges: g.edges,
            start: self.start,
        };
        serde_json::to_string_pretty(&doc).expect("documents serialize")
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|e| IoError::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), IoError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| IoError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| IoError::io(path, e))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::json(path, e))
}

pub fn load_graph_document(path: impl AsRef<Path>) -> Result<GraphDocument, IoError> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "csv") {
        let sidecar = node_sidecar_path(path);
        let nodes = sidecar.exists().then_some(sidecar);
        return import_edge_list(path, nodes.as_deref()).map(|(doc, _)| doc);
    }
    parse_json(path, &read(path)?)
}

/// Loads a graph from a JSON document, or from a CSV edge list (with an
/// optional `<stem>.nodes.csv` label sidecar) when the extension is `.csv`.
pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph, IoError> {
    let path = path.as_ref();
    load_graph_document(path)?
        .to_graph()
        .map_err(|source| IoError::Validation {
            path: path.to_owned(),
            source,
        })
}

pub fn load_query_document(path: impl AsRef<Path>) -> Result<QueryDocument, IoError> {
    let path = path.as_ref();
    parse_json(path, &read(path)?)
}

pub fn load_query(path: impl AsRef<Path>) -> Result<QueryGraph, IoError> {
    let path = path.as_ref();
    load_query_document(path)?
        .to_query()
        .map_err(|source| IoError::Validation {
            path: path.to_owned(),
            source,
        })
}

pub fn write_graph(doc: &GraphDocument, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(path.as_ref(), &doc.to_json())
}

pub fn write_query(doc: &QueryDocument, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(path.as_ref(), &doc.to_json())
}

fn node_sidecar_path(edges: &Path) -> PathBuf {
    let stem = edges
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    edges.with_file_name(format!("{stem}.nodes.csv"))
}

fn split_labels(field: Option<&str>) -> Vec<String> {
    field
        .map(|f| {
            f.split(';')
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::to_owned)
                .collect()
        })
        .unwrap_or_default()
}

/// Reads an edge list of `src,dst[,label[;label...]]` lines and an optional
/// `id,label[;label...]` node sidecar. Lines starting with `#` are skipped.
///
/// External ids may be sparse; they are renumbered densely in ascending order
/// and the returned vector maps each dense id back to its external id. Edge
/// ids follow line order.
pub fn import_edge_list(edges_path: &Path, nodes_path: Option<&Path>) -> Result<(GraphDocument, Vec<u64>), IoError> {
    let reader = |path: &Path| {
        csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| csv_error(path, e))
    };
    let parse_id = |path: &Path, rec: &csv::StringRecord, i: usize| -> Result<u64, IoError> {
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        rec.get(i).and_then(|f| f.parse().ok()).ok_or_else(|| IoError::Parse {
            path: path.to_owned(),
            line,
            column: i + 1,
            message: format!("expected a non-negative integer id in field {}", i + 1),
        })
    };

    let mut node_labels: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    if let Some(np) = nodes_path {
        for rec in reader(np)?.records() {
            let rec = rec.map_err(|e| csv_error(np, e))?;
            node_labels.insert(parse_id(np, &rec, 0)?, split_labels(rec.get(1)));
        }
    }
    let mut raw_edges = Vec::new();
    for rec in reader(edges_path)?.records() {
        let rec = rec.map_err(|e| csv_error(edges_path, e))?;
        let (s, d) = (parse_id(edges_path, &rec, 0)?, parse_id(edges_path, &rec, 1)?);
        node_labels.entry(s).or_default();
        node_labels.entry(d).or_default();
        raw_edges.push((s, d, split_labels(rec.get(2))));
    }

    let external: Vec<u64> = node_labels.keys().copied().collect();
    let dense = |x: u64| external.binary_search(&x).expect("every endpoint was registered") as u32;
    let doc = GraphDocument {
        nodes: node_labels
            .into_iter()
            .enumerate()
            .map(|(i, (_, labels))| NodeDoc { id: i as u32, labels })
            .collect(),
        edges: raw_edges
            .into_iter()
            .enumerate()
            .map(|(i, (s, d, labels))| EdgeDoc {
                id: i as u32,
                src: dense(s),
                dst: dense(d),
                labels,
            })
            .collect(),
    };
    Ok((doc, external))
}

fn csv_error(path: &Path, e: csv::Error) -> IoError {
    let (line, message) = match e.position() {
        Some(p) => (p.line() as usize, e.to_string()),
        None => (0, e.to_string()),
    };
    match e.into_kind() {
        csv::ErrorKind::Io(source) => IoError::io(path, source),
        _ => IoError::Parse {
            path: path.to_owned(),
            line,
            column: 0,
            message,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingDoc {
    pub nodes: BTreeMap<u32, u32>,
    pub edges: BTreeMap<u32, u32>,
}

impl From<&Embedding> for EmbeddingDoc {
    fn from(e: &Embedding) -> Self {
        EmbeddingDoc {
            nodes: e.node_map.iter().enumerate().map(|(u, v)| (u as u32, v.0)).collect(),
            edges: e.edge_map.iter().enumerate().map(|(r, d)| (r as u32, d.0)).collect(),
        }
    }
}

impl EmbeddingDoc {
    /// Dense form. Fails when either map is not keyed exactly `0..n`.
    pub fn to_embedding(&self) -> Option<Embedding> {
        let dense = |m: &BTreeMap<u32, u32>| {
            m.keys()
                .enumerate()
                .all(|(i, &k)| k == i as u32)
                .then(|| m.values().copied().collect::<Vec<_>>())
        };
        Some(Embedding {
            node_map: dense(&self.nodes)?.into_iter().map(NodeId).collect(),
            edge_map: dense(&self.edges)?.into_iter().map(EdgeId).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_file: Option<String>,
    #[serde(default)]
    pub matcher: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    pub embedding_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counters: Option<SearchCounters>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub metadata: ResultMetadata,
    pub embeddings: Vec<EmbeddingDoc>,
}

impl ResultDocument {
    pub fn new(matcher: &str, embeddings: &[Embedding]) -> Self {
        ResultDocument {
            metadata: ResultMetadata {
                query_file: None,
                graph_file: None,
                matcher: matcher.to_owned(),
                elapsed_ms: None,
                embedding_count: embeddings.len(),
                counters: None,
            },
            embeddings: embeddings.iter().map(EmbeddingDoc::from).collect(),
        }
    }

    pub fn with_files(mut self, query: impl Into<String>, graph: impl Into<String>) -> Self {
        self.metadata.query_file = Some(query.into());
        self.metadata.graph_file = Some(graph.into());
        self
    }

    pub fn with_elapsed_ms(mut self, ms: f64) -> Self {
        self.metadata.elapsed_ms = Some(ms);
        self
    }

    pub fn with_counters(mut self, counters: Option<SearchCounters>) -> Self {
        self.metadata.counters = counters;
        self
    }

    /// Serialized form; with `include_timing == false` the bytes depend only on
    /// the embeddings, counters and file names.
    pub fn to_json(&self, include_timing: bool) -> String {
        if include_timing {
            serde_json::to_string_pretty(self).expect("documents serialize")
        } else {
            let mut doc = self.clone();
            doc.metadata.elapsed_ms = None;
            serde_json::to_string_pretty(&doc).expect("documents serialize")
        }
    }
}

pub fn write_results(doc: &ResultDocument, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(path.as_ref(), &doc.to_json(true))
}

pub fn load_results(path: impl AsRef<Path>) -> Result<ResultDocument, IoError> {
    let path = path.as_ref();
    parse_json(path, &read(path)?)
}

/// A named collection of queries to run against one graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadDocument {
    pub queries: Vec<WorkloadEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadEntry {
    pub id: String,
    /// `path` or `complex`.
    pub kind: String,
    pub query: QueryDocument,
}

pub fn write_workload(doc: &WorkloadDocument, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(
        path.as_ref(),
        &serde_json::to_string_pretty(doc).expect("documents serialize"),
    )
}

pub fn load_workload(path: impl AsRef<Path>) -> Result<WorkloadDocument, IoError> {
    let path = path.as_ref();
    let doc: WorkloadDocument = parse_json(path, &read(path)?)?;
    let mut ids = BTreeSet::new();
    for entry in &doc.queries {
        if !ids.insert(entry.id.as_str()) {
            return Err(IoError::Parse {
                path: path.to_owned(),
                line: 0,
                column: 0,
                message: format!("duplicate query id {:?}", entry.id),
            });
        }
    }
    Ok(doc)
}

/// Writes `report` as JSON to `path` and as a comma-separated table next to
/// it, with the extension replaced by `.csv`. Returns the table's path.
pub fn write_report(report: &crate::bench::BenchReport, path: impl AsRef<Path>) -> Result<PathBuf, IoError> {
    let path = path.as_ref();
    write(path, &serde_json::to_string_pretty(report).expect("reports serialize"))?;
    let table_path = if path.extension().is_some_and(|e| e == "csv") {
        path.with_extension("table.csv")
    } else {
        path.with_extension("csv")
    };
    write(&table_path, &report.to_table())?;
    Ok(table_path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1_graph, fig1_query};
    use proptest::prelude::*;

    const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

    #[test]
    fn fig1_fixture_files_load() {
        let g = load_graph(format!("{FIXTURES}/fig1_graph.json")).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (10, 12));
        assert_eq!(GraphDocument::from_graph(&g), GraphDocument::from_graph(&fig1_graph()));
        let q = load_query(format!("{FIXTURES}/fig1_query.json")).unwrap();
        assert_eq!(QueryDocument::from_query(&q), QueryDocument::from_query(&fig1_query()));
    }

    #[test]
    fn validation_errors_surface() {
        let err = load_graph(format!("{FIXTURES}/dangling_graph.json")).unwrap_err();
        assert!(matches!(
            err,
            IoError::Validation {
                source: GraphError::DanglingEndpoint { edge: 0, node: 4 },
                ..
            }
        ));
        let err = load_query(format!("{FIXTURES}/disconnected_query.json")).unwrap_err();
        assert!(matches!(
            err,
            IoError::Validation {
                source: GraphError::DisconnectedQuery { .. },
                ..
            }
        ));
    }

    #[test]
    fn parse_errors_carry_position() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        fs::write(&p, "{\n  \"nodes\": [\n    {\"id\": \"zero\"}\n  ]\n}").unwrap();
        match load_graph(&p).unwrap_err() {
            IoError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let missing = load_graph(dir.path().join("absent.json")).unwrap_err();
        assert!(matches!(missing, IoError::Io { .. }));
    }

    #[test]
    fn start_defaults_to_smallest_id() {
        let doc: QueryDocument = serde_json::from_str(
            r#"{"nodes":[{"id":1,"labels":["B"]},{"id":0,"labels":["A"]}],
                "edges":[{"id":0,"src":0,"dst":1}]}"#,
        )
        .unwrap();
        assert_eq!(doc.to_query().unwrap().start_node(), NodeId(0));
    }

    #[test]
    fn result_documents() {
        let (q, g) = (fig1_query(), fig1_graph());
        let found = crate::match_all(&q, &g, &Default::default()).unwrap().embeddings;
        let doc = ResultDocument::new("bbgraph", &found).with_elapsed_ms(1.5);
        assert_eq!(doc.metadata.embedding_count, 2);
        let again = ResultDocument::new("bbgraph", &found).with_elapsed_ms(9.0);
        assert_ne!(doc.to_json(true), again.to_json(true));
        assert_eq!(doc.to_json(false), again.to_json(false));

        let empty = ResultDocument::new("bbgraph", &[]);
        assert_eq!(empty.metadata.embedding_count, 0);
        let back: ResultDocument = serde_json::from_str(&empty.to_json(true)).unwrap();
        assert!(back.embeddings.is_empty());

        let parsed: ResultDocument = serde_json::from_str(&doc.to_json(true)).unwrap();
        let round: Vec<Embedding> = parsed.embeddings.iter().map(|e| e.to_embedding().unwrap()).collect();
        assert_eq!(round, found);
    }

    #[test]
    fn csv_import_renumbers() {
        let dir = tempfile::tempdir().unwrap();
        let edges = dir.path().join("cup.csv");
        fs::write(&edges, "# src,dst,label\n10,20,IN_SQUAD\n30,20,NAMED_SQUAD\n20,20,\n").unwrap();
        fs::write(
            dir.path().join("cup.nodes.csv"),
            "10,Player\n20,Squad\n30,Country;Team\n",
        )
        .unwrap();
        let g = load_graph(&edges).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 3));
        let (doc, ext) = import_edge_list(&edges, Some(&dir.path().join("cup.nodes.csv"))).unwrap();
        assert_eq!(ext, vec![10, 20, 30]);
        assert_eq!(doc.edges[1].src, 2);
        assert_eq!(doc.nodes[2].labels, vec!["Country", "Team"]);
        assert!(doc.edges[2].labels.is_empty());
    }

    fn arb_doc() -> impl Strategy<Value = GraphDocument> {
        (1usize..7).prop_flat_map(|n| {
            let node = proptest::collection::vec("[A-D]", 0..3);
            let edge = (0..n as u32, 0..n as u32, proptest::collection::vec("[r-t]", 0..3));
            (
                proptest::collection::vec(node, n),
                proptest::collection::vec(edge, 0..10),
            )
                .prop_map(|(nodes, edges)| GraphDocument {
                    nodes: nodes
                        .into_iter()
                        .enumerate()
                        .map(|(i, labels)| NodeDoc { id: i as u32, labels })
                        .collect(),
                    edges: edges
                        .into_iter()
                        .enumerate()
                        .map(|(i, (src, dst, labels))| EdgeDoc {
                            id: i as u32,
                            src,
                            dst,
                            labels,
                        })
                        .collect(),
                })
        })
    }

    proptest! {
        #[test]
        fn graph_document_round_trip(doc in arb_doc()) {
            let g = doc.to_graph().unwrap();
            let mut normalized = doc.clone();
            normalized.normalize();
            let back = GraphDocument::from_graph(&g);
            prop_assert_eq!(&back, &normalized);
            let parsed: GraphDocument = serde_json::from_str(&back.to_json()).unwrap();
            let g2 = parsed.to_graph().unwrap();
            for v in g.nodes() {
                let mut a = g.incidences(v).to_vec();
                let mut b = g2.incidences(v).to_vec();
                a.sort();
                b.sort();
                prop_assert_eq!(a, b);
                prop_assert_eq!(
                    GraphDocument::from_graph(&g).nodes[v.index()].clone(),
                    GraphDocument::from_graph(&g2).nodes[v.index()].clone()
                );
                prop_assert_eq!(g.signature(v).total(crate::Direction::Outgoing), g2.signature(v).total(crate::Direction::Outgoing));
                prop_assert_eq!(g.recount_signature(v), g.signature(v).clone());
            }
        }
    }
}
