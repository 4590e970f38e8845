//! Subgraph isomorphism for labeled directed multigraphs.
//!
//! The main entry point is [`match_all`], a branch-and-bound search that
//! filters candidates globally only for one starting query node and finds every
//! other match locally, by walking the incident edges of already matched node
//! pairs and backtracking over edge-candidate combinations.
//!
//! ```
//! use bbgraph::{fixtures, match_all, SearchConfig};
//!
//! let (query, graph) = (fixtures::fig1_query(), fixtures::fig1_graph());
//! let outcome = match_all(&query, &graph, &SearchConfig::default()).unwrap();
//! assert_eq!(outcome.embeddings.len(), 2);
//! ```
//!
//! Around the matcher the crate provides a brute-force [`oracle_enumerate`], a
//! [`global_candidate_match`] baseline, JSON file formats ([`io`]), a seeded
//! graph and workload generator ([`gen`]) and a benchmark harness ([`bench`]).

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod embedding;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod io;
pub mod label;
pub mod matcher;
pub mod principles;

pub use baselines::{global_candidate_match, oracle_enumerate, OracleBudget, OracleError};
pub use embedding::{validate_embedding, Embedding, EmbeddingViolation};
pub use graph::{build_graph, Direction, EdgeId, Graph, GraphError, NodeId, QueryGraph};
pub use label::{LabelId, LabelSet};
pub use matcher::{
    candidates_for_start, choose_start, match_all, match_all_parallel, MatchError, MatchOutcome, SearchConfig,
    SearchCounters, StartStrategy,
};
pub use principles::{mnp, mrp};
