//! Reference matchers: a brute-force oracle and a global-candidate search.

mod global;
mod oracle;

pub use global::{global_candidate_match, global_candidate_match_until};
pub use oracle::{oracle_enumerate, OracleBudget, OracleError};
