//! Extremal digraphs of given order and (out)radius.
//!
//! The crate covers dense small-order digraphs and their structural
//! operations, distance invariants, the named extremal families with their
//! closed-form size bounds, the integer procedures used in the size proofs,
//! and an exhaustive enumeration engine that checks the bounds and their
//! extremal characterizations at small orders.

pub mod canon;
pub mod digraph;
pub mod error;
pub mod families;
pub mod io;
pub mod metrics;
pub mod search;
pub mod structure;
pub mod verify;

pub use canon::{canonical_form, is_isomorphic};
pub use digraph::{DenseDigraph, Side, VertexPartition};
pub use error::{DigraphError, ParseError};
pub use metrics::{distance_matrix, metric_summary, DistanceMatrix, MetricSummary};
