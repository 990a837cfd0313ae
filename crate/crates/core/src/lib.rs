//! Exact Turán numbers of small k-uniform hypergraphs: constructions,
//! forbidden-subgraph containment, branch and bound search with isomorph
//! rejection, and partition/closeness diagnostics.

pub mod cache;
pub mod canon;
pub mod constructions;
pub mod error;
pub mod freeness;
pub mod hypergraph;
pub mod search;
pub mod stability;

pub use canon::{are_isomorphic, canonical_form, CanonicalForm};
pub use error::{Error, Result};
pub use freeness::{EmbeddingWitness, ForbiddenPattern, PatternKind};
pub use hypergraph::Hypergraph;

/// Version string recorded in reports and cache records.
pub const VERSION: &str = concat!("turan-core/", env!("CARGO_PKG_VERSION"));
