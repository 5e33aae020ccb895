//! Parity-constrained orientations of multigraphs under exact and subset
//! conflict constraints.
//!
//! The polynomial cases (disjoint exact conflicts, disjoint subset conflicts)
//! are solved by reduction to even orientations with disjoint exact conflict
//! pairs, which in turn is a maximum matching problem on a filtered line
//! graph. General conflicts are handled by branching. A brute-force oracle
//! and SAT-based hard instance generators are included for cross-checking.

pub mod eo2dec;
pub mod error;
pub mod fpt;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod pco;
pub mod reduction;

pub use error::Error;
pub use graph::{
    components, normalize, validate_instance, verify, Conflict, ConflictKind, EdgeId, Instance,
    Multigraph, Orientation, ParityMap, VerifyReport, VertexId,
};
