//! Turán numbers of disjoint paths and equibipartite forests: closed-form
//! values, extremal constructions, exact detectors and an exhaustive oracle.

pub mod bitset;
pub mod canon;
pub mod constructions;
pub mod detectors;
pub mod formulas;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod treelab;

pub use bitset::{VertexSet, MAX_VERTICES};
pub use canon::{canonical_code, canonical_form, isomorphic, GraphCode};
pub use detectors::{contains_pattern, longest_path, PatternSpec, Witness};
pub use formulas::FormulaResult;
pub use graph::{Graph, GraphError};
pub use oracle::{exact_ex, SearchOptions, SearchReport};
pub use treelab::PartitionCert;
