//! Exhaustive generation of bi-regular graphs of prescribed girth.
//!
//! A `({r,m};g)`-graph is a simple graph of girth `g` whose vertex degrees
//! are all `r` or `m`, with at least one vertex of each degree. The smallest
//! such graphs are the bi-regular cages. This crate provides the lower-bound
//! machinery, an isomorph-free backtracking generator with pruning, seed
//! constructions from regular graphs, gluing, and an independent oracle.

pub mod analysis;
pub mod bounds;
pub mod canon;
pub mod codec;
pub mod constructions;
pub mod generator;
pub mod gluing;
pub mod graph;
pub mod oracle;
pub mod verify;

pub use graph::{DistanceOracle, Edge, Graph, GraphError, Length, Site};
