//! Cycle double covers of cubic graphs built from well-connected Kotzig-frames.

pub mod cdc;
pub mod coloring;
pub mod enumerate;
pub mod error;
pub mod frame;
pub mod graph;
pub mod io;
pub mod kotzig;
pub mod named;
pub mod parity;
pub mod pipeline;
pub mod rowgraph;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Multigraph, VertexId};
