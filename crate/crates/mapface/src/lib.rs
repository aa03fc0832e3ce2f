//! Random orientable embeddings of graphs as combinatorial maps.

pub mod bounds;
pub mod cli;
pub mod combmap;
pub mod configmodel;
pub mod embed_random;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
pub mod rng;
pub mod stats;

pub use combmap::{CombMap, EdgeMatching, PartialMap, RotationSystem};
pub use error::{Error, Result};
pub use graph::Graph;
