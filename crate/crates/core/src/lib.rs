//! Von Neumann entropy of graphs.
//!
//! Exact entropies of the Laplacian and normalized-Laplacian density matrices,
//! their quadratic approximations with closed-form single-edge deltas, random
//! graph models, entropy-driven growth, heuristic edge prediction, and the
//! experiment runners behind the `vnentropy` command line tool.

pub mod edgelist;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod ingest;
pub mod netstats;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{DensityKind, Distances, Graph};
