//! Minority-structure-preserving graph sampling.
//!
//! The crate identifies four kinds of rare structures in an undirected graph
//! (super pivots, huge stars, rims and ties), samples node subsets that keep
//! the important ones intact while matching the rest of the graph, and scores
//! samples from any algorithm on how well they preserve those structures.
//!
//! ```
//! use mcgs_core::{graph::parse_edge_list_str, graph::ParseOptions, mcgs, SamplerConfig};
//!
//! let g = parse_edge_list_str("0 1\n1 2\n2 0\n2 3\n3 4\n4 5\n5 3\n", ParseOptions::default()).unwrap();
//! let cfg = SamplerConfig { phi: 0.5, ..SamplerConfig::default() };
//! let sample = mcgs::mcgs_sample(&g, &cfg, None).unwrap();
//! assert_eq!(sample.nodes.len(), 3);
//! ```

pub mod baselines;
pub mod centrality;
pub mod config;
pub mod cut;
pub mod detect;
pub mod dsu;
pub mod error;
pub mod export;
pub mod graph;
pub mod harness;
pub mod mcgs;
pub mod metrics;
pub mod nodeset;
pub mod par;
pub mod rank;
pub mod sample;
pub mod seeds;

pub use config::{LossWeights, SamplerConfig};
pub use detect::{detect, Detection, Family, MinorityStructure, StructureKind};
pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
pub use nodeset::NodeSet;
pub use par::Execution;
pub use sample::Sample;

/// Absorbs representation error in products such as `10 * 0.3`.
const ROUNDING_SLACK: f64 = 1e-9;

/// `ceil(x)` that treats values within `1e-9` above an integer as that integer.
pub(crate) fn ceil_count(x: f64) -> usize {
    (x - ROUNDING_SLACK).ceil().max(0.0) as usize
}

/// `floor(x)` that treats values within `1e-9` below an integer as that integer.
pub(crate) fn floor_count(x: f64) -> usize {
    (x + ROUNDING_SLACK).floor().max(0.0) as usize
}
