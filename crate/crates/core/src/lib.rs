//! Differentially private graph clustering through minimum spanning trees.
//!
//! The graph topology is public and only edge weights are protected. A
//! private almost-minimum spanning tree ([`pamst`]) and a Laplace weight
//! release feed the validity-index clustering in [`dbmstclu`]; [`pipeline`]
//! chains the three.

pub mod analysis;
pub mod datagen;
pub mod dbmstclu;
pub mod error;
pub mod graph;
pub mod homogeneity;
pub mod io;
pub mod mechanism;
pub mod pamst;
pub mod pipeline;
pub mod rng;

pub use dbmstclu::{run_dbmstclu, ClusteringState, DbmstcluOutcome};
pub use error::{Error, Result};
pub use graph::{
    minimum_spanning_tree, EdgeId, GraphTopology, NodeId, NodePartition, SpanningTree, WeightFunction, WeightedGraph,
};
pub use mechanism::{PrivacyBudget, WeightReleaseParams};
pub use pamst::pamst;
pub use pipeline::{ptclust, PtclustConfig, PtclustOutcome};
pub use rng::RandomSource;
