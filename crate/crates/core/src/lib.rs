//! Minimum s-t cuts in hypergraphs with edge-dependent vertex weights.
//!
//! A hypergraph's splitting functions are reduced to gadget networks, exactly
//! or up to a `(1+ε)` factor, and the resulting directed graph is solved with
//! a push-relabel max-flow.

pub mod error;
pub mod flownet;
pub mod hypergraph;
pub mod reduction;
pub mod sparsify;
pub mod splitting;
pub mod textpipe;

pub use error::{Error, Result};
pub use hypergraph::{EdgeInput, Hyperedge, Hypergraph, VertexId};
pub use reduction::{reduce_hypergraph, Caps, FlowNetwork, ReductionMode};
pub use splitting::SplittingSpec;
