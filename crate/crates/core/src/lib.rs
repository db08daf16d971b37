//! Construction, certification and counting of edge-disjoint rainbow spanning
//! trees in edge-colored graphs.
//!
//! The main entry point is [`decomposition::decompose`], which splits the edge
//! set of a graph uniformly at random into `q = ⌊δ·λ₁/(C ln n)⌋` parts and
//! extracts one rainbow spanning tree from each part. Around it sit exact
//! oracles (subset enumeration, set-partition enumeration, brute force) for
//! every inequality the correctness argument relies on.
//!
//! Data-parallel loops (subset enumeration, retries, experiment trials) run on
//! rayon when the `parallel` feature is enabled and sequentially otherwise; see
//! [`par::Exec`].

pub mod decomposition;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod par;
pub mod partitions;
pub mod rainbow;
pub mod spectral;
mod union_find;

pub use error::{Error, Result};
pub use graph::{CutStats, Edge, EdgeColoredGraph, VertexPartition};
pub use par::Exec;
