//! Pseudorandomness audits and embedding counts for 3-uniform hypergraphs.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function over
//! immutable inputs; file formats, reports on disk and the command line live in
//! the companion `h3` crate.
//!
//! * [`hypergraph`]: the host representation with pair-indexed neighbourhood
//!   bitsets, incidence counts and the pair/vertex bipartite view.
//! * [`properties`]: checkers for the density, discrepancy, degree and
//!   codegree properties plus two-sided jumbledness estimates.
//! * [`patterns`]: small pattern hypergraphs, their classification and exact
//!   counting of labelled embeddings.
//! * [`generators`]: seeded, order-independent instance generation.
//!
//! Enable the `parallel` feature to split the heavy scans across a rayon pool.
//! Results never depend on the number of workers.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bitset;
pub mod error;
pub mod generators;
pub mod hypergraph;
mod par;
pub mod patterns;
pub mod properties;
pub mod quantity;

pub use bitset::{PairSet, VertexSet};
pub use error::{Error, Result};
pub use hypergraph::{BipartiteIncidence, Hypergraph3, PairIndex};
pub use patterns::{EmbeddingCount, PatternH, PatternStats};
pub use properties::{
    JumbledEstimate, Mode, PropertyKind, PropertyParams, PropertyReport, Status, Witness,
};
