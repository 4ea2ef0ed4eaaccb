//! Connectivity labels that survive edge faults.
//!
//! This crate assigns short labels to the vertices and edges of a connected
//! graph `G` so that, given only the labels of two vertices `s`, `t` and the
//! labels of a set `F` of at most `f` failed edges, one can decide whether `s`
//! and `t` are still connected in `G − F` — without consulting the graph
//! itself.
//!
//! # How it works
//!
//! * Every edge of `G` is rerouted through a spanning tree: non-tree edges are
//!   subdivided at a midpoint vertex, producing an auxiliary graph `G′` in
//!   which every original edge corresponds bijectively to a tree edge of the
//!   enlarged spanning tree `T′` ([`graph`]).
//! * Each vertex of `G′` receives a DFS interval ([`ancestry`]), so ancestry
//!   between any two vertices — and hence the side of any tree cut a vertex
//!   lies on — is decidable from two labels alone.
//! * Every non-tree edge is encoded as a nonzero element of a binary field
//!   `GF(2^w)` ([`gf2e`]), and subtrees carry *syndromes*: short power-sum
//!   sketches of their boundary edge sets ([`outdetect`]). A syndrome of
//!   capacity `k` is an XOR-homomorphic digest from which any boundary set of
//!   size at most `k` can be recovered exactly, or a larger one flagged as an
//!   overflow.
//! * Syndromes of the full non-tree edge set would need prohibitively large
//!   capacity, so the edge set is thinned into a halving hierarchy of
//!   ε-net-like subsets ([`sparsify`]): whenever a cut has few boundary edges
//!   overall, some level of the hierarchy sees a *small but nonzero* number of
//!   them, which a fixed capacity can decode.
//! * The label scheme ties these together ([`scheme`]): a query reassembles
//!   the fragments into which the faults shatter the tree, and repeatedly asks
//!   the syndromes for an edge leaving the fragment containing `s`, merging
//!   fragments until `t` is reached or the component is exhausted.
//!
//! Labels are deterministic by default; a randomized mode trades the
//! worst-case cut guarantee for smaller labels by sampling the hierarchy
//! levels with coin flips from a seeded stream.
//!
//! # Entry points
//!
//! * [`scheme::build_labels`] — label a graph.
//! * [`scheme::LabelSet::query`] — decide `s`–`t` connectivity under faults.
//! * [`store`] — portable binary serialization of a label set.
//! * [`audit`] — randomized self-checks against a direct BFS oracle.

#![deny(unsafe_code)]
#![warn(
    missing_docs,
    missing_debug_implementations,
    rust_2018_idioms,
    unreachable_pub
)]

pub mod ancestry;
pub mod audit;
mod error;
pub mod gf2e;
pub mod graph;
pub mod outdetect;
pub mod scheme;
pub mod sparsify;
pub mod store;
pub(crate) mod util;

pub use error::Error;

/// Convenient alias for results produced by this crate.
pub type Result<T> = std::result::Result<T, Error>;
