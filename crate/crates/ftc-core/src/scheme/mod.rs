//! The fault-tolerant connectivity labeling scheme: label assembly and the
//! two query engines.
//!
//! A build run ([`build_labels`]) fixes a spanning tree, subdivides the
//! non-tree edges, assigns ancestry labels on the subdivided tree `T′`,
//! constructs the sparsification hierarchy over the non-tree halves, and
//! stores with every tree edge of `T′` the per-level syndrome aggregate of
//! its subtree. Queries ([`query_basic`], [`query_fast`]) read only the
//! labels of `s`, `t`, and the fault edges: the fault intervals carve `T′`
//! into fragments ([`FragmentTable`]), each fragment's boundary syndrome
//! falls out of the stored aggregates by XOR, and decoding a nonzero
//! syndrome level yields a boundary edge to merge along.

mod build;
mod fragment;
mod query;

pub use build::{build_labels, BuildConfig};
pub use fragment::{build_fragment_table, FragmentTable};
pub use query::{
    adaptive_budget, query_basic, query_basic_with_stats, query_fast, query_fast_with_stats,
    MergeRecord, QueryStats,
};

use crate::ancestry::AncestryLabel;
use crate::gf2e::FieldSpec;
use crate::sparsify::HierarchyMode;
use crate::Result;

/// Scheme-wide constants fixed at build time and carried with every label
/// set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeParams {
    /// Number of vertices of the original graph.
    pub n: usize,
    /// Number of edges of the original graph.
    pub m: usize,
    /// Fault budget the labels support.
    pub f: u32,
    /// Ancestry field width in bits: `⌈log2(n′+1)⌉` for `n′ = m+1`.
    pub q: u32,
    /// Field width in bits; the smallest supported width holding `2q+1`.
    pub w: u32,
    /// Decode threshold `K` of the hierarchy.
    pub threshold: u64,
    /// Hierarchy depth `h` (index of the empty last level).
    pub h: usize,
    /// Hierarchy construction mode.
    pub mode: HierarchyMode,
    /// Net constant; also sets the adaptive decode budget.
    pub c_net: u64,
    /// Sampling seed (randomized mode only).
    pub seed: Option<u64>,
}

impl SchemeParams {
    /// Vertex count of the subdivided graph: `n′ = m + 1`.
    pub fn n_prime(&self) -> usize {
        self.m + 1
    }

    /// The syndrome field.
    pub fn field(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.w)
    }

    /// Bits per vertex label: `2q`.
    pub fn vertex_bits(&self) -> u64 {
        2 * u64::from(self.q)
    }

    /// Bits per edge label: `4q + (h+1)·2K·w`.
    pub fn edge_bits(&self) -> u64 {
        4 * u64::from(self.q)
            + (self.h as u64 + 1) * 2 * self.threshold * u64::from(self.w)
    }

    /// Bytes of one packed per-level syndrome block: `2K · w/8`.
    pub fn syndrome_bytes(&self) -> usize {
        2 * self.threshold as usize * (self.w / 8) as usize
    }
}

/// A vertex label: the ancestry interval of the vertex in `T′` (original
/// vertices keep their identity under subdivision).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexLabel {
    ancestry: AncestryLabel,
}

impl VertexLabel {
    pub(crate) fn new(ancestry: AncestryLabel) -> VertexLabel {
        VertexLabel { ancestry }
    }

    /// The ancestry interval.
    pub fn ancestry(&self) -> AncestryLabel {
        self.ancestry
    }
}

/// An edge label: the ancestry intervals of the assigned tree edge's
/// endpoints in `T′` (upper = parent side, lower = child side) plus, for
/// every hierarchy level, the packed syndrome aggregate of the subtree
/// below the lower endpoint.
///
/// An original tree edge keeps its own endpoints; an original non-tree
/// edge receives the label of its subdivided tree half, whose lower
/// endpoint is the edge's midpoint vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLabel {
    upper: AncestryLabel,
    lower: AncestryLabel,
    levels: Vec<Vec<u8>>,
}

impl EdgeLabel {
    pub(crate) fn new(upper: AncestryLabel, lower: AncestryLabel, levels: Vec<Vec<u8>>) -> EdgeLabel {
        EdgeLabel {
            upper,
            lower,
            levels,
        }
    }

    /// Ancestry interval of the parent-side endpoint.
    pub fn upper(&self) -> AncestryLabel {
        self.upper
    }

    /// Ancestry interval of the child-side endpoint; its subtree is what
    /// the per-level aggregates sum over.
    pub fn lower(&self) -> AncestryLabel {
        self.lower
    }

    /// Packed per-level syndrome aggregates, one block per hierarchy level
    /// (the empty last level included; its block is all zero).
    pub fn level_blocks(&self) -> &[Vec<u8>] {
        &self.levels
    }
}

/// Everything a build produces: parameters, the edge list for external
/// fault resolution, the hierarchy levels, and all labels. Self-contained:
/// queries read nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    params: SchemeParams,
    edges: Vec<(usize, usize)>,
    levels: Vec<Vec<usize>>,
    vertex_labels: Vec<VertexLabel>,
    edge_labels: Vec<EdgeLabel>,
}

impl LabelSet {
    pub(crate) fn from_parts(
        params: SchemeParams,
        edges: Vec<(usize, usize)>,
        levels: Vec<Vec<usize>>,
        vertex_labels: Vec<VertexLabel>,
        edge_labels: Vec<EdgeLabel>,
    ) -> LabelSet {
        LabelSet {
            params,
            edges,
            levels,
            vertex_labels,
            edge_labels,
        }
    }

    /// Scheme parameters.
    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    /// The original edge list (normalized endpoints, input order), for
    /// resolving external edge references.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Hierarchy levels as sorted original-edge index sets.
    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    /// Label of original vertex `v`.
    ///
    /// # Panics
    ///
    /// Panics if `v` is out of range (subdivision vertices have no label).
    pub fn vertex_label(&self, v: usize) -> &VertexLabel {
        &self.vertex_labels[v]
    }

    /// Label of original edge `e`.
    ///
    /// # Panics
    ///
    /// Panics if `e` is out of range.
    pub fn edge_label(&self, e: usize) -> &EdgeLabel {
        &self.edge_labels[e]
    }

    /// Resolve an edge by endpoints, in either order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().position(|&e| e == key)
    }

    /// Collect fault labels for a set of edge indices.
    ///
    /// Errors with [`crate::Error::Query`] on an out-of-range index.
    pub fn fault_labels(&self, edges: &[usize]) -> Result<Vec<&EdgeLabel>> {
        edges
            .iter()
            .map(|&e| {
                self.edge_labels.get(e).ok_or_else(|| {
                    crate::Error::Query(format!(
                        "fault references edge {e}, but the store has {} edges",
                        self.edge_labels.len()
                    ))
                })
            })
            .collect()
    }
}
