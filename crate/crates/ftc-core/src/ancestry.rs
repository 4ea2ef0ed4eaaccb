//! Ancestry labels: DFS preorder intervals.
//!
//! Each vertex `v` of a rooted tree receives the half-open interval
//! `[start, end)` of preorder positions covered by its subtree. Two such
//! labels decide ancestry in either direction without the tree:
//! `a` is a strict ancestor of `b` iff `b`'s interval is strictly contained
//! in `a`'s. Interval containment is equivalent to `start` containment
//! (preorder intervals are laminar), so the locator encoding elsewhere in
//! this crate can get away with storing only `start` values.
//!
//! Both fields fit in `q = ⌈log2(n+1)⌉` bits for an `n`-vertex tree: `start`
//! ranges over `0..n` and `end` over `1..=n`.

use crate::graph::RootedTree;
use crate::util::ceil_log2;

/// Preorder interval of one vertex: `start` is its preorder position, `end`
/// is one past the last position of its subtree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AncestryLabel {
    /// Preorder position of the vertex itself.
    pub start: u64,
    /// One past the last preorder position in the subtree.
    pub end: u64,
}

impl AncestryLabel {
    /// Whether position `p` falls inside this vertex's subtree interval.
    pub fn contains(&self, p: u64) -> bool {
        self.start <= p && p < self.end
    }
}

/// Number of bits needed for either field of an [`AncestryLabel`] on a tree
/// with `n` vertices: `⌈log2(n + 1)⌉`.
pub fn ancestry_width(n: usize) -> u32 {
    ceil_log2(n as u64 + 1)
}

/// Assign ancestry labels to every vertex of `tree`, indexed by vertex.
pub fn assign_ancestry(tree: &RootedTree) -> Vec<AncestryLabel> {
    (0..tree.len())
        .map(|v| {
            let start = tree.position(v) as u64;
            AncestryLabel {
                start,
                end: start + tree.subtree_size(v) as u64,
            }
        })
        .collect()
}

/// Compare two vertices by their labels alone:
///
/// * `+1` — the first vertex is a strict ancestor of the second,
/// * `-1` — the first is a strict descendant of the second,
/// * `0` — neither (equal or in disjoint subtrees).
pub fn ancestry_decode(a: AncestryLabel, b: AncestryLabel) -> i8 {
    if a == b {
        0
    } else if a.start <= b.start && b.end <= a.end {
        1
    } else if b.start <= a.start && a.end <= b.end {
        -1
    } else {
        0
    }
}
