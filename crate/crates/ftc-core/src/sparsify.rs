//! Geometric sparsification: ε-nets over Euler-tour points and the
//! level hierarchy they induce.
//!
//! Every non-tree edge of the auxiliary graph becomes a point in the plane
//! whose coordinates are the Euler-tour positions of its endpoints
//! ([`map_edges`]). Under this mapping, the boundary of any set assembled
//! from few subtrees is covered by a bounded number of axis-aligned
//! rectangles, so a point subset hitting every *heavy* rectangle — an ε-net
//! — preserves a witness edge of every heavy boundary.
//!
//! The deterministic construction ([`netfind`]) recursively bisects by a
//! vertical line and covers rectangles straddling the bisector with slab
//! nets for three-sided (border-anchored) rectangles
//! ([`three_sided_net`]). Iterating it halves the edge set per level and
//! yields the hierarchy ([`build_hierarchy_det`]): nested edge sets
//! `E_0 ⊋ E_1 ⊋ … ⊋ E_h = ∅` such that whenever a relevant cut has more
//! than `K` boundary edges at one level, the next level still contains at
//! least one of them. A randomized variant ([`build_hierarchy_rand`]) keeps
//! each edge with probability 1/2 per level and gets the same guarantee
//! with high probability at a smaller threshold.
//!
//! [`verify_goodness`] is the audit oracle: it checks the hierarchy
//! guarantee by direct boundary counting on caller-sampled cuts.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::graph::{AuxiliaryGraph, NonTreeEdge};
use crate::util::lg;
use crate::{Error, Result};

/// A non-tree edge as a plane point: Euler-tour coordinates of its two
/// endpoints with `x < y`, plus the originating edge index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanePoint {
    /// Smaller Euler-tour coordinate of the two endpoints.
    pub x: u64,
    /// Larger Euler-tour coordinate of the two endpoints.
    pub y: u64,
    /// Index of the originating edge in the *original* graph.
    pub payload: usize,
}

/// Which vertical border of the ambient range anchored rectangles touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// Rectangles whose left side lies on the range's left border.
    Left,
    /// Rectangles whose right side lies on the range's right border.
    Right,
}

/// Map the subdivided non-tree edges to plane points using Euler-tour
/// coordinates `coords` of `T′` (indexed by vertex).
pub fn map_edges(coords: &[u64], non_tree: &[NonTreeEdge]) -> Vec<PlanePoint> {
    non_tree
        .iter()
        .map(|nt| {
            let a = coords[nt.midpoint];
            let b = coords[nt.endpoint];
            debug_assert_ne!(a, b, "tour coordinates are distinct per vertex");
            PlanePoint {
                x: a.min(b),
                y: a.max(b),
                payload: nt.original,
            }
        })
        .collect()
}

/// ε-net for three-sided rectangles anchored on one vertical border.
///
/// Sorts by `y` and cuts the points into slabs of exactly `⌈eps·N/4⌉`
/// (the last slab smaller); each slab contributes its extreme-`x` point for
/// the given anchor. Any anchored rectangle containing at least `eps·N`
/// points spans a whole slab and is therefore hit; the net has at most
/// `4/eps + 1 ≤ 8/eps` points.
///
/// Errors with [`Error::Argument`] unless `0 < eps ≤ 1`.
pub fn three_sided_net(
    points: &[PlanePoint],
    anchor: Anchor,
    eps: f64,
) -> Result<Vec<PlanePoint>> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Argument(format!(
            "three-sided net density must be in (0, 1], got {eps}"
        )));
    }
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let slab = ((eps * points.len() as f64) / 4.0).ceil().max(1.0) as usize;
    Ok(three_sided_net_slabs(points, anchor, slab))
}

/// Slab-size-parameterized core of [`three_sided_net`]; also used inside
/// [`netfind`], where the slab size `4·log2 N` is an exact integer.
fn three_sided_net_slabs(points: &[PlanePoint], anchor: Anchor, slab: usize) -> Vec<PlanePoint> {
    debug_assert!(slab >= 1);
    let mut pts = points.to_vec();
    pts.sort_unstable_by_key(|p| (p.y, p.x, p.payload));
    let mut net: Vec<PlanePoint> = pts
        .chunks(slab)
        .map(|chunk| {
            let pick = match anchor {
                Anchor::Right => chunk.iter().max_by_key(|p| (p.x, p.payload)),
                Anchor::Left => chunk.iter().min_by_key(|p| (p.x, p.payload)),
            };
            *pick.expect("chunks are nonempty")
        })
        .collect();
    net.sort_unstable_by_key(|p| p.payload);
    net
}

/// The deterministic net recursion over general axis-aligned rectangles.
///
/// `n_bound ≥ |points|` fixes the logarithm in all thresholds. Base case:
/// `|P| ≤ 4·log2 N` returns the empty set. Otherwise the points are split
/// into halves of `⌈|P|/2⌉` and `⌊|P|/2⌋` by `(x, y, payload)` order, each
/// half contributes a three-sided net of slab size `4·log2 N` anchored at
/// its bisector side, and the recursion continues into both halves.
///
/// The output (deduplicated, ascending by payload) has at most
/// `|P|·log2|P| / (2·log2 N)` points, and every axis-aligned rectangle
/// containing at least `32·log2 N` points of `P` contains an output point.
///
/// # Panics
///
/// Panics if `n_bound < |points|`.
pub fn netfind(points: &[PlanePoint], n_bound: usize) -> Vec<PlanePoint> {
    assert!(n_bound >= points.len(), "size bound below the point count");
    let lgn = lg(n_bound.max(1) as u64) as usize;
    let mut out = Vec::new();
    netfind_into(points, lgn, &mut out);
    out.sort_unstable_by_key(|p| p.payload);
    out.dedup_by_key(|p| p.payload);
    out
}

fn netfind_into(points: &[PlanePoint], lgn: usize, out: &mut Vec<PlanePoint>) {
    if points.len() <= 4 * lgn {
        return;
    }
    let mut pts = points.to_vec();
    pts.sort_unstable_by_key(|p| (p.x, p.y, p.payload));
    let mid = pts.len().div_ceil(2);
    let (left, right) = pts.split_at(mid);
    // Rectangles crossing the bisector are right-anchored within the left
    // half and left-anchored within the right half.
    out.extend(three_sided_net_slabs(left, Anchor::Right, 4 * lgn));
    out.extend(three_sided_net_slabs(right, Anchor::Left, 4 * lgn));
    netfind_into(left, lgn, out);
    netfind_into(right, lgn, out);
}

/// Selectable net construction for the deterministic hierarchy.
///
/// Only the slab recursion is implemented. The interval-tree variant with
/// doubly-logarithmic net sizes is recognized so configurations can name
/// it, but selecting it is a configuration error in consumers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetBackend {
    /// Slab-based three-sided nets inside a bisection recursion.
    Slab,
    /// Doubly-logarithmic nets; recognized but not implemented.
    LogLog,
}

/// Whether the hierarchy levels were thinned deterministically or by
/// seeded coin flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HierarchyMode {
    /// Net-based construction with a worst-case guarantee.
    Deterministic,
    /// Probability-1/2 sampling per edge per level, seeded.
    Randomized,
}

/// Nested edge-index sets `E_0 ⊋ E_1 ⊋ … ⊋ E_h = ∅` with the per-level
/// decode threshold they support.
///
/// Levels hold *original* edge indices, ascending. The last level is always
/// empty; `E_0` is the full non-tree edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    mode: HierarchyMode,
    levels: Vec<Vec<usize>>,
    threshold: u64,
    c_net: u64,
    seed: Option<u64>,
}

impl Hierarchy {
    /// Construction mode.
    pub fn mode(&self) -> HierarchyMode {
        self.mode
    }

    /// The levels, outermost first; `levels()[0]` is the full non-tree set
    /// and the last level is empty.
    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    /// Depth `h`: index of the (empty) last level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// The decode threshold `K` the construction guarantees.
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// Net constant used by the deterministic construction.
    pub fn c_net(&self) -> u64 {
        self.c_net
    }

    /// Sampling seed (randomized mode only).
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Threshold `K = c_net · (2f+1)² · log2 n′` of the deterministic
/// construction (logarithm: base-2 ceiling, floored at 1).
///
/// # Panics
///
/// Panics if the product overflows `u64`; callers validate `f` and `c_net`.
pub fn det_threshold(f: u32, n_prime: usize, c_net: u64) -> u64 {
    let side = 2 * f as u64 + 1;
    c_net
        .checked_mul(side * side)
        .and_then(|v| v.checked_mul(lg(n_prime.max(1) as u64) as u64))
        .expect("threshold overflows u64")
}

/// Threshold `K = 5f · log2 n′` of the randomized construction.
pub fn rand_threshold(f: u32, n_prime: usize) -> u64 {
    5 * f as u64 * lg(n_prime.max(1) as u64) as u64
}

/// Deterministic hierarchy: iterate [`netfind`] with `N = |E_i|` until the
/// level is empty. The levels are independent of `f` (the hierarchy is
/// universal); only the threshold reflects it.
pub fn build_hierarchy_det(
    points: &[PlanePoint],
    f: u32,
    n_prime: usize,
    c_net: u64,
) -> Hierarchy {
    let threshold = det_threshold(f, n_prime, c_net);
    let mut levels = vec![points.iter().map(|p| p.payload).collect::<Vec<_>>()];
    levels[0].sort_unstable();
    let mut cur: Vec<PlanePoint> = points.to_vec();
    while !cur.is_empty() {
        let next = netfind(&cur, cur.len());
        debug_assert!(next.len() <= cur.len().div_ceil(2), "halving violated");
        levels.push(next.iter().map(|p| p.payload).collect());
        cur = next;
    }
    Hierarchy {
        mode: HierarchyMode::Deterministic,
        levels,
        threshold,
        c_net,
        seed: None,
    }
}

/// Randomized hierarchy: keep each edge with probability 1/2 per level
/// (one coin per surviving edge, ascending payload order, from a ChaCha12
/// stream seeded with `seed`); once a level has at most `5f·log2 n′`
/// edges the next level is empty. A draw that removes nothing is redrawn,
/// so nesting is strict.
///
/// # Panics
///
/// Panics if `f == 0`.
pub fn build_hierarchy_rand(
    points: &[PlanePoint],
    f: u32,
    n_prime: usize,
    seed: u64,
) -> Hierarchy {
    assert!(f >= 1, "fault budget must be positive");
    let threshold = rand_threshold(f, n_prime);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut levels = vec![points.iter().map(|p| p.payload).collect::<Vec<_>>()];
    levels[0].sort_unstable();
    let mut cur = levels[0].clone();
    while !cur.is_empty() {
        let next = if cur.len() as u64 <= threshold {
            Vec::new()
        } else {
            loop {
                let cand: Vec<usize> = cur
                    .iter()
                    .copied()
                    .filter(|_| rng.next_u32() & 1 == 1)
                    .collect();
                if cand.len() < cur.len() {
                    break cand;
                }
                // All coins came up heads: redraw to keep nesting strict.
            }
        };
        levels.push(next.clone());
        cur = next;
    }
    Hierarchy {
        mode: HierarchyMode::Randomized,
        levels,
        threshold,
        c_net: 0,
        seed: Some(seed),
    }
}

/// Outcome of a [`verify_goodness`] audit.
#[derive(Debug, Clone)]
pub struct GoodnessReport {
    /// Number of cut sets audited.
    pub sets_checked: usize,
    /// Number of (set, level) pairs violating the hierarchy guarantee.
    pub violations: usize,
    /// Human-readable descriptions of the first few violations.
    pub examples: Vec<String>,
    /// Largest per-level boundary size observed across all audited sets.
    pub max_boundary: u64,
}

/// Audit the hierarchy guarantee by direct counting.
///
/// Each element of `subtree_edge_sets` describes one cut `S`: a set of
/// original-edge indices, each standing for the tree edge of `T′` assigned
/// to it; `S` is the symmetric difference of the subtrees hanging below
/// those tree edges. For every consecutive level pair the auditor checks
/// the implication *boundary at `E_i` larger than `threshold` ⟹ boundary
/// at `E_{i+1}` nonempty*, counting boundary edges of `S` among each
/// level's edges directly in the tree.
pub fn verify_goodness(
    aux: &AuxiliaryGraph,
    hierarchy: &Hierarchy,
    threshold: u64,
    subtree_edge_sets: &[Vec<usize>],
) -> GoodnessReport {
    let tree = aux.tree();
    let n_prime = tree.len();
    let mut report = GoodnessReport {
        sets_checked: 0,
        violations: 0,
        examples: Vec::new(),
        max_boundary: 0,
    };
    // Reusable membership-by-preorder-position array.
    let mut member = vec![false; n_prime];
    for set in subtree_edge_sets {
        report.sets_checked += 1;
        member.fill(false);
        // XOR of subtree intervals, evaluated positionally.
        let mut toggles = vec![0u32; n_prime + 1];
        for &e in set {
            let lower = aux.lower_endpoint(e);
            let start = tree.position(lower);
            toggles[start] += 1;
            toggles[start + tree.subtree_size(lower)] += 1;
        }
        let mut parity = 0u32;
        for p in 0..n_prime {
            parity += toggles[p];
            member[tree.vertex_at(p)] = parity % 2 == 1;
        }

        let mut boundary: Vec<u64> = Vec::with_capacity(hierarchy.levels().len());
        for level in hierarchy.levels() {
            let count = level
                .iter()
                .filter(|&&e| {
                    let pos = aux
                        .non_tree_edges()
                        .binary_search_by_key(&e, |nt| nt.original)
                        .expect("level edge is non-tree");
                    let nt = &aux.non_tree_edges()[pos];
                    member[nt.midpoint] != member[nt.endpoint]
                })
                .count() as u64;
            report.max_boundary = report.max_boundary.max(count);
            boundary.push(count);
        }
        for i in 0..boundary.len() - 1 {
            if boundary[i] > threshold && boundary[i + 1] == 0 {
                report.violations += 1;
                if report.examples.len() < 10 {
                    report.examples.push(format!(
                        "cut over tree edges {set:?}: boundary {} at level {i} \
                         exceeds threshold {threshold} but vanishes at level {}",
                        boundary[i],
                        i + 1
                    ));
                }
            }
        }
    }
    report
}
