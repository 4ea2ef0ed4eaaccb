//! Label construction: one pass over the pipeline plus one bottom-up
//! aggregation sweep per hierarchy level.

use crate::ancestry::{ancestry_width, assign_ancestry};
use crate::gf2e::FieldSpec;
use crate::graph::{build_spanning_tree, euler_coordinates, subdivide, Graph};
use crate::outdetect::{accumulate_row_packed, EdgeLocator};
use crate::scheme::{EdgeLabel, LabelSet, SchemeParams, VertexLabel};
use crate::sparsify::{
    build_hierarchy_det, build_hierarchy_rand, map_edges, HierarchyMode, NetBackend,
};
use crate::util::all_zero;
use crate::{Error, Result};

/// Largest accepted fault budget; keeps every derived threshold well inside
/// `u64` range.
const MAX_FAULTS: u32 = 1 << 20;

/// Cap on the total size of all per-edge syndrome blocks (bytes).
const MAX_LABEL_BYTES: u128 = 2 << 30;

/// Build-time configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildConfig {
    /// Hierarchy construction mode.
    pub mode: HierarchyMode,
    /// Net constant of the deterministic construction; also sets the
    /// adaptive decode budget in both modes.
    pub c_net: u64,
    /// Sampling seed; required in randomized mode, rejected otherwise.
    pub seed: Option<u64>,
    /// Net construction backend.
    pub backend: NetBackend,
}

impl Default for BuildConfig {
    fn default() -> BuildConfig {
        BuildConfig {
            mode: HierarchyMode::Deterministic,
            c_net: 32,
            seed: None,
            backend: NetBackend::Slab,
        }
    }
}

/// Build the complete label set for `g` under fault budget `f`.
///
/// Pipeline: spanning tree → subdivision → ancestry on `T′` → plane points
/// from Euler-tour coordinates → hierarchy over the non-tree halves → for
/// every level, per-vertex syndrome rows accumulated bottom-up so each tree
/// edge stores the aggregate of its whole subtree.
///
/// Errors with [`Error::Config`] on an invalid configuration (zero or
/// oversized `f`, zero `c_net`, missing or superfluous seed, unimplemented
/// backend, a graph too large for the supported field widths, or a label
/// table over the memory budget).
pub fn build_labels(g: &Graph, f: u32, config: &BuildConfig) -> Result<LabelSet> {
    if f == 0 {
        return Err(Error::Config("fault budget must be at least 1".into()));
    }
    if f > MAX_FAULTS {
        return Err(Error::Config(format!(
            "fault budget {f} exceeds the supported maximum {MAX_FAULTS}"
        )));
    }
    if config.c_net == 0 {
        return Err(Error::Config("net constant must be at least 1".into()));
    }
    if config.backend == NetBackend::LogLog {
        return Err(Error::Config(
            "the loglog net backend is recognized but not implemented; use the slab backend"
                .into(),
        ));
    }
    match (config.mode, config.seed) {
        (HierarchyMode::Randomized, None) => {
            return Err(Error::Config(
                "randomized mode requires an explicit seed".into(),
            ));
        }
        (HierarchyMode::Deterministic, Some(_)) => {
            return Err(Error::Config(
                "a seed applies only to randomized mode".into(),
            ));
        }
        _ => {}
    }

    let n = g.vertex_count();
    let m = g.edge_count();
    let tree = build_spanning_tree(g, 0);
    let aux = subdivide(g, &tree);
    let tp = aux.tree();
    let n_prime = tp.len();
    debug_assert_eq!(n_prime, m + 1);

    let q = ancestry_width(n_prime);
    let field = FieldSpec::for_width(2 * q + 1).map_err(|_| {
        Error::Config(format!(
            "graph needs {} locator bits, beyond the supported field widths",
            2 * q + 1
        ))
    })?;
    let eb = field.elem_bytes();

    let anc = assign_ancestry(tp);
    let coords = euler_coordinates(tp);
    let points = map_edges(&coords, aux.non_tree_edges());
    let hierarchy = match config.mode {
        HierarchyMode::Deterministic => build_hierarchy_det(&points, f, n_prime, config.c_net),
        HierarchyMode::Randomized => {
            build_hierarchy_rand(&points, f, n_prime, config.seed.expect("validated above"))
        }
    };
    let threshold = hierarchy.threshold();
    let h = hierarchy.depth();

    // One packed block is 2K elements; every edge stores h+1 of them.
    let sb = 2 * threshold as usize * eb;
    let total = (h as u128 + 1) * sb as u128 * m.max(1) as u128;
    if total > MAX_LABEL_BYTES {
        return Err(Error::Config(format!(
            "label table would need {total} bytes of syndrome blocks, \
             beyond the {MAX_LABEL_BYTES}-byte budget; lower f or c_net"
        )));
    }

    // Locator and half-edge endpoints per non-tree original edge.
    let mut half: Vec<Option<(usize, usize, EdgeLocator)>> = vec![None; m];
    for nt in aux.non_tree_edges() {
        let loc = EdgeLocator::encode(
            q,
            anc[nt.midpoint].start,
            anc[nt.endpoint].start,
        );
        half[nt.original] = Some((nt.midpoint, nt.endpoint, loc));
    }

    let k = threshold as usize;
    let mut edge_levels: Vec<Vec<Vec<u8>>> = vec![Vec::with_capacity(h + 1); m];
    let mut buf = vec![0u8; n_prime * sb];
    for level in hierarchy.levels() {
        buf.fill(0);
        for &e in level {
            let (mid, endpoint, loc) = half[e].expect("levels hold non-tree edges");
            accumulate_row_packed(&field, loc, k, &mut buf[mid * sb..(mid + 1) * sb]);
            accumulate_row_packed(
                &field,
                loc,
                k,
                &mut buf[endpoint * sb..(endpoint + 1) * sb],
            );
        }
        // Bottom-up sweep in reverse preorder: afterwards each vertex slice
        // holds the aggregate of its whole subtree.
        for p in (1..n_prime).rev() {
            let v = tp.vertex_at(p);
            let parent = tp.parent(v);
            xor_within(&mut buf, parent * sb, v * sb, sb);
        }
        // Every level edge was added at both endpoints, so the total is 0.
        debug_assert!(all_zero(&buf[tp.root() * sb..(tp.root() + 1) * sb]));
        for (e, levels) in edge_levels.iter_mut().enumerate() {
            let lower = aux.lower_endpoint(e);
            levels.push(buf[lower * sb..(lower + 1) * sb].to_vec());
        }
    }

    let vertex_labels: Vec<VertexLabel> = (0..n).map(|v| VertexLabel::new(anc[v])).collect();
    let edge_labels: Vec<EdgeLabel> = edge_levels
        .into_iter()
        .enumerate()
        .map(|(e, levels)| {
            let lower = aux.lower_endpoint(e);
            let upper = tp.parent(lower);
            EdgeLabel::new(anc[upper], anc[lower], levels)
        })
        .collect();

    let params = SchemeParams {
        n,
        m,
        f,
        q,
        w: field.width(),
        threshold,
        h,
        mode: config.mode,
        c_net: config.c_net,
        seed: config.seed,
    };
    Ok(LabelSet::from_parts(
        params,
        g.edges().to_vec(),
        hierarchy.levels().to_vec(),
        vertex_labels,
        edge_labels,
    ))
}

/// XOR `len` bytes at `src` into `len` bytes at `dst` within one buffer.
fn xor_within(buf: &mut [u8], dst: usize, src: usize, len: usize) {
    debug_assert!(dst.abs_diff(src) >= len, "slices must not overlap");
    if dst < src {
        let (head, tail) = buf.split_at_mut(src);
        let d = &mut head[dst..dst + len];
        let s = &tail[..len];
        for (x, y) in d.iter_mut().zip(s) {
            *x ^= *y;
        }
    } else {
        let (head, tail) = buf.split_at_mut(dst);
        let s = &head[src..src + len];
        let d = &mut tail[..len];
        for (x, y) in d.iter_mut().zip(s) {
            *x ^= *y;
        }
    }
}
