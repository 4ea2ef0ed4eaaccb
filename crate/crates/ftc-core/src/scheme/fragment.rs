//! Fragment decomposition of `T′` induced by a fault set, with per-fragment
//! cutsets and boundary syndromes derived purely from the fault labels.

use crate::gf2e::FieldSpec;
use crate::outdetect::{syndrome_decode, DecodeResult, EdgeLocator, OutdetectSyndrome};
use crate::scheme::{EdgeLabel, SchemeParams, VertexLabel};
use crate::util::all_zero;
use crate::{Error, Result};

/// One fragment: cutset over the fault indices as a bit vector with its
/// cardinality, and the packed per-level boundary syndrome.
#[derive(Debug, Clone)]
pub(crate) struct Fragment {
    pub(crate) cutset: Vec<u64>,
    pub(crate) count: u32,
    pub(crate) synd: Vec<Vec<u8>>,
}

/// The decomposition of `T′` by a fault set `F`: one fragment per fault
/// (the subtree below its lower endpoint, minus deeper fault subtrees)
/// plus the root fragment. Fragment `i < |F|` is identified by fault `i`;
/// fragment `|F|` is the root.
///
/// Each fragment's tree cutset is its identifying fault plus the faults
/// immediately nested inside it, and its boundary syndrome is the XOR of
/// the stored aggregates of exactly those faults — over characteristic
/// two, subtracting the nested subtrees and adding the enclosing one are
/// the same operation.
#[derive(Debug, Clone)]
pub struct FragmentTable {
    params: SchemeParams,
    field: FieldSpec,
    intervals: Vec<(u64, u64)>,
    fragments: Vec<Fragment>,
    s_fragment: usize,
    t_fragment: usize,
}

/// Build the fragment table for fault labels `faults` and endpoint labels
/// `s` and `t`.
///
/// Errors with [`Error::Query`] when `|F|` exceeds the budget, a fault is
/// repeated, a label is malformed for these parameters (wrong level count
/// or block size, intervals out of range, upper not enclosing lower), or
/// the intervals are not laminar.
pub fn build_fragment_table(
    params: &SchemeParams,
    faults: &[&EdgeLabel],
    s: &VertexLabel,
    t: &VertexLabel,
) -> Result<FragmentTable> {
    let d = faults.len();
    if d as u64 > u64::from(params.f) {
        return Err(Error::Query(format!(
            "{d} faults exceed the fault budget {}",
            params.f
        )));
    }
    let field = params
        .field()
        .map_err(|_| Error::Query("parameters specify an unsupported field width".into()))?;
    let np = params.n_prime() as u64;
    let sb = params.syndrome_bytes();

    let check_interval = |a: crate::ancestry::AncestryLabel| -> Result<()> {
        if a.start < a.end && a.end <= np {
            Ok(())
        } else {
            Err(Error::Query(format!(
                "ancestry interval [{}, {}) is out of range for n′ = {np}",
                a.start, a.end
            )))
        }
    };
    for label in faults {
        check_interval(label.upper())?;
        check_interval(label.lower())?;
        let (u, l) = (label.upper(), label.lower());
        if !(u.start < l.start && l.end <= u.end) {
            return Err(Error::Query(
                "fault label is not a tree-edge label: upper interval does not \
                 strictly enclose the lower"
                    .into(),
            ));
        }
        if label.level_blocks().len() != params.h + 1
            || label.level_blocks().iter().any(|b| b.len() != sb)
        {
            return Err(Error::Query(
                "fault label does not match the scheme parameters".into(),
            ));
        }
    }
    check_interval(s.ancestry())?;
    check_interval(t.ancestry())?;

    // Lower-endpoint intervals identify tree edges uniquely.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&i| {
        let l = faults[i].lower();
        (l.start, std::cmp::Reverse(l.end))
    });
    for w in order.windows(2) {
        if faults[w[0]].lower().start == faults[w[1]].lower().start {
            return Err(Error::Query("fault set repeats an edge".into()));
        }
    }

    // Laminar sweep in (start asc, end desc) order: the enclosing stack
    // top is each fault's immediate parent.
    let mut parent: Vec<Option<usize>> = vec![None; d];
    let mut stack: Vec<usize> = Vec::new();
    for &i in &order {
        let cur = faults[i].lower();
        while let Some(&top) = stack.last() {
            if faults[top].lower().end <= cur.start {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&top) = stack.last() {
            if cur.end > faults[top].lower().end {
                return Err(Error::Query(
                    "fault intervals overlap without nesting; not a tree-edge set".into(),
                ));
            }
            parent[i] = Some(top);
        }
        stack.push(i);
    }

    // Cutsets: every fault separates its own fragment from its parent's.
    let words = d.div_ceil(64).max(1);
    let mut fragments: Vec<Fragment> = (0..=d)
        .map(|_| Fragment {
            cutset: vec![0u64; words],
            count: 0,
            synd: vec![vec![0u8; sb]; params.h + 1],
        })
        .collect();
    for i in 0..d {
        let owner = i;
        let enclosing = parent[i].unwrap_or(d);
        for frag in [owner, enclosing] {
            fragments[frag].cutset[i / 64] |= 1 << (i % 64);
            fragments[frag].count += 1;
            for (acc, block) in fragments[frag].synd.iter_mut().zip(faults[i].level_blocks()) {
                for (x, y) in acc.iter_mut().zip(block) {
                    *x ^= *y;
                }
            }
        }
    }
    debug_assert_eq!(
        fragments.iter().map(|fr| u64::from(fr.count)).sum::<u64>(),
        2 * d as u64,
        "each fault borders exactly two fragments"
    );

    let intervals: Vec<(u64, u64)> = faults
        .iter()
        .map(|l| (l.lower().start, l.lower().end))
        .collect();
    let table = FragmentTable {
        params: *params,
        field,
        intervals,
        fragments,
        s_fragment: 0,
        t_fragment: 0,
    };
    let s_fragment = table.fragment_of_position(s.ancestry().start);
    let t_fragment = table.fragment_of_position(t.ancestry().start);
    Ok(FragmentTable {
        s_fragment,
        t_fragment,
        ..table
    })
}

impl FragmentTable {
    /// Number of fragments: `|F| + 1`.
    pub fn fragment_count(&self) -> usize {
        self.fragments.len()
    }

    /// Number of faults.
    pub fn fault_count(&self) -> usize {
        self.fragments.len() - 1
    }

    /// Fragment holding the vertex whose preorder position is `p`: the
    /// innermost fault interval containing `p`, or the root fragment.
    pub fn fragment_of_position(&self, p: u64) -> usize {
        let mut best: Option<usize> = None;
        for (i, &(start, end)) in self.intervals.iter().enumerate() {
            if start <= p && p < end {
                match best {
                    Some(b) if self.intervals[b].0 >= start => {}
                    _ => best = Some(i),
                }
            }
        }
        best.unwrap_or(self.fault_count())
    }

    /// Fragment containing `s`.
    pub fn s_fragment(&self) -> usize {
        self.s_fragment
    }

    /// Fragment containing `t`.
    pub fn t_fragment(&self) -> usize {
        self.t_fragment
    }

    /// Whether `s` and `t` share a fragment, making the query trivially
    /// connected through intact tree edges.
    pub fn immediate_true(&self) -> bool {
        self.s_fragment == self.t_fragment
    }

    /// Tree-cutset cardinality of a fragment.
    pub fn cutset_count(&self, fragment: usize) -> u32 {
        self.fragments[fragment].count
    }

    /// Tree cutset of a fragment as a bit vector over fault indices.
    pub fn cutset_words(&self, fragment: usize) -> &[u64] {
        &self.fragments[fragment].cutset
    }

    /// Packed boundary syndrome of a fragment at one hierarchy level.
    pub fn syndrome_bytes(&self, fragment: usize, level: usize) -> &[u8] {
        &self.fragments[fragment].synd[level]
    }

    /// Scheme parameters the table was built under.
    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub(crate) fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub(crate) fn fragment(&self, fragment: usize) -> &Fragment {
        &self.fragments[fragment]
    }

    /// Decode one outgoing edge of a fragment with decode budget `k′`:
    /// scan levels from the sparsest down, decode the first nonzero
    /// `2k′`-prefix, and return the smallest recovered locator, or `None`
    /// if every prefix is zero (the fragment has no outgoing edge).
    ///
    /// Errors with [`Error::Internal`] on decoder overflow: under the
    /// deterministic hierarchy guarantee a scanned nonzero level always
    /// carries at most `k′` boundary edges, so overflow means a broken
    /// invariant (in randomized mode, a failed sample).
    pub fn outdetect_query(&self, fragment: usize, k_prime: u64) -> Result<Option<EdgeLocator>> {
        Ok(
            scan_levels(&self.params, &self.field, &self.fragments[fragment].synd, k_prime)?
                .map(|(loc, _)| loc),
        )
    }
}

/// Shared level scan: decode the topmost nonzero `2k′`-prefix of a packed
/// per-level syndrome stack. Returns the chosen locator and its level.
pub(crate) fn scan_levels(
    params: &SchemeParams,
    field: &FieldSpec,
    stack: &[Vec<u8>],
    k_prime: u64,
) -> Result<Option<(EdgeLocator, usize)>> {
    debug_assert!(k_prime >= 1 && k_prime <= params.threshold);
    let eb = field.elem_bytes();
    let prefix = 2 * k_prime as usize * eb;
    for i in (0..params.h).rev() {
        let bytes = &stack[i][..prefix];
        if all_zero(bytes) {
            continue;
        }
        let syn = OutdetectSyndrome::from_packed(field, bytes, k_prime as usize)
            .map_err(|e| Error::Internal(format!("stored syndrome unreadable: {e}")))?;
        match syndrome_decode(field, &syn, k_prime as usize, Some(params.q))? {
            DecodeResult::Edges(locs) => {
                let loc = *locs.first().expect("decoded edge list is nonempty");
                return Ok(Some((loc, i)));
            }
            DecodeResult::Overflow => {
                return Err(Error::Internal(format!(
                    "outdetect overflow at level {i} with budget {k_prime}: \
                     hierarchy guarantee violated"
                )));
            }
            DecodeResult::Empty => {
                return Err(Error::Internal(
                    "nonzero syndrome prefix decoded as empty".into(),
                ));
            }
        }
    }
    Ok(None)
}
