//! The two query engines: the reference fragment-growing loop and the
//! heap-based engine that always expands a smallest-cutset component.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::scheme::fragment::{build_fragment_table, scan_levels, Fragment};
use crate::scheme::{EdgeLabel, SchemeParams, VertexLabel};
use crate::util::lg;
use crate::{Error, Result};

/// Instrumentation record of one merge step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeRecord {
    /// Hierarchy level whose syndrome produced the edge.
    pub level: usize,
    /// Decode budget `k′` used for the scan.
    pub k_prime: u64,
    /// Tree-cutset cardinality of the set being expanded.
    pub boundary: u32,
}

/// Instrumentation of one query run.
#[derive(Debug, Clone, Default)]
pub struct QueryStats {
    /// One record per successful merge, in order.
    pub merges: Vec<MergeRecord>,
    /// Fragments discarded for having no outgoing edge (heap engine).
    pub discards: u32,
    /// Heap removals, stale entries included (heap engine).
    pub heap_pops: u32,
    /// Whether `s` and `t` shared a fragment outright.
    pub immediate: bool,
}

/// Adaptive decode budget for a set with `boundary` tree-cutset edges:
/// `min(K, c_net·(2·boundary+1)²·log2 n′)`. Independent of the fault
/// budget, so small fault sets decode short prefixes even when `f` is
/// large.
pub fn adaptive_budget(params: &SchemeParams, boundary: u32) -> u64 {
    let side = 2 * u64::from(boundary) + 1;
    let fine = params
        .c_net
        .saturating_mul(side * side)
        .saturating_mul(u64::from(lg(params.n_prime().max(1) as u64)));
    params.threshold.min(fine).max(1)
}

/// Decide whether `s` and `t` stay connected after removing the faults,
/// with the reference engine.
pub fn query_basic(
    params: &SchemeParams,
    s: &VertexLabel,
    t: &VertexLabel,
    faults: &[&EdgeLabel],
) -> Result<bool> {
    query_basic_with_stats(params, s, t, faults).map(|(v, _)| v)
}

/// [`query_basic`] with instrumentation.
pub fn query_basic_with_stats(
    params: &SchemeParams,
    s: &VertexLabel,
    t: &VertexLabel,
    faults: &[&EdgeLabel],
) -> Result<(bool, QueryStats)> {
    let table = build_fragment_table(params, faults, s, t)?;
    let mut stats = QueryStats {
        immediate: table.immediate_true(),
        ..QueryStats::default()
    };
    if table.immediate_true() {
        return Ok((true, stats));
    }
    let d = table.fault_count();
    let mut absorbed = vec![false; d + 1];
    absorbed[table.s_fragment()] = true;
    let mut set = table.fragment(table.s_fragment()).clone();

    // Each round either merges a new fragment or proves there is none
    // left to reach, so d+1 rounds always suffice.
    for _ in 0..=d {
        debug_assert_eq!(
            set.count,
            set.cutset.iter().map(|w| w.count_ones()).sum::<u32>(),
            "cutset counter out of sync"
        );
        let k_prime = adaptive_budget(params, set.count);
        match scan_levels(params, table.field(), &set.synd, k_prime)? {
            None => return Ok((false, stats)),
            Some((loc, level)) => {
                let (p1, p2) = loc
                    .decode(params.q)
                    .ok_or_else(|| Error::Internal("decoded locator is malformed".into()))?;
                let f1 = table.fragment_of_position(p1);
                let f2 = table.fragment_of_position(p2);
                let outside = match (absorbed[f1], absorbed[f2]) {
                    (true, false) => f2,
                    (false, true) => f1,
                    _ => {
                        return Err(Error::Internal(
                            "decoded edge does not leave the current set".into(),
                        ))
                    }
                };
                stats.merges.push(MergeRecord {
                    level,
                    k_prime,
                    boundary: set.count,
                });
                absorbed[outside] = true;
                merge_into(&mut set, table.fragment(outside));
                if absorbed[table.t_fragment()] {
                    return Ok((true, stats));
                }
            }
        }
    }
    Err(Error::Internal(
        "merge loop exceeded the fragment bound".into(),
    ))
}

/// Decide connectivity with the heap engine. Always returns the same
/// boolean as [`query_basic`].
pub fn query_fast(
    params: &SchemeParams,
    s: &VertexLabel,
    t: &VertexLabel,
    faults: &[&EdgeLabel],
) -> Result<bool> {
    query_fast_with_stats(params, s, t, faults).map(|(v, _)| v)
}

/// [`query_fast`] with instrumentation.
pub fn query_fast_with_stats(
    params: &SchemeParams,
    s: &VertexLabel,
    t: &VertexLabel,
    faults: &[&EdgeLabel],
) -> Result<(bool, QueryStats)> {
    let table = build_fragment_table(params, faults, s, t)?;
    let mut stats = QueryStats {
        immediate: table.immediate_true(),
        ..QueryStats::default()
    };
    if table.immediate_true() {
        return Ok((true, stats));
    }
    let d = table.fault_count();
    let mut nodes: Vec<Fragment> = (0..=d).map(|i| table.fragment(i).clone()).collect();
    let mut alive = vec![true; d + 1];
    let mut stamp = vec![0u32; d + 1];
    let mut dsu = Dsu::new(d + 1);
    // Min-heap on (cutset size, fragment id, stamp); stale entries are
    // filtered on removal by stamp and root checks.
    let mut heap: BinaryHeap<Reverse<(u32, usize, u32)>> = (0..=d)
        .map(|i| Reverse((nodes[i].count, i, 0)))
        .collect();
    let budget = 4 * (d as u32 + 1) + 4;

    while let Some(Reverse((count, id, gen))) = heap.pop() {
        stats.heap_pops += 1;
        if stats.heap_pops > budget {
            return Err(Error::Internal(
                "heap engine exceeded its operation budget".into(),
            ));
        }
        if dsu.find(id) != id || !alive[id] || stamp[id] != gen {
            continue;
        }
        debug_assert_eq!(count, nodes[id].count);
        let k_prime = adaptive_budget(params, count);
        match scan_levels(params, table.field(), &nodes[id].synd, k_prime)? {
            None => {
                // No outgoing edge: this component is final.
                if dsu.find(table.s_fragment()) == id || dsu.find(table.t_fragment()) == id {
                    return Ok((false, stats));
                }
                alive[id] = false;
                stats.discards += 1;
            }
            Some((loc, level)) => {
                let (p1, p2) = loc
                    .decode(params.q)
                    .ok_or_else(|| Error::Internal("decoded locator is malformed".into()))?;
                let f1 = dsu.find(table.fragment_of_position(p1));
                let f2 = dsu.find(table.fragment_of_position(p2));
                let other = match (f1 == id, f2 == id) {
                    (true, false) => f2,
                    (false, true) => f1,
                    _ => {
                        return Err(Error::Internal(
                            "decoded edge does not leave the popped component".into(),
                        ))
                    }
                };
                if !alive[other] {
                    return Err(Error::Internal(
                        "decoded edge enters a component with no boundary".into(),
                    ));
                }
                stats.merges.push(MergeRecord {
                    level,
                    k_prime,
                    boundary: count,
                });
                let winner = dsu.union(id, other);
                let loser = if winner == id { other } else { id };
                let loser_node = std::mem::replace(
                    &mut nodes[loser],
                    Fragment {
                        cutset: Vec::new(),
                        count: 0,
                        synd: Vec::new(),
                    },
                );
                merge_into(&mut nodes[winner], &loser_node);
                stamp[winner] += 1;
                heap.push(Reverse((nodes[winner].count, winner, stamp[winner])));
                if dsu.find(table.s_fragment()) == dsu.find(table.t_fragment()) {
                    return Ok((true, stats));
                }
            }
        }
    }
    Err(Error::Internal(
        "heap engine ran out of fragments without a verdict".into(),
    ))
}

/// Fold `other` into `acc`: symmetric difference of cutsets, sum of
/// syndromes.
fn merge_into(acc: &mut Fragment, other: &Fragment) {
    for (x, y) in acc.cutset.iter_mut().zip(&other.cutset) {
        *x ^= *y;
    }
    acc.count = acc.cutset.iter().map(|w| w.count_ones()).sum();
    for (a, b) in acc.synd.iter_mut().zip(&other.synd) {
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }
}

/// Minimal union-find with path halving and union by size.
struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        debug_assert_ne!(ra, rb);
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        big
    }
}
