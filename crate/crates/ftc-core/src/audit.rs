//! Verification drivers: query sampling against a known graph and
//! cross-checking both engines against direct graph search.

use std::collections::HashSet;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::graph::{build_spanning_tree, oracle_connected, Graph};
use crate::scheme::{query_basic, query_fast, LabelSet};
use crate::{Error, Result};

/// One connectivity query: endpoints and fault edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySpec {
    /// Source vertex.
    pub s: usize,
    /// Target vertex.
    pub t: usize,
    /// Fault edges by original index; at most the build's fault budget.
    pub faults: Vec<usize>,
}

/// Sample a deterministic query mix for `g` under fault budget `f`:
/// uniformly random fault sets, fault sets drawn from the boundary of a
/// grown ball (with `s` inside and `t` outside when possible), and fault
/// sets confined to spanning-tree edges, in equal thirds.
pub fn sample_queries(g: &Graph, f: u32, count: usize, seed: u64) -> Vec<QuerySpec> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = g.vertex_count();
    let m = g.edge_count();
    let f = f as usize;
    let tree = build_spanning_tree(g, 0);
    let tree_edges: Vec<usize> = (0..n).filter_map(|v| tree.tree_edge(v)).collect();

    let pick_distinct = |rng: &mut StdRng, pool: &[usize], want: usize| -> Vec<usize> {
        let want = want.min(pool.len());
        let mut chosen = Vec::with_capacity(want);
        while chosen.len() < want {
            let e = pool[rng.random_range(0..pool.len())];
            if !chosen.contains(&e) {
                chosen.push(e);
            }
        }
        chosen
    };

    let all_edges: Vec<usize> = (0..m).collect();
    (0..count)
        .map(|i| match i % 3 {
            0 => {
                let size = rng.random_range(0..=f);
                QuerySpec {
                    s: rng.random_range(0..n),
                    t: rng.random_range(0..n),
                    faults: pick_distinct(&mut rng, &all_edges, size),
                }
            }
            1 => {
                // Grow a ball; fault its boundary edges.
                let start = rng.random_range(0..n);
                let target = rng.random_range(1..=n.max(2) / 2);
                let mut ball = HashSet::from([start]);
                let mut frontier = vec![start];
                while ball.len() < target {
                    let Some(v) = frontier.pop() else { break };
                    for &(u, _) in g.neighbors(v) {
                        if ball.len() < target && ball.insert(u) {
                            frontier.push(u);
                        }
                    }
                }
                let boundary: Vec<usize> = (0..m)
                    .filter(|&e| {
                        let (u, v) = g.edge(e);
                        ball.contains(&u) != ball.contains(&v)
                    })
                    .collect();
                let size = rng.random_range(1..=f);
                let inside: Vec<usize> = ball.iter().copied().collect();
                let outside: Vec<usize> = (0..n).filter(|v| !ball.contains(v)).collect();
                QuerySpec {
                    s: inside[rng.random_range(0..inside.len())],
                    t: if outside.is_empty() {
                        rng.random_range(0..n)
                    } else {
                        outside[rng.random_range(0..outside.len())]
                    },
                    faults: pick_distinct(&mut rng, &boundary, size),
                }
            }
            _ => {
                let size = rng.random_range(1..=f);
                QuerySpec {
                    s: rng.random_range(0..n),
                    t: rng.random_range(0..n),
                    faults: pick_distinct(&mut rng, &tree_edges, size),
                }
            }
        })
        .collect()
}

/// Outcome of a verification run.
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    /// Queries executed.
    pub trials: usize,
    /// Queries where the reference engine contradicted direct search.
    pub mismatches: usize,
    /// Queries where the two engines disagreed with each other.
    pub disagreements: usize,
    /// Queries that returned an error instead of a verdict.
    pub failures: usize,
    /// Human-readable descriptions of the first few problems.
    pub examples: Vec<String>,
    /// Median per-query time (both engines plus the oracle), microseconds.
    pub p50_micros: u128,
    /// 90th-percentile per-query time, microseconds.
    pub p90_micros: u128,
    /// Slowest query, microseconds.
    pub max_micros: u128,
}

impl VerifyReport {
    /// Whether the run was fully clean.
    pub fn clean(&self) -> bool {
        self.mismatches == 0 && self.disagreements == 0 && self.failures == 0
    }
}

/// Run every query through both engines and direct graph search.
///
/// Errors with [`Error::Validation`] if the label set does not describe
/// `g` (vertex count or edge list differs).
pub fn verify_against_oracle(
    g: &Graph,
    labels: &LabelSet,
    queries: &[QuerySpec],
) -> Result<VerifyReport> {
    if labels.params().n != g.vertex_count() || labels.edges() != g.edges() {
        return Err(Error::Validation(
            "label store does not describe this graph".into(),
        ));
    }
    let mut report = VerifyReport {
        trials: queries.len(),
        ..VerifyReport::default()
    };
    let mut times: Vec<u128> = Vec::with_capacity(queries.len());
    let params = labels.params();
    for qs in queries {
        let fault_labels = labels.fault_labels(&qs.faults)?;
        let s = labels.vertex_label(qs.s);
        let t = labels.vertex_label(qs.t);
        let begin = Instant::now();
        let basic = query_basic(params, s, t, &fault_labels);
        let fast = query_fast(params, s, t, &fault_labels);
        let expected = oracle_connected(g, qs.s, qs.t, &qs.faults);
        times.push(begin.elapsed().as_micros());
        match (basic, fast) {
            (Ok(b), Ok(fv)) => {
                if b != fv {
                    report.disagreements += 1;
                    note(&mut report, qs, &format!("engines disagree: {b} vs {fv}"));
                }
                if b != expected {
                    report.mismatches += 1;
                    note(&mut report, qs, &format!("expected {expected}, got {b}"));
                }
            }
            (b, fv) => {
                report.failures += 1;
                let err = b.err().or(fv.err()).expect("one side failed");
                note(&mut report, qs, &format!("query error: {err}"));
            }
        }
    }
    times.sort_unstable();
    if !times.is_empty() {
        report.p50_micros = times[times.len() / 2];
        report.p90_micros = times[(times.len() * 9 / 10).min(times.len() - 1)];
        report.max_micros = *times.last().expect("nonempty");
    }
    Ok(report)
}

fn note(report: &mut VerifyReport, qs: &QuerySpec, what: &str) {
    if report.examples.len() < 10 {
        report
            .examples
            .push(format!("s={} t={} faults={:?}: {what}", qs.s, qs.t, qs.faults));
    }
}

/// Random connected graph: a shuffled spanning chain plus `extra` distinct
/// chords. Used by verification drivers and test corpora.
pub fn random_connected_graph(rng: &mut StdRng, n: usize, extra: usize) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for i in 1..n {
        let (a, b) = (order[i - 1], order[i]);
        edges.push((a, b));
        seen.insert((a.min(b), a.max(b)));
    }
    let max_extra = n * (n - 1) / 2 - (n - 1);
    let mut added = 0;
    while added < extra.min(max_extra) {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        if seen.insert((a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
            added += 1;
        }
    }
    Graph::new(n, edges).expect("chain plus chords is connected")
}
