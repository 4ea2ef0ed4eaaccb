//! Scheme tests: exact label content on the smallest cyclic graph, the
//! fragment-syndrome identity against brute-force aggregation, engine
//! agreement with direct search, error taxonomy, and decode-budget
//! adaptivity.

use ftc_core::audit::{random_connected_graph, sample_queries, verify_against_oracle};
use ftc_core::gf2e::FieldSpec;
use ftc_core::graph::{build_spanning_tree, load_graph, oracle_connected, subdivide, Graph};
use ftc_core::outdetect::{vertex_label, EdgeLocator, OutdetectSyndrome};
use ftc_core::scheme::{
    adaptive_budget, build_fragment_table, build_labels, query_basic, query_basic_with_stats,
    query_fast, query_fast_with_stats, BuildConfig, LabelSet,
};
use ftc_core::sparsify::{HierarchyMode, NetBackend};
use ftc_core::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn det_config() -> BuildConfig {
    BuildConfig::default()
}

fn k3() -> Graph {
    load_graph("3\n0 1\n0 2\n1 2\n").unwrap()
}

// ---------------------------------------------------------------------------
// configuration validation
// ---------------------------------------------------------------------------

#[test]
fn build_rejects_bad_configs() {
    let g = k3();
    let cases: Vec<(u32, BuildConfig)> = vec![
        (0, det_config()),
        (2_000_000, det_config()),
        (
            1,
            BuildConfig {
                c_net: 0,
                ..det_config()
            },
        ),
        (
            1,
            BuildConfig {
                backend: NetBackend::LogLog,
                ..det_config()
            },
        ),
        (
            1,
            BuildConfig {
                mode: HierarchyMode::Randomized,
                seed: None,
                ..det_config()
            },
        ),
        (
            1,
            BuildConfig {
                seed: Some(7),
                ..det_config()
            },
        ),
    ];
    for (f, config) in cases {
        match build_labels(&g, f, &config) {
            Err(Error::Config(_)) => {}
            other => panic!("expected a configuration error, got {other:?}"),
        }
    }
}

// ---------------------------------------------------------------------------
// label content
// ---------------------------------------------------------------------------

#[test]
fn tree_input_has_zero_syndromes() {
    let g = load_graph("5\n0 1\n1 2\n1 3\n3 4\n").unwrap();
    let labels = build_labels(&g, 2, &det_config()).unwrap();
    let p = labels.params();
    assert_eq!(p.h, 0);
    assert_eq!(labels.levels(), &[Vec::<usize>::new()]);
    for e in 0..p.m {
        let blocks = labels.edge_label(e).level_blocks();
        assert_eq!(blocks.len(), 1);
        assert!(blocks[0].iter().all(|&b| b == 0));
    }
    assert_eq!(p.edge_bits(), 4 * u64::from(p.q) + 2 * p.threshold * u64::from(p.w));
}

/// Full hand-derivation on the triangle: parameters, the single locator,
/// and every level-0 aggregate.
#[test]
fn k3_exact_labels() {
    let labels = build_labels(&k3(), 1, &det_config()).unwrap();
    let p = labels.params();
    assert_eq!((p.n, p.m, p.f), (3, 3, 1));
    // n′ = 4 vertices in T′, q = ⌈log2 5⌉ = 3, locator width 7 → w = 8.
    assert_eq!(p.n_prime(), 4);
    assert_eq!(p.q, 3);
    assert_eq!(p.w, 8);
    // One non-tree point: a single real level plus the empty one.
    assert_eq!(labels.levels(), &[vec![1], vec![]]);
    assert_eq!(p.h, 1);
    // K = 32·(2·1+1)²·log2(4) = 32·9·2.
    assert_eq!(p.threshold, 576);
    assert_eq!(p.vertex_bits(), 6);
    assert_eq!(p.edge_bits(), 4 * 3 + 2 * 2 * 576 * 8);

    // Ancestry intervals: preorder 0,1,2,3 with subtree sizes 4,2,1,1.
    let a = |v: usize| labels.vertex_label(v).ancestry();
    assert_eq!((a(0).start, a(0).end), (0, 4));
    assert_eq!((a(1).start, a(1).end), (1, 3));
    assert_eq!((a(2).start, a(2).end), (2, 3));

    // The non-tree half of edge 1 joins midpoint 3 (position 3) and
    // vertex 2 (position 2): locator 2^6 + 2·2^3 + 3 = 83.
    let field = FieldSpec::new(8).unwrap();
    let k = p.threshold as usize;
    let row = OutdetectSyndrome::of_support(&field, &[EdgeLocator::from_raw(83)], k);
    for e in 0..3 {
        let label = labels.edge_label(e);
        // Every tree edge's subtree contains exactly one endpoint of that
        // half, so each level-0 aggregate is the single row.
        let got = OutdetectSyndrome::from_packed(&field, &label.level_blocks()[0], k).unwrap();
        assert_eq!(got, row, "edge {e} level-0 aggregate");
        assert!(label.level_blocks()[1].iter().all(|&b| b == 0));
    }
    // Edge labels carry the tree-edge ancestry pairs; edge 1 maps to its
    // subdivided half below midpoint 3.
    assert_eq!(labels.edge_label(0).lower(), a(1));
    assert_eq!(labels.edge_label(1).lower().start, 3);
    assert_eq!(labels.edge_label(2).lower(), a(2));
}

#[test]
fn k3_query_verdicts() {
    let labels = build_labels(&k3(), 2, &det_config()).unwrap();
    let p = labels.params();
    let run = |s: usize, t: usize, faults: &[usize]| -> (bool, bool) {
        let fl = labels.fault_labels(faults).unwrap();
        (
            query_basic(p, labels.vertex_label(s), labels.vertex_label(t), &fl).unwrap(),
            query_fast(p, labels.vertex_label(s), labels.vertex_label(t), &fl).unwrap(),
        )
    };
    // Removing one edge of a triangle never disconnects it.
    assert_eq!(run(1, 2, &[0]), (true, true));
    assert_eq!(run(0, 2, &[1]), (true, true));
    // Removing both edges at a vertex isolates it.
    assert_eq!(run(1, 2, &[0, 2]), (false, false));
    assert_eq!(run(1, 2, &[1, 2]), (false, false));
    assert_eq!(run(0, 2, &[0, 1]), (false, false));
    assert_eq!(run(0, 1, &[1, 2]), (true, true));
    // s = t is connected under any fault set.
    assert_eq!(run(2, 2, &[0, 1]), (true, true));
    // No faults at all: one fragment, immediately true.
    assert_eq!(run(0, 2, &[]), (true, true));
}

#[test]
fn k3_merge_traverses_the_decoded_edge() {
    let labels = build_labels(&k3(), 1, &det_config()).unwrap();
    let p = labels.params();
    let fl = labels.fault_labels(&[0]).unwrap();
    let (verdict, stats) = query_basic_with_stats(
        p,
        labels.vertex_label(1),
        labels.vertex_label(0),
        &fl,
    )
    .unwrap();
    assert!(verdict);
    assert!(!stats.immediate);
    assert_eq!(stats.merges.len(), 1);
    let rec = stats.merges[0];
    assert_eq!(rec.level, 0);
    assert_eq!(rec.boundary, 1);
    assert_eq!(rec.k_prime, 576);
}

// ---------------------------------------------------------------------------
// fragment table
// ---------------------------------------------------------------------------

#[test]
fn fragment_table_shapes() {
    let labels = build_labels(&k3(), 2, &det_config()).unwrap();
    let p = labels.params();
    // Nested faults: edge 0 (interval [1,3)) encloses edge 2 ([2,3)).
    let fl = labels.fault_labels(&[0, 2]).unwrap();
    let table =
        build_fragment_table(p, &fl, labels.vertex_label(1), labels.vertex_label(2)).unwrap();
    assert_eq!(table.fragment_count(), 3);
    assert_eq!(table.fault_count(), 2);
    // Vertex 1 (position 1) sits between the two intervals; vertex 2
    // (position 2) in the inner one; position 0 in the root fragment.
    assert_eq!(table.fragment_of_position(1), 0);
    assert_eq!(table.fragment_of_position(2), 1);
    assert_eq!(table.fragment_of_position(0), 2);
    assert_eq!(table.s_fragment(), 0);
    assert_eq!(table.t_fragment(), 1);
    assert!(!table.immediate_true());
    // Middle fragment borders both faults; inner and root border one each.
    assert_eq!(table.cutset_count(0), 2);
    assert_eq!(table.cutset_count(1), 1);
    assert_eq!(table.cutset_count(2), 1);
    // Middle fragment {vertex 1} has no incident non-tree half: its
    // syndrome, the XOR of both stored aggregates, cancels at every level.
    for level in 0..=p.h {
        assert!(table.syndrome_bytes(0, level).iter().all(|&b| b == 0));
    }
    // The nested-cutset syndrome equals aggregate(outer) + aggregate(inner).
    let field = FieldSpec::new(p.w).unwrap();
    let k = p.threshold as usize;
    let outer = OutdetectSyndrome::from_packed(&field, &fl[0].level_blocks()[0], k).unwrap();
    let mut expected = outer;
    expected
        .add_assign(
            &OutdetectSyndrome::from_packed(&field, &fl[1].level_blocks()[0], k).unwrap(),
        )
        .unwrap();
    let got = OutdetectSyndrome::from_packed(&field, table.syndrome_bytes(0, 0), k).unwrap();
    assert_eq!(got, expected);
}

#[test]
fn fragment_table_rejects_bad_fault_sets() {
    let labels = build_labels(&k3(), 1, &det_config()).unwrap();
    let p = labels.params();
    let s = labels.vertex_label(0);
    let t = labels.vertex_label(2);
    // Over budget: two faults with f = 1.
    let fl = labels.fault_labels(&[0, 2]).unwrap();
    assert!(matches!(
        build_fragment_table(p, &fl, s, t),
        Err(Error::Query(_))
    ));
    // Repeated edge.
    let fl = labels.fault_labels(&[0]).unwrap();
    let twice = vec![fl[0], fl[0]];
    let labels2 = build_labels(&k3(), 2, &det_config()).unwrap();
    assert!(matches!(
        build_fragment_table(labels2.params(), &twice, s, t),
        Err(Error::Query(_))
    ));
    // Label from a different scheme: block sizes cannot match.
    let big = build_labels(
        &load_graph("6\n0 1\n0 2\n1 2\n2 3\n3 4\n4 5\n2 5\n").unwrap(),
        2,
        &det_config(),
    )
    .unwrap();
    let foreign = big.fault_labels(&[0]).unwrap();
    assert!(matches!(
        build_fragment_table(labels2.params(), &foreign, s, t),
        Err(Error::Query(_))
    ));
    // Unknown edge index surfaces at label collection.
    assert!(matches!(labels.fault_labels(&[9]), Err(Error::Query(_))));
}

/// Every fragment's stored syndrome must equal the XOR of its members'
/// directly computed per-level vertex labels.
#[test]
fn fragment_syndromes_match_brute_force() {
    let mut rng = StdRng::seed_from_u64(0xB3);
    for _ in 0..3 {
        let n = rng.random_range(8..22);
        let extra = rng.random_range(3..12);
        let g = random_connected_graph(&mut rng, n, extra);
        let f = 3u32;
        let labels = build_labels(&g, f, &det_config()).unwrap();
        let p = labels.params();
        let field = FieldSpec::new(p.w).unwrap();
        let k = p.threshold as usize;

        // Reconstruct the level graphs independently of the build.
        let tree = build_spanning_tree(&g, 0);
        let aux = subdivide(&g, &tree);
        let anc: Vec<_> = (0..p.n_prime())
            .map(|v| {
                let tp = aux.tree();
                let pos = tp.position(v) as u64;
                (pos, pos + tp.subtree_size(v) as u64)
            })
            .collect();
        let level_graphs: Vec<Vec<((usize, usize), EdgeLocator)>> = labels
            .levels()
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|&e| {
                        let nt = aux
                            .non_tree_edges()
                            .iter()
                            .find(|nt| nt.original == e)
                            .expect("level edges are non-tree");
                        let loc =
                            EdgeLocator::encode(p.q, anc[nt.midpoint].0, anc[nt.endpoint].0);
                        ((nt.midpoint, nt.endpoint), loc)
                    })
                    .collect()
            })
            .collect();
        let per_vertex: Vec<Vec<OutdetectSyndrome>> = (0..p.n_prime())
            .map(|v| {
                level_graphs
                    .iter()
                    .map(|lg| vertex_label(&field, lg, v, k))
                    .collect()
            })
            .collect();

        for _ in 0..3 {
            let size = rng.random_range(1..=f as usize);
            let mut faults: Vec<usize> = Vec::new();
            while faults.len() < size {
                let e = rng.random_range(0..p.m);
                if !faults.contains(&e) {
                    faults.push(e);
                }
            }
            let fl = labels.fault_labels(&faults).unwrap();
            let table = build_fragment_table(
                p,
                &fl,
                labels.vertex_label(0),
                labels.vertex_label(n - 1),
            )
            .unwrap();
            for frag in 0..table.fragment_count() {
                for level in 0..=p.h {
                    let mut acc = OutdetectSyndrome::zero(k);
                    for v in 0..p.n_prime() {
                        if table.fragment_of_position(anc[v].0) == frag {
                            acc.add_assign(&per_vertex[v][level]).unwrap();
                        }
                    }
                    let stored = OutdetectSyndrome::from_packed(
                        &field,
                        table.syndrome_bytes(frag, level),
                        k,
                    )
                    .unwrap();
                    assert_eq!(stored, acc, "fragment {frag} level {level}");
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// engines against direct search
// ---------------------------------------------------------------------------

#[test]
fn engines_match_oracle_on_random_corpus() {
    let mut rng = StdRng::seed_from_u64(0xE2E);
    for round in 0..8 {
        let n = rng.random_range(5..20);
        let extra = rng.random_range(0..12);
        let g = random_connected_graph(&mut rng, n, extra);
        let f = 1 + (round % 3) as u32;
        let labels = build_labels(&g, f, &det_config()).unwrap();
        let queries = sample_queries(&g, f, 30, 0x5EED + round);
        let report = verify_against_oracle(&g, &labels, &queries).unwrap();
        assert!(report.clean(), "round {round}: {:?}", report.examples);
        assert_eq!(report.trials, 30);
    }
}

#[test]
fn disconnection_into_three_parts() {
    // A path 0-1-2-3-4 with chords; cutting around vertex 2 leaves three
    // components, exercising discards in the heap engine.
    let g = load_graph("5\n0 1\n1 2\n2 3\n3 4\n0 4\n").unwrap();
    let labels = build_labels(&g, 4, &det_config()).unwrap();
    let p = labels.params();
    let faults = [1usize, 2, 3, 4];
    assert!(!oracle_connected(&g, 2, 0, &faults));
    let fl = labels.fault_labels(&faults).unwrap();
    let (basic, _) =
        query_basic_with_stats(p, labels.vertex_label(2), labels.vertex_label(0), &fl).unwrap();
    let (fast, stats) =
        query_fast_with_stats(p, labels.vertex_label(2), labels.vertex_label(0), &fl).unwrap();
    assert!(!basic);
    assert!(!fast);
    // The heap engine stays within its operation budget.
    assert!(stats.heap_pops <= 4 * (faults.len() as u32 + 1) + 4);
}

#[test]
fn verify_rejects_mismatched_graph() {
    let labels = build_labels(&k3(), 1, &det_config()).unwrap();
    let other = load_graph("4\n0 1\n0 2\n1 2\n2 3\n").unwrap();
    let queries = sample_queries(&other, 1, 5, 1);
    assert!(matches!(
        verify_against_oracle(&other, &labels, &queries),
        Err(Error::Validation(_))
    ));
}

// ---------------------------------------------------------------------------
// adaptive decode budget
// ---------------------------------------------------------------------------

#[test]
fn adaptive_budget_formula() {
    let labels = build_labels(&k3(), 1, &det_config()).unwrap();
    let p = labels.params();
    // n′ = 4: lg = 2. Budgets: 32·(2d+1)²·2 capped at K = 576.
    assert_eq!(adaptive_budget(p, 0), 64);
    assert_eq!(adaptive_budget(p, 1), 576);
    assert_eq!(adaptive_budget(p, 2), 576);
}

/// With a large fault budget but few actual faults, every decode uses the
/// small-boundary budget, never the full one.
#[test]
fn small_fault_sets_use_small_budgets() {
    let mut rng = StdRng::seed_from_u64(0xADA);
    let g = random_connected_graph(&mut rng, 14, 12);
    let labels = build_labels(&g, 8, &det_config()).unwrap();
    let p = labels.params();
    let full = p.threshold;
    let cap = adaptive_budget(p, 2);
    assert!(cap < full, "budgets must be distinguishable");
    let mut observed_merges = 0;
    for qs in sample_queries(&g, 2, 60, 0xF00D) {
        let fl = labels.fault_labels(&qs.faults).unwrap();
        let s = labels.vertex_label(qs.s);
        let t = labels.vertex_label(qs.t);
        for stats in [
            query_basic_with_stats(p, s, t, &fl).unwrap().1,
            query_fast_with_stats(p, s, t, &fl).unwrap().1,
        ] {
            for rec in &stats.merges {
                observed_merges += 1;
                assert!(rec.boundary <= 2, "boundary exceeds the fault count");
                assert_eq!(rec.k_prime, adaptive_budget(p, rec.boundary));
                assert!(rec.k_prime <= cap);
                assert!(rec.k_prime < full);
            }
        }
    }
    assert!(observed_merges > 0, "corpus must exercise merges");
}

// ---------------------------------------------------------------------------
// label set plumbing
// ---------------------------------------------------------------------------

#[test]
fn edge_resolution() {
    let labels: LabelSet = build_labels(&k3(), 1, &det_config()).unwrap();
    assert_eq!(labels.edge_index(1, 0), Some(0));
    assert_eq!(labels.edge_index(0, 1), Some(0));
    assert_eq!(labels.edge_index(2, 1), Some(2));
    assert_eq!(labels.edge_index(0, 3), None);
    assert_eq!(labels.edges(), &[(0, 1), (0, 2), (1, 2)]);
}
