//! Graph loading, spanning trees, subdivision, and Euler coordinates.
//!
//! The exact fixtures (triangle, bowtie) were worked out by hand: tree
//! shape, auxiliary edge lists, preorders, and tour coordinates are all
//! asserted literally.

use ftc_core::graph::{
    build_spanning_tree, euler_coordinates, load_graph, oracle_connected, subdivide, Graph,
};
use ftc_core::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Triangle: vertices 0,1,2; edges e0=(0,1), e1=(0,2), e2=(1,2).
fn triangle() -> Graph {
    Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
}

/// Two triangles sharing vertex 2 ("bowtie"):
/// e0=(0,1), e1=(0,2), e2=(1,2), e3=(2,3), e4=(2,4), e5=(3,4).
fn bowtie() -> Graph {
    Graph::new(5, vec![(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap()
}

/// Small random connected graph: a random spanning tree plus extra edges.
fn random_connected(rng: &mut StdRng, n: usize, extra: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    let mut attempts = 0;
    while attempts < extra * 4 && edges.len() < n * (n - 1) / 2 {
        attempts += 1;
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if !edges.contains(&e) {
            edges.push(e);
            if edges.len() >= n - 1 + extra {
                break;
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

#[test]
fn load_graph_parses_comments_and_blanks() {
    let text = "\
# a triangle
3

0 1   # first edge
0 2
1 2
";
    let g = load_graph(text).unwrap();
    assert_eq!(g.vertex_count(), 3);
    assert_eq!(g.edge_count(), 3);
    assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
}

#[test]
fn load_graph_normalizes_edge_order() {
    let g = load_graph("3\n1 0\n2 0\n2 1\n").unwrap();
    assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
    assert_eq!(g.edge_index(1, 0), Some(0));
    assert_eq!(g.edge_index(0, 2), Some(1));
    assert_eq!(g.edge_index(2, 2), None);
}

#[test]
fn load_graph_reports_line_numbers() {
    match load_graph("x\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
        other => panic!("expected parse error, got {other:?}"),
    }
    match load_graph("# header\n\n3\n0 1\n0 two\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("expected parse error, got {other:?}"),
    }
    match load_graph("3\n0\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    match load_graph("3\n0 1 2\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(matches!(
        load_graph("# nothing\n\n"),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn graph_validation_rejects_bad_inputs() {
    assert!(matches!(
        Graph::new(0, vec![]),
        Err(Error::Validation(_))
    ));
    assert!(matches!(
        Graph::new(3, vec![(0, 1), (1, 1), (1, 2)]),
        Err(Error::Validation(_))
    ));
    assert!(matches!(
        Graph::new(3, vec![(0, 1), (1, 0), (1, 2)]),
        Err(Error::Validation(_))
    ));
    assert!(matches!(
        Graph::new(3, vec![(0, 1), (1, 3)]),
        Err(Error::Validation(_))
    ));
    // 4 vertices, only one edge: disconnected.
    assert!(matches!(
        Graph::new(4, vec![(0, 1)]),
        Err(Error::Validation(_))
    ));
}

#[test]
fn single_vertex_graph_is_valid() {
    let g = load_graph("1\n").unwrap();
    assert_eq!(g.vertex_count(), 1);
    assert_eq!(g.edge_count(), 0);
    assert!(oracle_connected(&g, 0, 0, &[]));
}

#[test]
fn oracle_connectivity_under_faults() {
    // Path 0-1-2-3: every edge is a bridge.
    let p = Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    assert!(oracle_connected(&p, 0, 3, &[]));
    assert!(!oracle_connected(&p, 0, 3, &[1]));
    assert!(oracle_connected(&p, 0, 1, &[1]));
    assert!(oracle_connected(&p, 2, 3, &[0, 1]));

    // Bowtie: triangles tolerate one fault each, vertex 2 is a cut vertex.
    let b = bowtie();
    assert!(oracle_connected(&b, 0, 4, &[]));
    assert!(oracle_connected(&b, 0, 4, &[0, 3]));
    assert!(!oracle_connected(&b, 0, 1, &[0, 1])); // vertex 0 loses both edges
    assert!(oracle_connected(&b, 0, 1, &[0]));
    assert!(!oracle_connected(&b, 3, 4, &[3, 5]));
    assert!(!oracle_connected(&b, 0, 3, &[1, 2]));
}

#[test]
fn spanning_tree_of_triangle_is_the_dfs_tree() {
    let g = triangle();
    let t = build_spanning_tree(&g, 0);
    assert_eq!(t.root(), 0);
    assert_eq!(t.parent(1), 0);
    assert_eq!(t.parent(2), 1);
    assert_eq!(t.tree_edge(0), None);
    assert_eq!(t.tree_edge(1), Some(0));
    assert_eq!(t.tree_edge(2), Some(2));
    assert_eq!((0..3).map(|v| t.position(v)).collect::<Vec<_>>(), [0, 1, 2]);
    assert_eq!(t.subtree_size(0), 3);
    assert_eq!(t.subtree_size(1), 2);
}

#[test]
fn spanning_tree_of_bowtie_is_the_dfs_path() {
    let t = build_spanning_tree(&bowtie(), 0);
    let parents: Vec<_> = (0..5).map(|v| t.parent(v)).collect();
    assert_eq!(parents, [0, 0, 1, 2, 3]);
    let edges: Vec<_> = (0..5).map(|v| t.tree_edge(v)).collect();
    assert_eq!(edges, [None, Some(0), Some(2), Some(3), Some(5)]);
}

#[test]
fn subdivision_of_triangle_matches_hand_computation() {
    let g = triangle();
    let t = build_spanning_tree(&g, 0);
    let aux = subdivide(&g, &t);
    // n' = m + 1 = 4; the 4-cycle 0-1-2-3.
    assert_eq!(aux.graph().vertex_count(), 4);
    assert_eq!(
        aux.graph().edges(),
        &[(0, 1), (0, 3), (1, 2), (2, 3)],
        "sigma images first, then the non-tree half"
    );
    assert_eq!(aux.midpoint(0), None);
    assert_eq!(aux.midpoint(1), Some(3));
    assert_eq!(aux.midpoint(2), None);
    assert_eq!(
        (0..3).map(|e| aux.lower_endpoint(e)).collect::<Vec<_>>(),
        [1, 3, 2]
    );
    let nt = aux.non_tree_edges();
    assert_eq!(nt.len(), 1);
    assert_eq!((nt[0].original, nt[0].midpoint, nt[0].endpoint), (1, 3, 2));
    // T' parents: 1<-0, 2<-1, 3<-0.
    let tp = aux.tree();
    assert_eq!((0..4).map(|v| tp.parent(v)).collect::<Vec<_>>(), [0, 0, 1, 0]);
    assert_eq!(
        (0..4).map(|v| tp.position(v)).collect::<Vec<_>>(),
        [0, 1, 2, 3]
    );
}

#[test]
fn subdivision_of_bowtie_matches_hand_computation() {
    let g = bowtie();
    let t = build_spanning_tree(&g, 0);
    let aux = subdivide(&g, &t);
    assert_eq!(aux.graph().vertex_count(), 7); // m + 1
    assert_eq!(aux.graph().edge_count(), 8); // 2m - n + 1
    assert_eq!(
        aux.graph().edges(),
        &[
            (0, 1),
            (0, 5),
            (1, 2),
            (2, 3),
            (2, 6),
            (3, 4),
            (2, 5),
            (4, 6)
        ]
    );
    // Midpoints 5 (for e1) and 6 (for e4).
    assert_eq!(aux.midpoint(1), Some(5));
    assert_eq!(aux.midpoint(4), Some(6));
    let tp = aux.tree();
    assert_eq!(
        (0..7).map(|v| tp.parent(v)).collect::<Vec<_>>(),
        [0, 0, 1, 2, 3, 0, 2]
    );
    // Preorder: 0,1,2,3,4,6,5.
    assert_eq!(
        (0..7).map(|v| tp.position(v)).collect::<Vec<_>>(),
        [0, 1, 2, 3, 4, 6, 5]
    );
}

#[test]
fn subdivision_of_a_tree_is_the_identity_on_edges() {
    let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    let t = build_spanning_tree(&g, 0);
    let aux = subdivide(&g, &t);
    assert_eq!(aux.graph().vertex_count(), 4);
    assert_eq!(aux.graph().edges(), g.edges());
    assert!(aux.non_tree_edges().is_empty());
}

/// The structural contract of the subdivision: one tree edge of T' per
/// original edge, index-preserving, and non-tree halves share midpoints.
#[test]
fn subdivision_bijection_on_random_graphs() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for case in 0..40 {
        let n = rng.random_range(2..40);
        let extra = rng.random_range(0..30);
        let g = random_connected(&mut rng, n, extra);
        let t = build_spanning_tree(&g, 0);
        let aux = subdivide(&g, &t);
        let m = g.edge_count();
        assert_eq!(aux.graph().vertex_count(), m + 1, "case {case}");
        assert_eq!(
            aux.graph().edge_count(),
            2 * m - g.vertex_count() + 1,
            "case {case}"
        );

        // Edge j of G' is the tree edge of T' for original edge j.
        let tp = aux.tree();
        let mut seen_lower = vec![false; tp.len()];
        for j in 0..m {
            let lower = aux.lower_endpoint(j);
            assert!(!seen_lower[lower], "lower endpoints must be distinct");
            seen_lower[lower] = true;
            assert_eq!(tp.tree_edge(lower), Some(j));
            let (a, b) = aux.graph().edge(j);
            let pair = (lower.min(tp.parent(lower)), lower.max(tp.parent(lower)));
            assert_eq!(pair, (a, b), "tree edge endpoints for edge {j}");
        }
        // Exactly the non-roots are lower endpoints: a bijection.
        assert_eq!(
            seen_lower.iter().filter(|&&s| s).count(),
            tp.len() - 1,
            "case {case}"
        );

        // Each subdivided edge's halves share the midpoint and recover the
        // original endpoints.
        for (rank, nt) in aux.non_tree_edges().iter().enumerate() {
            let (u, v) = g.edge(nt.original);
            let sigma_half = aux.graph().edge(nt.original);
            let other_half = aux.graph().edge(m + rank);
            assert_eq!(sigma_half, (u, nt.midpoint));
            assert_eq!(
                other_half,
                (nt.endpoint.min(nt.midpoint), nt.endpoint.max(nt.midpoint))
            );
            assert_eq!(nt.endpoint, v);
        }
    }
}

#[test]
fn euler_coordinates_match_hand_computation() {
    // Path 0-1-2 rooted at 0: straight descent.
    let p = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
    let tp = build_spanning_tree(&p, 0);
    assert_eq!(euler_coordinates(&tp), [0, 1, 2]);

    // Star rooted at center: each leaf costs a descent + ascent.
    let s = Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
    let ts = build_spanning_tree(&s, 0);
    assert_eq!(euler_coordinates(&ts), [0, 1, 3, 5]);

    // Triangle subdivision (4-cycle T').
    let g = triangle();
    let t = build_spanning_tree(&g, 0);
    let aux = subdivide(&g, &t);
    assert_eq!(euler_coordinates(aux.tree()), [0, 1, 2, 5]);

    // Bowtie subdivision.
    let b = bowtie();
    let tb = build_spanning_tree(&b, 0);
    let auxb = subdivide(&b, &tb);
    assert_eq!(euler_coordinates(auxb.tree()), [0, 1, 2, 3, 4, 11, 7]);
}

#[test]
fn euler_coordinates_are_strictly_increasing_down_any_path() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for _ in 0..20 {
        let n = rng.random_range(2..60);
        let extra = rng.random_range(0..40);
        let g = random_connected(&mut rng, n, extra);
        let t = build_spanning_tree(&g, 0);
        let aux = subdivide(&g, &t);
        let tp = aux.tree();
        let c = euler_coordinates(tp);
        let np = tp.len() as u64;
        let mut sorted = c.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), tp.len(), "coordinates are distinct");
        assert_eq!(c[tp.root()], 0);
        for v in 0..tp.len() {
            assert!(c[v] <= 2 * (np - 1));
            if v != tp.root() {
                assert!(c[v] > c[tp.parent(v)]);
            }
        }
    }
}

#[test]
fn ancestor_intervals_nest_on_random_trees() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for _ in 0..20 {
        let n = rng.random_range(2..50);
        let extra = rng.random_range(0..20);
        let g = random_connected(&mut rng, n, extra);
        let t = build_spanning_tree(&g, 0);
        for v in 0..n {
            // Walking up the parent chain stays within ancestors.
            let mut a = v;
            loop {
                assert!(t.is_ancestor(a, v));
                if a == t.root() {
                    break;
                }
                a = t.parent(a);
            }
        }
        // Children partition the parent's interval minus the parent itself.
        for v in 0..n {
            let total: usize = t.children(v).iter().map(|&c| t.subtree_size(c)).sum();
            assert_eq!(total + 1, t.subtree_size(v));
        }
    }
}
