//! Graphs, spanning trees, and the subdivision transform.
//!
//! The label scheme works on a connected undirected simple graph `G`. This
//! module provides:
//!
//! * [`Graph`] — validated adjacency representation, plus [`load_graph`] for
//!   the text format (`n` on the first line, one `u v` pair per edge line,
//!   `#` comments).
//! * [`oracle_connected`] — direct BFS connectivity under edge faults, used
//!   as the ground truth oracle by tests and audits.
//! * [`RootedTree`] / [`build_spanning_tree`] — a rooted spanning tree with
//!   canonical child order, preorder numbering, and subtree sizes.
//! * [`subdivide`] — the auxiliary graph `G′`: every non-tree edge of `G` is
//!   split at a fresh midpoint vertex. One half (incident to the smaller
//!   endpoint) joins the spanning tree; the result `T′` spans `G′` and has
//!   exactly one tree edge per original edge, so original edges and tree
//!   edges of `T′` are in canonical bijection (index-preserving here).
//! * [`euler_coordinates`] — positions of vertices along the Euler tour of a
//!   rooted tree, the 1-D coordinates underlying the plane embedding used by
//!   sparsification.

use std::collections::HashSet;

use crate::{Error, Result};

/// A connected undirected simple graph with indexed edges.
///
/// Vertices are `0..n`; edges keep their construction order and are
/// normalized so each is `(u, v)` with `u < v`.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Build a graph from an edge list, validating simplicity and
    /// connectivity.
    ///
    /// Errors with [`Error::Validation`] on an empty vertex set, an endpoint
    /// out of range, a self-loop, a duplicate edge, or a disconnected graph.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        if n == 0 {
            return Err(Error::Validation(
                "graph must have at least one vertex".into(),
            ));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::Validation(format!(
                    "edge {i} = ({a}, {b}) has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Validation(format!("edge {i} is a self-loop at {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::Validation(format!(
                    "duplicate edge ({}, {}) at position {i}",
                    e.0, e.1
                )));
            }
            normalized.push(e);
        }
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in normalized.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        for entries in &mut adj {
            entries.sort_unstable();
        }
        let g = Graph {
            n,
            edges: normalized,
            adj,
        };
        if let Some(v) = g.unreached_vertex() {
            return Err(Error::Validation(format!(
                "graph is not connected: vertex {v} is unreachable from 0"
            )));
        }
        Ok(g)
    }

    fn unreached_vertex(&self) -> Option<usize> {
        let mut seen = vec![false; self.n];
        let mut queue = vec![0usize];
        seen[0] = true;
        while let Some(v) = queue.pop() {
            for &(u, _) in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push(u);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    /// Number of vertices `n`.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges `m`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges, normalized `(u, v)` with `u < v`, in index order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Endpoints of edge `e`.
    ///
    /// # Panics
    ///
    /// Panics if `e` is out of range.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Neighbors of `v` as `(neighbor, edge index)`, sorted.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    /// Index of the edge joining `u` and `v`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u]
            .binary_search_by_key(&v, |&(nb, _)| nb)
            .ok()
            .map(|slot| self.adj[u][slot].1)
    }
}

/// Parse the plain text graph format.
///
/// The first significant line holds the vertex count `n`; every following
/// significant line holds one edge as two whitespace-separated endpoints.
/// `#` starts a comment running to the end of the line; blank lines are
/// ignored. The parsed graph is validated as in [`Graph::new`].
pub fn load_graph(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        if n.is_none() {
            let tok = tokens.next().expect("non-empty line has a token");
            let value = tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("expected vertex count, found {tok:?}"),
            })?;
            if let Some(extra) = tokens.next() {
                return Err(Error::Parse {
                    line,
                    message: format!("unexpected token {extra:?} after vertex count"),
                });
            }
            n = Some(value);
            continue;
        }
        let parse_endpoint = |tok: Option<&str>| -> Result<usize> {
            let tok = tok.ok_or_else(|| Error::Parse {
                line,
                message: "expected an edge as two endpoints".into(),
            })?;
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("expected a vertex index, found {tok:?}"),
            })
        };
        let u = parse_endpoint(tokens.next())?;
        let v = parse_endpoint(tokens.next())?;
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line,
                message: format!("unexpected token {extra:?} after edge"),
            });
        }
        edges.push((u, v));
    }
    let n = n.ok_or_else(|| Error::Parse {
        line: text.lines().count().max(1),
        message: "input contains no vertex count".into(),
    })?;
    Graph::new(n, edges)
}

/// Ground-truth connectivity: are `s` and `t` connected in `G − F`?
///
/// Runs a BFS that skips every edge whose index appears in `faults`.
/// Intended as the reference oracle for tests and audits; cost is `O(n + m)`
/// per call.
///
/// # Panics
///
/// Panics if `s`, `t`, or a fault index is out of range.
pub fn oracle_connected(g: &Graph, s: usize, t: usize, faults: &[usize]) -> bool {
    assert!(s < g.vertex_count() && t < g.vertex_count());
    let mut failed = vec![false; g.edge_count()];
    for &e in faults {
        failed[e] = true;
    }
    if s == t {
        return true;
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    seen[s] = true;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        for &(u, e) in g.neighbors(v) {
            if failed[e] || seen[u] {
                continue;
            }
            if u == t {
                return true;
            }
            seen[u] = true;
            queue.push_back(u);
        }
    }
    false
}

/// A rooted spanning tree with canonical structure.
///
/// Children are ordered by ascending vertex id, which fixes the preorder
/// numbering, the Euler tour, and every label derived from them.
#[derive(Debug, Clone)]
pub struct RootedTree {
    root: usize,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    preorder: Vec<usize>,
    order: Vec<usize>,
    subtree: Vec<usize>,
    tree_edge: Vec<Option<usize>>,
}

impl RootedTree {
    /// Assemble a rooted tree from parent pointers.
    ///
    /// `parent[root] == root`; `tree_edge[v]` is the graph edge joining `v`
    /// to its parent (`None` exactly at the root). Children are sorted by
    /// vertex id and the preorder computed here.
    fn from_parents(root: usize, parent: Vec<usize>, tree_edge: Vec<Option<usize>>) -> RootedTree {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if v != root {
                children[parent[v]].push(v);
            }
        }
        // Ascending push order already sorts each child list.
        let (preorder, order) = preorder_of(root, &children);
        let mut subtree = vec![1usize; n];
        for p in (1..n).rev() {
            let v = order[p];
            subtree[parent[v]] += subtree[v];
        }
        RootedTree {
            root,
            parent,
            children,
            preorder,
            order,
            subtree,
            tree_edge,
        }
    }

    /// The root vertex.
    pub fn root(&self) -> usize {
        self.root
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Whether the tree is empty (never true for trees built here).
    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Parent of `v` (the root is its own parent).
    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    /// Children of `v`, ascending.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Preorder position of `v` (root is 0).
    pub fn position(&self, v: usize) -> usize {
        self.preorder[v]
    }

    /// Vertex at preorder position `p`.
    pub fn vertex_at(&self, p: usize) -> usize {
        self.order[p]
    }

    /// Size of the subtree rooted at `v` (including `v`).
    pub fn subtree_size(&self, v: usize) -> usize {
        self.subtree[v]
    }

    /// Graph edge joining `v` to its parent; `None` exactly at the root.
    pub fn tree_edge(&self, v: usize) -> Option<usize> {
        self.tree_edge[v]
    }

    /// Whether `a` is an ancestor of `b` (every vertex is its own ancestor).
    /// Uses the preorder interval of `a`; `O(1)`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let pa = self.preorder[a];
        let pb = self.preorder[b];
        pa <= pb && pb < pa + self.subtree[a]
    }
}

/// Preorder traversal of `children` starting at `root`:
/// returns (position per vertex, vertex per position).
fn preorder_of(root: usize, children: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let n = children.len();
    let mut preorder = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        preorder[v] = order.len();
        order.push(v);
        // Reverse so the smallest child is visited first.
        for &c in children[v].iter().rev() {
            stack.push(c);
        }
    }
    debug_assert_eq!(order.len(), n, "children lists do not span the tree");
    (preorder, order)
}

/// Build the canonical DFS spanning tree of `g` rooted at `root`.
///
/// The DFS explores sorted adjacency lists, so the tree is a deterministic
/// function of the graph.
///
/// # Panics
///
/// Panics if `root` is out of range.
pub fn build_spanning_tree(g: &Graph, root: usize) -> RootedTree {
    let n = g.vertex_count();
    assert!(root < n, "root {root} out of range");
    let mut parent = vec![usize::MAX; n];
    let mut tree_edge = vec![None; n];
    parent[root] = root;
    // (vertex, index of the next adjacency entry to try)
    let mut stack = vec![(root, 0usize)];
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        if let Some(&(u, e)) = g.neighbors(v).get(*i) {
            *i += 1;
            if parent[u] == usize::MAX {
                parent[u] = v;
                tree_edge[u] = Some(e);
                stack.push((u, 0));
            }
        } else {
            stack.pop();
        }
    }
    debug_assert!(
        parent.iter().all(|&p| p != usize::MAX),
        "graph connectivity was validated at construction"
    );
    RootedTree::from_parents(root, parent, tree_edge)
}

/// The subdivision of `G` along a spanning tree: the auxiliary graph `G′`,
/// its spanning tree `T′`, and the bookkeeping tying both back to `G`.
///
/// Midpoint vertices are numbered `n, n+1, …` in ascending order of the
/// non-tree edge they subdivide. The edge list of `G′` starts with the `m`
/// images of the original edges (edge `j` of `G′` is the tree edge
/// corresponding to edge `j` of `G`), followed by the non-tree halves
/// `(midpoint, larger endpoint)` in ascending original-edge order.
#[derive(Debug, Clone)]
pub struct AuxiliaryGraph {
    graph: Graph,
    tree: RootedTree,
    n_original: usize,
    m_original: usize,
    midpoint: Vec<Option<usize>>,
    lower: Vec<usize>,
    non_tree: Vec<NonTreeEdge>,
}

/// One subdivided non-tree edge of `G`, as seen in `G′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonTreeEdge {
    /// Index of the original edge in `G` (also its tree-edge index in `G′`).
    pub original: usize,
    /// The midpoint vertex created for it.
    pub midpoint: usize,
    /// The endpoint on the non-tree half, i.e. the larger original endpoint.
    pub endpoint: usize,
}

impl AuxiliaryGraph {
    /// The auxiliary graph `G′`.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The spanning tree `T′` of `G′`.
    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    /// Vertex count of the original graph.
    pub fn original_vertex_count(&self) -> usize {
        self.n_original
    }

    /// Edge count of the original graph.
    pub fn original_edge_count(&self) -> usize {
        self.m_original
    }

    /// Midpoint vertex of original edge `e` (`None` for tree edges).
    pub fn midpoint(&self, e: usize) -> Option<usize> {
        self.midpoint[e]
    }

    /// The child endpoint of the tree edge of `T′` assigned to original
    /// edge `e`: the DFS child for a tree edge, the midpoint for a non-tree
    /// edge. Its parent in `T′` is the other endpoint.
    pub fn lower_endpoint(&self, e: usize) -> usize {
        self.lower[e]
    }

    /// All subdivided non-tree edges, ascending by original index.
    pub fn non_tree_edges(&self) -> &[NonTreeEdge] {
        &self.non_tree
    }
}

/// Subdivide every non-tree edge of `g` at a fresh midpoint.
///
/// See [`AuxiliaryGraph`] for the canonical numbering. The resulting `G′`
/// has `n + (m − n + 1) = m + 1` vertices and `2m − n + 1` edges, and `T′`
/// has exactly `m` tree edges, one per original edge.
pub fn subdivide(g: &Graph, tree: &RootedTree) -> AuxiliaryGraph {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut midpoint = vec![None; m];
    let mut next_vertex = n;
    let mut lower = vec![usize::MAX; m];
    // Identify tree edges through the child → parent-edge map.
    for v in 0..n {
        if let Some(e) = tree.tree_edge(v) {
            lower[e] = v;
        }
    }
    let mut aux_edges = Vec::with_capacity(2 * m - n + 1);
    let mut non_tree = Vec::with_capacity(m - (n - 1));
    // First the sigma images: edge j of G′ is the tree edge for edge j of G.
    for j in 0..m {
        let (u, v) = g.edge(j);
        if lower[j] != usize::MAX {
            aux_edges.push((u, v));
        } else {
            let mid = next_vertex;
            next_vertex += 1;
            midpoint[j] = Some(mid);
            lower[j] = mid;
            aux_edges.push((u, mid)); // u < v: the tree half hangs off u.
            non_tree.push(NonTreeEdge {
                original: j,
                midpoint: mid,
                endpoint: v,
            });
        }
    }
    // Then the non-tree halves.
    for nt in &non_tree {
        aux_edges.push((nt.endpoint, nt.midpoint));
    }
    let n_prime = next_vertex;
    // n + (m − (n − 1)) midpoints = m + 1 vertices in total.
    debug_assert_eq!(n_prime, m + 1);

    let graph = Graph::new(n_prime, aux_edges).expect("subdivision preserves validity");
    let mut parent = vec![usize::MAX; n_prime];
    let mut tree_edge_of = vec![None; n_prime];
    for v in 0..n {
        parent[v] = tree.parent(v);
        tree_edge_of[v] = tree.tree_edge(v);
    }
    for nt in &non_tree {
        let (u, _v) = g.edge(nt.original);
        parent[nt.midpoint] = u;
        tree_edge_of[nt.midpoint] = Some(nt.original);
    }
    let t_prime = RootedTree::from_parents(tree.root(), parent, tree_edge_of);
    AuxiliaryGraph {
        graph,
        tree: t_prime,
        n_original: n,
        m_original: m,
        midpoint,
        lower,
        non_tree,
    }
}

/// Euler-tour coordinates of a rooted tree.
///
/// The tour starts at the root with a counter at 0, increments on every
/// edge traversal (descent or ascent), and records each vertex's counter
/// value at first visit. Coordinates lie in `[0, 2(n−1)]` and strictly
/// increase along any root-to-leaf path.
pub fn euler_coordinates(tree: &RootedTree) -> Vec<u64> {
    let n = tree.len();
    let mut coords = vec![0u64; n];
    let mut counter = 0u64;
    // (vertex, index of next child to descend into)
    let mut stack: Vec<(usize, usize)> = vec![(tree.root(), 0)];
    while let Some(&mut (v, ref mut next_child)) = stack.last_mut() {
        if let Some(&c) = tree.children(v).get(*next_child) {
            *next_child += 1;
            counter += 1;
            coords[c] = counter;
            stack.push((c, 0));
        } else {
            stack.pop();
            if !stack.is_empty() {
                counter += 1; // ascend back to the parent
            }
        }
    }
    debug_assert_eq!(counter, 2 * (n as u64 - 1));
    coords
}
