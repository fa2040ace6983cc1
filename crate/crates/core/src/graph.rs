//! Finite multigraphs in the Serre formalism: directed edges with an
//! involution `e ↦ ē`, loops and parallel edges allowed.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{bail, Error, Result};
use crate::matrix::{bareiss_det, IntMatrix, Matrix};

/// A choice of one directed edge per involution orbit, listed in
/// undirected-edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    edges: Vec<usize>,
}

impl Orientation {
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Position of `edge` in the orientation, if it belongs to it.
    pub fn position(&self, edge: usize) -> Option<usize> {
        self.edges.iter().position(|&e| e == edge)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_labels: Vec<String>,
    edge_labels: Vec<String>,
    origin: Vec<usize>,
    terminus: Vec<usize>,
    inverse: Vec<usize>,
    orientation: Orientation,
}

/// Undirected edge as given by a caller: endpoints by name plus optional id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub id: Option<String>,
}

impl EdgeSpec {
    pub fn new(from: &str, to: &str) -> Self {
        EdgeSpec {
            from: from.into(),
            to: to.into(),
            id: None,
        }
    }
}

/// Builds a graph from named vertices and undirected edges. Each edge `k`
/// yields directed edges `2k` (as listed, placed in the default orientation)
/// and `2k + 1` (reversed). Edge ids default to `s1, s2, …`.
pub fn build_multigraph(vertices: &[String], edges: &[EdgeSpec]) -> Result<Multigraph> {
    let lookup = |name: &str, edge: &str| -> Result<usize> {
        vertices.iter().position(|v| v == name).ok_or_else(|| {
            Error::Validation(format!("edge {edge} references undeclared vertex {name:?}"))
        })
    };
    for (i, v) in vertices.iter().enumerate() {
        if vertices[..i].contains(v) {
            bail!(Validation, "duplicate vertex {v:?}");
        }
    }
    let mut pairs = Vec::with_capacity(edges.len());
    let mut ids = Vec::with_capacity(edges.len());
    for (k, e) in edges.iter().enumerate() {
        let id = e.id.clone().unwrap_or_else(|| format!("s{}", k + 1));
        if ids.contains(&id) {
            bail!(Validation, "duplicate edge id {id:?}");
        }
        pairs.push((lookup(&e.from, &id)?, lookup(&e.to, &id)?));
        ids.push(id);
    }
    let mut g = Multigraph::from_pairs(vertices.to_vec(), &pairs);
    for (k, id) in ids.into_iter().enumerate() {
        g.edge_labels[2 * k + 1] = format!("~{id}");
        g.edge_labels[2 * k] = id;
    }
    Ok(g)
}

impl Multigraph {
    /// Graph from vertex labels and undirected edges given as index pairs.
    pub fn from_pairs(vertex_labels: Vec<String>, pairs: &[(usize, usize)]) -> Self {
        let m = pairs.len();
        let mut origin = Vec::with_capacity(2 * m);
        let mut terminus = Vec::with_capacity(2 * m);
        let mut inverse = Vec::with_capacity(2 * m);
        let mut edge_labels = Vec::with_capacity(2 * m);
        for (k, &(u, v)) in pairs.iter().enumerate() {
            assert!(u < vertex_labels.len() && v < vertex_labels.len());
            origin.extend([u, v]);
            terminus.extend([v, u]);
            inverse.extend([2 * k + 1, 2 * k]);
            edge_labels.push(format!("s{}", k + 1));
            edge_labels.push(format!("~s{}", k + 1));
        }
        Multigraph {
            vertex_labels,
            edge_labels,
            origin,
            terminus,
            inverse,
            orientation: Orientation {
                edges: (0..m).map(|k| 2 * k).collect(),
            },
        }
    }

    /// Unlabelled convenience constructor; vertices are named `v0, v1, …`.
    pub fn from_edges(vertex_count: usize, pairs: &[(usize, usize)]) -> Self {
        Multigraph::from_pairs((0..vertex_count).map(|i| format!("v{i}")).collect(), pairs)
    }

    /// Assembles a graph from raw incidence data, checking the three axioms
    /// `ē ≠ e`, `ē̄ = e`, `o(ē) = t(e)`, and that `orientation` is valid.
    pub fn from_parts(
        vertex_labels: Vec<String>,
        edge_labels: Vec<String>,
        origin: Vec<usize>,
        terminus: Vec<usize>,
        inverse: Vec<usize>,
        orientation: Vec<usize>,
    ) -> Result<Self> {
        let n = vertex_labels.len();
        let m = origin.len();
        if terminus.len() != m || inverse.len() != m || edge_labels.len() != m {
            bail!(Validation, "inconsistent edge table lengths");
        }
        for e in 0..m {
            let inv = inverse[e];
            if origin[e] >= n || terminus[e] >= n || inv >= m {
                bail!(Validation, "edge {e} out of range");
            }
            if inv == e || inverse[inv] != e {
                bail!(
                    Validation,
                    "edge {e}: inversion is not a fixed-point-free involution"
                );
            }
            if origin[inv] != terminus[e] || terminus[inv] != origin[e] {
                bail!(Validation, "edge {e}: o(ē) ≠ t(e)");
            }
        }
        let g = Multigraph {
            vertex_labels,
            edge_labels,
            origin,
            terminus,
            inverse,
            orientation: Orientation { edges: Vec::new() },
        };
        let orientation = g.orientation_from(&orientation)?;
        Ok(Multigraph { orientation, ..g })
    }

    /// Validates `edges` as an orientation: exactly one edge of every pair.
    pub fn orientation_from(&self, edges: &[usize]) -> Result<Orientation> {
        let mut seen = vec![false; self.directed_edge_count()];
        for &e in edges {
            if e >= seen.len() {
                bail!(Validation, "orientation edge {e} out of range");
            }
            if seen[e] || seen[self.inverse[e]] {
                bail!(
                    Validation,
                    "orientation contains both directions of edge {}",
                    self.edge_labels[e]
                );
            }
            seen[e] = true;
        }
        if edges.len() * 2 != self.directed_edge_count() {
            bail!(
                Validation,
                "orientation must pick one direction of every edge"
            );
        }
        Ok(Orientation {
            edges: edges.to_vec(),
        })
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn directed_edge_count(&self) -> usize {
        self.origin.len()
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn origin(&self, e: usize) -> usize {
        self.origin[e]
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.terminus[e]
    }

    pub fn inverse(&self, e: usize) -> usize {
        self.inverse[e]
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|v| v == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_labels.iter().position(|e| e == label)
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    /// Directed edges with origin `v`, in id order.
    pub fn star(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.directed_edge_count()).filter(move |&e| self.origin[e] == v)
    }

    /// `stars()[v]` lists the directed edges leaving `v`.
    pub fn stars(&self) -> Vec<Vec<usize>> {
        let mut stars = vec![Vec::new(); self.vertex_count()];
        for e in 0..self.directed_edge_count() {
            stars[self.origin[e]].push(e);
        }
        stars
    }

    pub fn valency(&self, v: usize) -> usize {
        self.star(v).count()
    }

    /// Undirected edges as `(origin, terminus)` of their oriented representative.
    pub fn undirected_pairs(&self) -> Vec<(usize, usize)> {
        self.orientation
            .edges
            .iter()
            .map(|&e| (self.origin[e], self.terminus[e]))
            .collect()
    }

    /// Connected-component id per vertex, plus the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let stars = self.stars();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &e in &stars[v] {
                    let w = self.terminus[e];
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// True iff the graph has exactly one component; the empty graph is not
    /// connected.
    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().1 == 1
    }

    /// `χ = b₀ − b₁ = |V| − |E|` (valid for disconnected graphs too, since
    /// `b₁ = |E| − |V| + b₀`).
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.undirected_edge_count() as i64
    }

    /// First Betti number `b₁ = |E| − |V| + b₀`.
    pub fn betti_one(&self) -> usize {
        self.undirected_edge_count() + self.components().1 - self.vertex_count()
    }

    pub fn degree_matrix(&self) -> IntMatrix {
        let mut d = Matrix::filled(self.vertex_count(), BigInt::from(0));
        for v in 0..self.vertex_count() {
            d[(v, v)] = BigInt::from(self.valency(v));
        }
        d
    }

    /// `a_ij` = number of directed edges from `v_i` to `v_j`; a loop is
    /// counted twice on the diagonal through its two directions.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let mut counts = vec![0i64; self.vertex_count() * self.vertex_count()];
        for e in 0..self.directed_edge_count() {
            counts[self.origin[e] * self.vertex_count() + self.terminus[e]] += 1;
        }
        let n = self.vertex_count();
        Matrix::from_fn(n, |i, j| BigInt::from(counts[i * n + j]))
    }

    pub fn laplacian(&self) -> IntMatrix {
        let a = self.adjacency_matrix();
        let d = self.degree_matrix();
        Matrix::from_fn(self.vertex_count(), |i, j| &d[(i, j)] - &a[(i, j)])
    }

    /// `(D, A, Q)` in the vertex insertion order.
    pub fn matrices(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        (
            self.degree_matrix(),
            self.adjacency_matrix(),
            self.laplacian(),
        )
    }

    /// Number of spanning trees via the Matrix-Tree theorem: the cofactor of
    /// the Laplacian with the last row and column removed, by Bareiss.
    pub fn spanning_tree_count(&self) -> Result<BigInt> {
        if !self.is_connected() {
            bail!(
                Disconnected,
                "spanning trees are only counted on connected graphs"
            );
        }
        let n = self.vertex_count();
        let q = self.laplacian();
        Ok(bareiss_det(&q.minor(n - 1, n - 1)))
    }

    /// Breadth-first spanning tree from `root`, scanning edges in id order.
    /// Returns `parent_edge[v]`: the directed tree edge entering `v`.
    pub fn bfs_tree(&self, root: usize) -> Vec<Option<usize>> {
        let stars = self.stars();
        let mut parent = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in &stars[v] {
                let w = self.terminus[e];
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Basis of `π₁(X, v₀)` from the breadth-first spanning tree.
    pub fn pi1_basis(&self, v0: usize) -> Result<Pi1Basis> {
        self.check_base(v0)?;
        let parent = self.bfs_tree(v0);
        self.basis_from_parents(v0, parent)
    }

    /// Basis of `π₁(X, v₀)` from a caller-chosen spanning tree, given as
    /// directed edges (either direction of each tree edge).
    pub fn pi1_basis_with_tree(&self, v0: usize, tree: &[usize]) -> Result<Pi1Basis> {
        self.check_base(v0)?;
        if tree.len() + 1 != self.vertex_count() {
            bail!(Validation, "a spanning tree has |V| - 1 edges");
        }
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &e in tree {
            if e >= self.directed_edge_count() {
                bail!(Validation, "tree edge {e} out of range");
            }
            adj[self.origin[e]].push(e);
            adj[self.terminus[e]].push(self.inverse[e]);
        }
        let mut parent = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[v0] = true;
        let mut queue = VecDeque::from([v0]);
        while let Some(v) = queue.pop_front() {
            for &e in &adj[v] {
                let w = self.terminus[e];
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            bail!(Validation, "given edges do not span the graph");
        }
        self.basis_from_parents(v0, parent)
    }

    fn check_base(&self, v0: usize) -> Result<()> {
        if v0 >= self.vertex_count() {
            bail!(Validation, "base vertex {v0} out of range");
        }
        if !self.is_connected() {
            bail!(
                Disconnected,
                "fundamental group basis needs a connected graph"
            );
        }
        Ok(())
    }

    fn basis_from_parents(&self, v0: usize, parent: Vec<Option<usize>>) -> Result<Pi1Basis> {
        let mut in_tree = vec![false; self.directed_edge_count()];
        let mut tree = Vec::new();
        for e in parent.iter().flatten() {
            in_tree[*e] = true;
            in_tree[self.inverse[*e]] = true;
            tree.push(*e);
        }
        // Geodesic v0 → v inside the tree.
        let path_to = |mut v: usize| {
            let mut path = Vec::new();
            while v != v0 {
                let e = parent[v].expect("tree spans the graph");
                path.push(e);
                v = self.origin[e];
            }
            path.reverse();
            path
        };
        let mut loops = Vec::new();
        for &s in self.orientation.edges() {
            if in_tree[s] {
                continue;
            }
            let mut path = path_to(self.origin[s]);
            path.push(s);
            path.extend(
                path_to(self.terminus[s])
                    .iter()
                    .rev()
                    .map(|&e| self.inverse[e]),
            );
            loops.push(BasisLoop { edge: s, path });
        }
        Ok(Pi1Basis {
            base: v0,
            tree,
            loops,
        })
    }

    /// Checks that `path` is a walk in the graph, returning its endpoints.
    pub fn walk_endpoints(&self, path: &[usize]) -> Option<(usize, usize)> {
        let first = *path.first()?;
        for w in path.windows(2) {
            if self.terminus[w[0]] != self.origin[w[1]] {
                return None;
            }
        }
        Some((self.origin[first], self.terminus[*path.last()?]))
    }

    pub fn describe(&self) -> String {
        format!(
            "{} vertices, {} undirected edges, {} component(s)",
            self.vertex_count(),
            self.undirected_edge_count(),
            self.components().1
        )
    }
}

/// One basis loop `γ_s` for an oriented edge `s` outside the spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLoop {
    pub edge: usize,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1Basis {
    pub base: usize,
    /// Directed tree edges, each pointing away from the base vertex.
    pub tree: Vec<usize>,
    pub loops: Vec<BasisLoop>,
}

impl Pi1Basis {
    pub fn rank(&self) -> usize {
        self.loops.len()
    }
}

/// Bouquet `B_k`: one vertex with `k` loops.
pub fn bouquet(k: usize) -> Multigraph {
    Multigraph::from_pairs(vec!["v".to_string()], &vec![(0, 0); k])
}

/// Cycle graph `C_g`.
pub fn cycle(g: usize) -> Multigraph {
    let pairs: Vec<_> = (0..g).map(|i| (i, (i + 1) % g)).collect();
    Multigraph::from_edges(g, &pairs)
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Multigraph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    Multigraph::from_edges(n, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn bouquet_three_loops() {
        let b3 = bouquet(3);
        assert_eq!(b3.vertex_count(), 1);
        assert_eq!(b3.directed_edge_count(), 6);
        assert_eq!(b3.euler_characteristic(), -2);
        let (d, a, q) = b3.matrices();
        assert_eq!(d[(0, 0)], BigInt::from(6));
        assert_eq!(a[(0, 0)], BigInt::from(6));
        assert!(q[(0, 0)].is_zero());
        assert_eq!(b3.spanning_tree_count().unwrap(), BigInt::from(1));
        assert!(b3.is_connected());
    }

    #[test]
    fn builder_validation() {
        let g = build_multigraph(&names(&["v"]), &[]).unwrap();
        assert_eq!(g.euler_characteristic(), 1);
        let err = build_multigraph(&names(&["v"]), &[EdgeSpec::new("v", "w")]).unwrap_err();
        assert!(matches!(err, Error::Validation(msg) if msg.contains("\"w\"")));
    }

    #[test]
    fn single_loop_matrices() {
        let (d, a, q) = bouquet(1).matrices();
        assert_eq!(
            (d[(0, 0)].clone(), a[(0, 0)].clone()),
            (BigInt::from(2), BigInt::from(2))
        );
        assert!(q[(0, 0)].is_zero());
    }

    #[test]
    fn parallel_edges_matrices() {
        let g = Multigraph::from_edges(2, &[(1, 0), (1, 0), (0, 1), (0, 1)]);
        let (d, a, _) = g.matrices();
        assert_eq!(d, IntMatrix::from_i64(&[&[4, 0], &[0, 4]]));
        assert_eq!(a, IntMatrix::from_i64(&[&[0, 4], &[4, 0]]));
    }

    #[test]
    fn euler_characteristic_cases() {
        assert_eq!(cycle(5).euler_characteristic(), 0);
        let two_triangles =
            Multigraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(two_triangles.components().1, 2);
        assert_eq!(two_triangles.betti_one(), 2);
        assert_eq!(two_triangles.euler_characteristic(), 0);
        let empty = Multigraph::from_edges(0, &[]);
        assert!(!empty.is_connected());
        assert_eq!(empty.euler_characteristic(), 0);
    }

    #[test]
    fn spanning_trees_known_values() {
        for g in 3..8 {
            assert_eq!(cycle(g).spanning_tree_count().unwrap(), BigInt::from(g));
        }
        assert_eq!(complete(4).spanning_tree_count().unwrap(), BigInt::from(16));
        let disjoint = Multigraph::from_edges(4, &[(0, 1), (0, 1), (2, 3), (2, 3)]);
        assert!(!disjoint.is_connected());
        assert!(matches!(
            disjoint.spanning_tree_count(),
            Err(Error::Disconnected(_))
        ));
    }

    #[test]
    fn basis_of_two_vertex_graph_with_given_tree() {
        // s1, s2: v1 → v0 ; s3, s4: v0 → v1 ; tree = {s4}
        let g = build_multigraph(
            &names(&["v0", "v1"]),
            &[
                EdgeSpec::new("v1", "v0"),
                EdgeSpec::new("v1", "v0"),
                EdgeSpec::new("v0", "v1"),
                EdgeSpec::new("v0", "v1"),
            ],
        )
        .unwrap();
        let s = |k: usize| 2 * (k - 1);
        let basis = g.pi1_basis_with_tree(0, &[s(4)]).unwrap();
        let loops: Vec<_> = basis
            .loops
            .iter()
            .map(|l| (l.edge, l.path.clone()))
            .collect();
        assert_eq!(
            loops,
            vec![
                (s(1), vec![s(4), s(1)]),
                (s(2), vec![s(4), s(2)]),
                (s(3), vec![s(3), g.inverse(s(4))]),
            ]
        );
    }

    #[test]
    fn bfs_basis_loops_are_closed() {
        let g = complete(5);
        let basis = g.pi1_basis(2).unwrap();
        assert_eq!(basis.rank() as i64, 1 - g.euler_characteristic());
        for l in &basis.loops {
            assert_eq!(g.walk_endpoints(&l.path), Some((2, 2)));
        }
        let tree = Multigraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(tree.pi1_basis(0).unwrap().loops.is_empty());
        let b3 = bouquet(3).pi1_basis(0).unwrap();
        assert!(b3.loops.iter().all(|l| l.path.len() == 1));
    }

    #[test]
    fn from_parts_rejects_bad_involution() {
        let err = Multigraph::from_parts(
            names(&["a", "b"]),
            names(&["x", "y"]),
            vec![0, 1],
            vec![1, 0],
            vec![0, 1],
            vec![0],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
