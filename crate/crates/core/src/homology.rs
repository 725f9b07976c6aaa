//! The cycle lattice H₁(Γ, ℤ) via fundamental cycles, and the cographic
//! dicing system of edge functionals restricted to it.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactmat::IntMatrix;
use crate::graph::{CochainVector, GraphError, MultiGraph};
use crate::unimod::{DicingSystem, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge set is not a spanning forest: {0}")]
    NotSpanningForest(String),
    #[error("graph is a forest; its cycle space is zero")]
    Forest,
    #[error(transparent)]
    System(#[from] SystemError),
}

/// A fundamental cycle basis of H₁(Γ, ℤ) with respect to a spanning forest.
///
/// Basis vector `i` has coefficient +1 on `non_tree_edges[i]` and 0 on every
/// other non-tree edge.
#[derive(Debug, Clone)]
pub struct CycleBasis<'g> {
    pub graph: &'g MultiGraph,
    pub tree_edges: Vec<usize>,
    pub non_tree_edges: Vec<usize>,
    pub basis: Vec<CochainVector>,
}

impl CycleBasis<'_> {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis vectors as the rows of an integer matrix (one column per edge).
    pub fn coefficient_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .basis
            .iter()
            .map(|v| v.integer_coefficients().expect("cycle basis is integral"))
            .collect();
        if rows.is_empty() {
            return IntMatrix::zeros(0, self.graph.edge_count());
        }
        IntMatrix::from_rows(&rows)
    }

    pub fn tree_labels(&self) -> Vec<String> {
        self.tree_edges
            .iter()
            .map(|&e| self.graph.edge(e).label.clone())
            .collect()
    }
}

/// Breadth-first spanning forest: vertices in graph order, incident edges in
/// lexicographic label order. Returns sorted edge indices.
pub fn spanning_forest(g: &MultiGraph) -> Vec<usize> {
    let mut adj = g.adjacency();
    for list in &mut adj {
        list.sort_by(|a, b| g.edge(a.1).label.cmp(&g.edge(b.1).label));
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut tree = Vec::new();
    for root in 0..g.vertex_count() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    tree.push(e);
                    queue.push_back(w);
                }
            }
        }
    }
    tree.sort_unstable();
    tree
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn validate_forest(g: &MultiGraph, labels: &[String]) -> Result<Vec<usize>, HomologyError> {
    let mut edges = BTreeSet::new();
    for l in labels {
        let e = g.edge_id(l)?;
        if !edges.insert(e) {
            return Err(HomologyError::NotSpanningForest(format!("`{l}` listed twice")));
        }
    }
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    for &e in &edges {
        let edge = g.edge(e);
        let (a, b) = (find(&mut parent, edge.tail), find(&mut parent, edge.head));
        if a == b {
            return Err(HomologyError::NotSpanningForest(format!(
                "`{}` closes a cycle",
                edge.label
            )));
        }
        parent[a] = b;
    }
    let expected = g.vertex_count() - g.components().len();
    if edges.len() != expected {
        return Err(HomologyError::NotSpanningForest(format!(
            "{} edges given, a spanning forest has {expected}",
            edges.len()
        )));
    }
    Ok(edges.into_iter().collect())
}

/// Fundamental cycle basis with respect to `tree` (edge labels), or the
/// default [`spanning_forest`] when `tree` is `None`.
pub fn cycle_basis<'g>(g: &'g MultiGraph, tree: Option<&[String]>) -> Result<CycleBasis<'g>, HomologyError> {
    let tree_edges = match tree {
        Some(labels) => validate_forest(g, labels)?,
        None => spanning_forest(g),
    };
    let in_tree: BTreeSet<usize> = tree_edges.iter().copied().collect();

    // Root every tree component and record parent edges.
    let n = g.vertex_count();
    let mut tree_adj = vec![Vec::new(); n];
    for &e in &tree_edges {
        let edge = g.edge(e);
        tree_adj[edge.tail].push((edge.head, e));
        tree_adj[edge.head].push((edge.tail, e));
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &tree_adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    // +1 when the tree edge is traversed along its orientation from `from` to `to`.
    let step = |e: usize, from: usize| -> i64 {
        if g.edge(e).tail == from {
            1
        } else {
            -1
        }
    };

    let mut non_tree_edges = Vec::new();
    let mut basis = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if in_tree.contains(&e) {
            continue;
        }
        let mut coeffs = vec![0i64; g.edge_count()];
        coeffs[e] = 1;
        // Close the cycle by walking the tree from head back to tail.
        let (mut x, mut y) = (edge.head, edge.tail);
        let mut tail_side = Vec::new();
        while x != y {
            if depth[x] >= depth[y] {
                let (p, pe) = parent[x].expect("non-root has parent");
                coeffs[pe] += step(pe, x);
                x = p;
            } else {
                let (p, pe) = parent[y].expect("non-root has parent");
                tail_side.push((pe, p));
                y = p;
            }
        }
        // On the tail side we traverse from the parent down to the child.
        for (pe, from) in tail_side {
            coeffs[pe] += step(pe, from);
        }
        non_tree_edges.push(e);
        basis.push(CochainVector::from_integers(coeffs));
    }
    Ok(CycleBasis {
        graph: g,
        tree_edges,
        non_tree_edges,
        basis,
    })
}

/// True iff every signed vertex-incidence sum of `v` vanishes.
pub fn is_cycle(g: &MultiGraph, v: &CochainVector) -> bool {
    g.boundary(v).is_ok_and(|b| b.iter().all(|&x| x == 0))
}

/// The cographic dicing system: edge coordinate functionals restricted to
/// H₁(Γ), written in the fundamental cycle basis. Bridges (zero columns) are
/// dropped and ± duplicates merged.
pub fn cographic_dicing_system(g: &MultiGraph) -> Result<DicingSystem, HomologyError> {
    let basis = cycle_basis(g, None)?;
    if basis.is_empty() {
        return Err(HomologyError::Forest);
    }
    // Column j holds the coefficient of edge j in each basis cycle.
    let full: IntMatrix = basis.coefficient_matrix();
    let labels = g.edge_labels();
    Ok(DicingSystem::from_full_matrix(full, labels)?)
}

/// Integer change-of-basis matrix `C` with `C·from = to`, when one exists.
pub fn change_of_basis(from: &CycleBasis<'_>, to: &CycleBasis<'_>) -> Option<IntMatrix> {
    // Cycles are determined by their non-tree coefficients of `from`.
    let rows: Vec<Vec<BigInt>> = to
        .basis
        .iter()
        .map(|v| {
            let c = v.integer_coefficients().expect("integral");
            from.non_tree_edges.iter().map(|&e| BigInt::from(c[e])).collect()
        })
        .collect();
    let cols = from.non_tree_edges.len();
    let entries: Vec<BigInt> = rows.into_iter().flatten().collect();
    let c = IntMatrix::new(to.basis.len(), cols, entries).ok()?;
    (c.mul(&from.coefficient_matrix()).ok()? == to.coefficient_matrix()).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{det, rank};
    use num_traits::Signed;

    fn complete_graph(n: usize) -> MultiGraph {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((format!("e{}{}", i + 1, j + 1), names[i].clone(), names[j].clone()));
            }
        }
        MultiGraph::from_parts(&names, &edges).unwrap()
    }

    fn triangle(prefix: &str) -> Vec<(String, String, String)> {
        let v = |i: usize| format!("{prefix}{i}");
        vec![
            (format!("{prefix}x"), v(0), v(1)),
            (format!("{prefix}y"), v(1), v(2)),
            (format!("{prefix}z"), v(2), v(0)),
        ]
    }

    #[test]
    fn loop_has_single_cycle() {
        let g = MultiGraph::from_parts(&["v"], &[("l", "v", "v")]).unwrap();
        let b = cycle_basis(&g, None).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.basis[0], CochainVector::from_integers(vec![1]));
    }

    #[test]
    fn k5_betti_six() {
        let g = complete_graph(5);
        let b = cycle_basis(&g, None).unwrap();
        assert_eq!(b.len(), 6);
        for v in &b.basis {
            assert!(is_cycle(&g, v));
        }
        assert_eq!(rank(&b.coefficient_matrix()), 6);
    }

    #[test]
    fn basis_has_unit_on_own_non_tree_edge() {
        let g = complete_graph(5);
        let b = cycle_basis(&g, None).unwrap();
        for (i, v) in b.basis.iter().enumerate() {
            let c = v.integer_coefficients().unwrap();
            for (j, &e) in b.non_tree_edges.iter().enumerate() {
                assert_eq!(c[e], i64::from(i == j));
            }
        }
    }

    #[test]
    fn rejects_bad_trees() {
        let g = complete_graph(4);
        let too_small = vec!["e12".to_string()];
        assert!(matches!(
            cycle_basis(&g, Some(&too_small)),
            Err(HomologyError::NotSpanningForest(_))
        ));
        let cyclic: Vec<String> = ["e12", "e23", "e13"].map(String::from).to_vec();
        assert!(matches!(
            cycle_basis(&g, Some(&cyclic)),
            Err(HomologyError::NotSpanningForest(_))
        ));
        let unknown = vec!["nope".to_string()];
        assert!(matches!(cycle_basis(&g, Some(&unknown)), Err(HomologyError::Graph(_))));
    }

    #[test]
    fn single_edge_is_not_cycle() {
        let g = MultiGraph::from_parts(&["a", "b"], &[("e", "a", "b")]).unwrap();
        assert!(!is_cycle(&g, &CochainVector::from_integers(vec![1])));
    }

    #[test]
    fn triangle_dicing_collapses_to_one_vector() {
        let g = MultiGraph::from_parts(&["t0", "t1", "t2"], &triangle("t")).unwrap();
        let d = cographic_dicing_system(&g).unwrap();
        assert_eq!(d.system.matrix(), &IntMatrix::from_rows(&[[1]]));
        assert_eq!(d.merged.len(), 2);
    }

    #[test]
    fn disjoint_triangles_are_block_diagonal() {
        let mut edges = triangle("p");
        edges.extend(triangle("q"));
        let g = MultiGraph::from_parts(&["p0", "p1", "p2", "q0", "q1", "q2"], &edges).unwrap();
        let d = cographic_dicing_system(&g).unwrap();
        assert_eq!(d.system.dim(), 2);
        assert_eq!(d.system.matrix().cols(), 2);
        assert_eq!(d.system.matrix(), &IntMatrix::from_rows(&[[1, 0], [0, 1]]));
    }

    #[test]
    fn bridges_are_dropped() {
        let g = MultiGraph::from_parts(&["a", "b"], &[("l", "a", "a"), ("br", "a", "b")]).unwrap();
        let d = cographic_dicing_system(&g).unwrap();
        assert_eq!(d.dropped_zero, vec!["br".to_string()]);
        assert_eq!(d.column_edges, vec!["l".to_string()]);
    }

    #[test]
    fn forest_is_rejected() {
        let g = MultiGraph::from_parts(&["a", "b"], &[("e", "a", "b")]).unwrap();
        assert!(matches!(cographic_dicing_system(&g), Err(HomologyError::Forest)));
    }

    #[test]
    fn k5_dicing_is_totally_unimodular() {
        let d = cographic_dicing_system(&complete_graph(5)).unwrap();
        assert_eq!(d.system.dim(), 6);
        assert!(d.system.matrix().cols() <= 10);
        assert!(d.system.is_totally_unimodular().is_tu());
    }

    #[test]
    fn tree_choice_changes_basis_unimodularly() {
        let g = complete_graph(5);
        let default = cycle_basis(&g, None).unwrap();
        let star: Vec<String> = ["e15", "e25", "e35", "e45"].map(String::from).to_vec();
        let other = cycle_basis(&g, Some(&star)).unwrap();
        let c = change_of_basis(&default, &other).expect("integral change of basis");
        assert_eq!(det(&c).unwrap().abs(), BigInt::from(1));
    }
}
