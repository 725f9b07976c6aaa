//! Connected multigraphs up to isomorphism, grown one edge at a time and
//! deduplicated by a canonical adjacency code.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::MultiGraph;

/// A small multigraph on vertices `0..n` given by its symmetric multiplicity
/// matrix; `adj[i][i]` counts loops at `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmallGraph {
    adj: Vec<Vec<u8>>,
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![vec![0; n]; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        let n = self.adj.len();
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| self.adj[i][j] as usize)
            .sum()
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u8 {
        self.adj[a][b]
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a][b] += 1;
        if a != b {
            self.adj[b][a] += 1;
        }
    }

    fn add_vertex(&mut self) -> usize {
        for row in &mut self.adj {
            row.push(0);
        }
        self.adj.push(vec![0; self.adj.len() + 1]);
        self.adj.len() - 1
    }

    /// Edges as `(i, j)` with `i ≤ j`, lexicographic, parallel edges repeated.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.adj.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                out.extend(std::iter::repeat((i, j)).take(self.adj[i][j] as usize));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if self.adj[v][w] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.adj.len()).any(|i| self.adj[i][i] > 0)
    }

    /// Relabelled copy: vertex `order[k]` becomes vertex `k`.
    pub fn relabel(&self, order: &[usize]) -> Self {
        let adj = order
            .iter()
            .map(|&a| order.iter().map(|&b| self.adj[a][b]).collect())
            .collect();
        Self { adj }
    }

    /// The canonical representative of the isomorphism class.
    pub fn canonical(&self) -> Self {
        let cells = refined_cells(self);
        let mut best: Option<Vec<u8>> = None;
        let mut best_order = Vec::new();
        let mut order = Vec::with_capacity(self.adj.len());
        permute_cells(&cells, 0, &mut order, &mut |order| {
            let code = self.code(order);
            if best.as_ref().map_or(true, |b| code > *b) {
                best = Some(code);
                best_order = order.to_vec();
            }
        });
        self.relabel(&best_order)
    }

    fn code(&self, order: &[usize]) -> Vec<u8> {
        let n = order.len();
        let mut code = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                code.push(self.adj[order[i]][order[j]]);
            }
        }
        code
    }

    /// As a [`MultiGraph`] with vertices `v1, v2, …` and the given edge labels.
    pub fn to_multigraph(&self, label: impl Fn(usize) -> String) -> MultiGraph {
        let mut g = MultiGraph::new();
        for i in 0..self.adj.len() {
            g.add_vertex(&format!("v{}", i + 1)).expect("fresh vertex names");
        }
        for (k, (a, b)) in self.edges().into_iter().enumerate() {
            g.add_edge_by_index(&label(k), a, b).expect("labels are distinct");
        }
        g
    }
}

/// Vertex classes after iterated colour refinement, in canonical class order.
fn refined_cells(g: &SmallGraph) -> Vec<Vec<usize>> {
    let n = g.adj.len();
    let degree = |v: usize| -> usize { (0..n).map(|w| g.adj[v][w] as usize).sum::<usize>() + g.adj[v][v] as usize };
    let mut colour: Vec<usize> = {
        let keys: Vec<(usize, u8)> = (0..n).map(|v| (degree(v), g.adj[v][v])).collect();
        rank_keys(&keys)
    };
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u8)> = (0..n)
                    .filter(|&w| w != v && g.adj[v][w] > 0)
                    .map(|w| (colour[w], g.adj[v][w]))
                    .collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let next = rank_keys(&keys);
        let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        if classes(&next) == classes(&colour) {
            break;
        }
        colour = next;
    }
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, c) in colour.into_iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    cells.into_values().collect()
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let sorted: BTreeSet<K> = keys.iter().cloned().collect();
    let index: BTreeMap<K, usize> = sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    keys.iter().map(|k| index[k]).collect()
}

fn permute_cells(cells: &[Vec<usize>], k: usize, order: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if k == cells.len() {
        visit(order);
        return;
    }
    let mut cell = cells[k].clone();
    let len = cell.len();
    heap_permutations(&mut cell, len, &mut |perm| {
        let base = order.len();
        order.extend_from_slice(perm);
        permute_cells(cells, k + 1, order, visit);
        order.truncate(base);
    });
}

fn heap_permutations(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, visit);
}

/// Every connected multigraph with at most `max_vertices` vertices and
/// `max_edges` edges, up to isomorphism, keyed by `(vertices, edges)`.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    graphs: BTreeMap<(usize, usize), Vec<SmallGraph>>,
}

impl Catalog {
    pub fn get(&self, vertices: usize, edges: usize) -> &[SmallGraph] {
        self.graphs.get(&(vertices, edges)).map_or(&[], Vec::as_slice)
    }

    pub fn counts(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.graphs.iter().map(|(&k, v)| (k, v.len()))
    }

    pub fn len(&self) -> usize {
        self.graphs.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

/// Grows connected graphs from a single vertex: each step adds an edge between
/// existing vertices or a new pendant vertex. Every connected multigraph arises,
/// since it has either a non-bridge edge or a leaf to remove.
pub fn connected_multigraphs(max_vertices: usize, max_edges: usize, loops: bool) -> Catalog {
    let mut catalog = Catalog::default();
    if max_vertices == 0 {
        return catalog;
    }
    let mut level: BTreeSet<SmallGraph> = BTreeSet::from([SmallGraph::empty(1)]);
    for e in 0..=max_edges {
        for g in &level {
            catalog.graphs.entry((g.vertex_count(), e)).or_default().push(g.clone());
        }
        if e == max_edges {
            break;
        }
        let mut next = BTreeSet::new();
        for g in &level {
            let n = g.vertex_count();
            for a in 0..n {
                for b in a..n {
                    if a == b && !loops {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(a, b);
                    next.insert(h.canonical());
                }
                if n < max_vertices {
                    let mut h = g.clone();
                    let v = h.add_vertex();
                    h.add_edge(a, v);
                    next.insert(h.canonical());
                }
            }
        }
        level = next;
    }
    catalog
}
