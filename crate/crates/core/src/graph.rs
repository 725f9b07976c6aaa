//! Multigraphs with oriented, labelled edges, their involutions, and 1-chains
//! with half-integer coefficients.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge label `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("involution is not of order two on {kind} `{name}`")]
    NotInvolutive { kind: &'static str, name: String },
    #[error("edge `{edge}` maps to `{image}` but their endpoints do not correspond")]
    Incidence { edge: String, image: String },
    #[error("vector has {found} coefficients, graph has {expected} edges")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
}

impl GraphError {
    fn at(self, line: usize) -> Self {
        match self {
            e @ (GraphError::AtLine { .. } | GraphError::Syntax { .. }) => e,
            e => GraphError::AtLine {
                line,
                source: Box::new(e),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Finite multigraph; parallel edges and loops are allowed.
#[derive(Debug, Clone, Default)]
pub struct MultiGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_ids: HashMap<String, usize>,
    edge_ids: HashMap<String, usize>,
}

impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for MultiGraph {}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex names and `(label, tail, head)` triples.
    pub fn from_parts<V, L, T, H>(vertices: &[V], edges: &[(L, T, H)]) -> Result<Self, GraphError>
    where
        V: AsRef<str>,
        L: AsRef<str>,
        T: AsRef<str>,
        H: AsRef<str>,
    {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (label, tail, head) in edges {
            g.add_edge(label.as_ref(), tail.as_ref(), head.as_ref())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize, GraphError> {
        if self.vertex_ids.contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        let id = self.vertices.len();
        self.vertices.push(name.to_string());
        self.vertex_ids.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_edge(&mut self, label: &str, tail: &str, head: &str) -> Result<usize, GraphError> {
        let t = self.vertex_id(tail)?;
        let h = self.vertex_id(head)?;
        self.add_edge_by_index(label, t, h)
    }

    pub fn add_edge_by_index(&mut self, label: &str, tail: usize, head: usize) -> Result<usize, GraphError> {
        if self.edge_ids.contains_key(label) {
            return Err(GraphError::DuplicateEdge(label.to_string()));
        }
        for v in [tail, head] {
            if v >= self.vertices.len() {
                return Err(GraphError::UnknownVertex(format!("#{v}")));
            }
        }
        let id = self.edges.len();
        self.edges.push(Edge {
            label: label.to_string(),
            tail,
            head,
        });
        self.edge_ids.insert(label.to_string(), id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn vertex_id(&self, name: &str) -> Result<usize, GraphError> {
        self.vertex_ids
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_id(&self, label: &str) -> Result<usize, GraphError> {
        self.edge_ids
            .get(label)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(label.to_string()))
    }

    pub fn edge_labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    /// Number of edge ends at `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.tail == v) + usize::from(e.head == v))
            .sum()
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Component names, for reports.
    pub fn component_names(&self) -> Vec<Vec<String>> {
        self.components()
            .into_iter()
            .map(|c| c.into_iter().map(|v| self.vertices[v].clone()).collect())
            .collect()
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    /// `(neighbour, edge)` pairs per vertex; loops appear once.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.tail].push((e.head, i));
            if !e.is_loop() {
                adj[e.head].push((e.tail, i));
            }
        }
        adj
    }

    /// Signed vertex-incidence sums of a chain (head +, tail −), doubled.
    pub fn boundary(&self, v: &CochainVector) -> Result<Vec<i64>, GraphError> {
        self.check_len(v)?;
        let mut out = vec![0i64; self.vertices.len()];
        for (e, &c) in self.edges.iter().zip(&v.doubled) {
            out[e.head] += c;
            out[e.tail] -= c;
        }
        Ok(out)
    }

    pub(crate) fn check_len(&self, v: &CochainVector) -> Result<(), GraphError> {
        if v.len() != self.edges.len() {
            return Err(GraphError::DimensionMismatch {
                expected: self.edges.len(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Renders a chain as a signed sum of edge labels, e.g. `e2 - e6 + 1/2 e7`.
    pub fn format_chain(&self, v: &CochainVector) -> String {
        let mut out = String::new();
        for (e, &d) in self.edges.iter().zip(&v.doubled) {
            if d == 0 {
                continue;
            }
            let sign = if d < 0 { "-" } else { "+" };
            let mag = d.unsigned_abs();
            let coeff = match (mag % 2, mag / 2) {
                (0, 1) => String::new(),
                (0, k) => format!("{k} "),
                (_, _) => format!("{mag}/2 "),
            };
            if out.is_empty() {
                let lead = if d < 0 { "-" } else { "" };
                let _ = write!(out, "{lead}{coeff}{}", e.label);
            } else {
                let _ = write!(out, " {sign} {coeff}{}", e.label);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// An order-≤2 automorphism of a [`MultiGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInvolution {
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
    /// +1 when `(tail, head)` maps to `(tail, head)` of the image edge, −1 when reversed.
    edge_sign: Vec<i8>,
}

impl GraphInvolution {
    pub fn identity(g: &MultiGraph) -> Self {
        Self {
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).collect(),
            edge_sign: vec![1; g.edge_count()],
        }
    }

    /// Validates an explicit involution.
    pub fn new(
        g: &MultiGraph,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
        edge_sign: Vec<i8>,
    ) -> Result<Self, GraphError> {
        let (nv, ne) = (g.vertex_count(), g.edge_count());
        if vertex_map.len() != nv || vertex_map.iter().any(|&w| w >= nv) {
            return Err(GraphError::DimensionMismatch {
                expected: nv,
                found: vertex_map.len(),
            });
        }
        if edge_map.len() != ne || edge_sign.len() != ne || edge_map.iter().any(|&f| f >= ne) {
            return Err(GraphError::DimensionMismatch {
                expected: ne,
                found: edge_map.len(),
            });
        }
        for v in 0..nv {
            if vertex_map[vertex_map[v]] != v {
                return Err(GraphError::NotInvolutive {
                    kind: "vertex",
                    name: g.vertices[v].clone(),
                });
            }
        }
        for e in 0..ne {
            let f = edge_map[e];
            if edge_map[f] != e || edge_sign[e] * edge_sign[f] != 1 || !matches!(edge_sign[e], 1 | -1) {
                return Err(GraphError::NotInvolutive {
                    kind: "edge",
                    name: g.edges[e].label.clone(),
                });
            }
            let (src, dst) = (&g.edges[e], &g.edges[f]);
            let (t, h) = (vertex_map[src.tail], vertex_map[src.head]);
            let ok = if edge_sign[e] == 1 {
                (dst.tail, dst.head) == (t, h)
            } else {
                (dst.tail, dst.head) == (h, t)
            };
            if !ok {
                return Err(GraphError::Incidence {
                    edge: src.label.clone(),
                    image: dst.label.clone(),
                });
            }
        }
        Ok(Self {
            vertex_map,
            edge_map,
            edge_sign,
        })
    }

    /// Builds an involution from swapped vertex and edge pairs, inferring
    /// orientation signs from the endpoints. Unlisted vertices and edges are fixed.
    pub fn from_swaps<S: AsRef<str>>(
        g: &MultiGraph,
        vertex_swaps: &[(S, S)],
        edge_swaps: &[(S, S)],
    ) -> Result<Self, GraphError> {
        let mut b = InvolutionBuilder::new(g);
        for (a, c) in vertex_swaps {
            b.swap_vertices(a.as_ref(), c.as_ref())?;
        }
        for (a, c) in edge_swaps {
            b.swap_edges(a.as_ref(), c.as_ref(), None)?;
        }
        b.finish().map_err(|(_, e)| e)
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn edge_image(&self, e: usize) -> usize {
        self.edge_map[e]
    }

    pub fn edge_sign(&self, e: usize) -> i8 {
        self.edge_sign[e]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.edge_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.edge_sign.iter().all(|&s| s == 1)
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i != j)
            && self.edge_map.iter().enumerate().all(|(i, &j)| i != j)
    }

    /// Vertex orbits (singletons or swapped pairs), ordered by smallest member.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        (0..self.vertex_map.len())
            .filter(|&v| v <= self.vertex_map[v])
            .map(|v| {
                let w = self.vertex_map[v];
                if v == w {
                    vec![v]
                } else {
                    vec![v, w]
                }
            })
            .collect()
    }

    /// The push-forward of a chain: the coefficient of `ι(e)` is `sign(e)·v[e]`.
    pub fn apply(&self, v: &CochainVector) -> Result<CochainVector, GraphError> {
        if v.len() != self.edge_map.len() {
            return Err(GraphError::DimensionMismatch {
                expected: self.edge_map.len(),
                found: v.len(),
            });
        }
        let mut out = vec![0i64; v.len()];
        for (e, &c) in v.doubled.iter().enumerate() {
            out[self.edge_map[e]] = i64::from(self.edge_sign[e]) * c;
        }
        Ok(CochainVector { doubled: out })
    }
}

/// Free function form of [`GraphInvolution::apply`].
pub fn apply_involution(iota: &GraphInvolution, v: &CochainVector) -> Result<CochainVector, GraphError> {
    iota.apply(v)
}

struct InvolutionBuilder<'g> {
    g: &'g MultiGraph,
    vertex_map: Vec<Option<usize>>,
    edge_map: Vec<Option<(usize, Option<i8>)>>,
    edge_line: Vec<usize>,
}

impl<'g> InvolutionBuilder<'g> {
    fn new(g: &'g MultiGraph) -> Self {
        Self {
            g,
            vertex_map: vec![None; g.vertex_count()],
            edge_map: vec![None; g.edge_count()],
            edge_line: vec![0; g.edge_count()],
        }
    }

    fn swap_vertices(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        let (x, y) = (self.g.vertex_id(a)?, self.g.vertex_id(b)?);
        for (p, q) in [(x, y), (y, x)] {
            match self.vertex_map[p] {
                Some(old) if old != q => {
                    return Err(GraphError::NotInvolutive {
                        kind: "vertex",
                        name: self.g.vertices[p].clone(),
                    })
                }
                _ => self.vertex_map[p] = Some(q),
            }
        }
        Ok(())
    }

    fn swap_edges(&mut self, a: &str, b: &str, sign: Option<i8>) -> Result<(), GraphError> {
        self.swap_edges_at(a, b, sign, 0)
    }

    fn swap_edges_at(&mut self, a: &str, b: &str, sign: Option<i8>, line: usize) -> Result<(), GraphError> {
        let (x, y) = (self.g.edge_id(a)?, self.g.edge_id(b)?);
        for (p, q) in [(x, y), (y, x)] {
            match self.edge_map[p] {
                Some((old, _)) if old != q => {
                    return Err(GraphError::NotInvolutive {
                        kind: "edge",
                        name: self.g.edges[p].label.clone(),
                    })
                }
                _ => {
                    self.edge_map[p] = Some((q, sign));
                    self.edge_line[p] = line;
                }
            }
        }
        Ok(())
    }

    /// On failure also returns the line of the offending `iota_e` entry (0 if unknown).
    fn finish(self) -> Result<GraphInvolution, (usize, GraphError)> {
        let vertex_map: Vec<usize> = self
            .vertex_map
            .iter()
            .enumerate()
            .map(|(i, m)| m.unwrap_or(i))
            .collect();
        let mut edge_map = Vec::with_capacity(self.g.edge_count());
        let mut edge_sign = Vec::with_capacity(self.g.edge_count());
        for (e, entry) in self.edge_map.iter().enumerate() {
            let (f, given) = entry.unwrap_or((e, None));
            let src = &self.g.edges[e];
            let dst = &self.g.edges[f];
            let (t, h) = (vertex_map[src.tail], vertex_map[src.head]);
            let forward = (dst.tail, dst.head) == (t, h);
            let backward = (dst.tail, dst.head) == (h, t);
            let err = || {
                (
                    self.edge_line[e],
                    GraphError::Incidence {
                        edge: src.label.clone(),
                        image: dst.label.clone(),
                    },
                )
            };
            let sign = match (given, forward, backward) {
                (Some(1), true, _) | (Some(-1), _, true) => given.unwrap_or(1),
                (Some(_), _, _) => return Err(err()),
                (None, true, _) => 1,
                (None, false, true) => -1,
                (None, false, false) => return Err(err()),
            };
            edge_map.push(f);
            edge_sign.push(sign);
        }
        GraphInvolution::new(self.g, vertex_map, edge_map, edge_sign).map_err(|e| {
            let line = match &e {
                GraphError::NotInvolutive { name, .. } | GraphError::Incidence { edge: name, .. } => self
                    .g
                    .edge_id(name)
                    .map(|i| self.edge_line[i])
                    .unwrap_or(0),
                _ => 0,
            };
            (line, e)
        })
    }
}

/// A 1-chain with coefficients in ½ℤ, one per edge in graph order.
///
/// Stored as twice the coefficients so all arithmetic stays in integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CochainVector {
    doubled: Vec<i64>,
}

impl CochainVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            doubled: vec![0; n],
        }
    }

    pub fn from_integers(coeffs: Vec<i64>) -> Self {
        Self {
            doubled: coeffs.into_iter().map(|c| 2 * c).collect(),
        }
    }

    /// The chain `doubled / 2`.
    pub fn from_doubled(doubled: Vec<i64>) -> Self {
        Self { doubled }
    }

    /// Builds an integer chain from `(label, coefficient)` terms.
    pub fn from_terms<S: AsRef<str>>(g: &MultiGraph, terms: &[(S, i64)]) -> Result<Self, GraphError> {
        let mut v = vec![0; g.edge_count()];
        for (label, c) in terms {
            v[g.edge_id(label.as_ref())?] += 2 * c;
        }
        Ok(Self { doubled: v })
    }

    pub fn len(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn is_zero(&self) -> bool {
        self.doubled.iter().all(|&c| c == 0)
    }

    pub fn is_integral(&self) -> bool {
        self.doubled.iter().all(|c| c % 2 == 0)
    }

    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        self.is_integral()
            .then(|| self.doubled.iter().map(|c| c / 2).collect())
    }

    /// Edge indices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.doubled.len()).filter(|&i| self.doubled[i] != 0).collect()
    }
}

impl Neg for &CochainVector {
    type Output = CochainVector;
    fn neg(self) -> CochainVector {
        CochainVector {
            doubled: self.doubled.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for &CochainVector {
    type Output = CochainVector;
    fn add(self, rhs: &CochainVector) -> CochainVector {
        assert_eq!(self.len(), rhs.len(), "chain length mismatch");
        CochainVector {
            doubled: self.doubled.iter().zip(&rhs.doubled).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CochainVector {
    type Output = CochainVector;
    fn sub(self, rhs: &CochainVector) -> CochainVector {
        self + &(-rhs)
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// vertex a1
/// edge e1 b3 a2
/// iota_v a1 b1
/// iota_e e1 e1'
/// ```
///
/// `iota_e` accepts an optional trailing `+` or `-` to fix the orientation
/// sign of loops. Anything after `#` is a comment.
pub fn parse_graph(text: &str) -> Result<(MultiGraph, Option<GraphInvolution>), GraphError> {
    let mut g = MultiGraph::new();
    let mut vertex_swaps = Vec::new();
    let mut edge_swaps = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let syntax = |msg: &str| GraphError::Syntax {
            line,
            msg: msg.to_string(),
        };
        let in_iota_block = !vertex_swaps.is_empty() || !edge_swaps.is_empty();
        match tokens.as_slice() {
            ["vertex", name] => {
                if in_iota_block {
                    return Err(syntax("vertex declared after involution block"));
                }
                g.add_vertex(name).map_err(|e| e.at(line))?;
            }
            ["edge", label, tail, head] => {
                if in_iota_block {
                    return Err(syntax("edge declared after involution block"));
                }
                g.add_edge(label, tail, head).map_err(|e| e.at(line))?;
            }
            ["iota_v", a, b] => {
                g.vertex_id(a).map_err(|e| e.at(line))?;
                g.vertex_id(b).map_err(|e| e.at(line))?;
                vertex_swaps.push((line, a.to_string(), b.to_string()));
            }
            ["iota_e", a, b, rest @ ..] => {
                let sign = match rest {
                    [] => None,
                    ["+"] => Some(1),
                    ["-"] => Some(-1),
                    _ => return Err(syntax("expected `iota_e <e> <f> [+|-]`")),
                };
                g.edge_id(a).map_err(|e| e.at(line))?;
                g.edge_id(b).map_err(|e| e.at(line))?;
                edge_swaps.push((line, a.to_string(), b.to_string(), sign));
            }
            [kw, ..] => return Err(syntax(&format!("unrecognised or malformed `{kw}` line"))),
            [] => unreachable!(),
        }
    }

    if vertex_swaps.is_empty() && edge_swaps.is_empty() {
        return Ok((g, None));
    }
    let mut b = InvolutionBuilder::new(&g);
    for (line, a, c) in &vertex_swaps {
        b.swap_vertices(a, c).map_err(|e| e.at(*line))?;
    }
    for (line, a, c, sign) in &edge_swaps {
        b.swap_edges_at(a, c, *sign, *line).map_err(|e| e.at(*line))?;
    }
    let iota = b.finish().map_err(|(line, e)| if line > 0 { e.at(line) } else { e })?;
    Ok((g, Some(iota)))
}

/// Writes a graph (and optional involution) in the format read by [`parse_graph`].
pub fn write_graph(g: &MultiGraph, iota: Option<&GraphInvolution>) -> String {
    let mut out = String::new();
    for v in &g.vertices {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in &g.edges {
        let _ = writeln!(out, "edge {} {} {}", e.label, g.vertices[e.tail], g.vertices[e.head]);
    }
    if let Some(iota) = iota {
        for (v, &w) in iota.vertex_map.iter().enumerate() {
            if v <= w {
                let _ = writeln!(out, "iota_v {} {}", g.vertices[v], g.vertices[w]);
            }
        }
        for (e, &f) in iota.edge_map.iter().enumerate() {
            if e <= f {
                let sign = if g.edges[e].is_loop() && iota.edge_sign[e] == -1 {
                    " -"
                } else {
                    ""
                };
                let _ = writeln!(out, "iota_e {} {}{sign}", g.edges[e].label, g.edges[f].label);
            }
        }
    }
    out
}

/// Contracts each involution orbit to one vertex and each edge orbit to one
/// edge, keeping the lower-indexed representative's label.
pub fn quotient(g: &MultiGraph, iota: &GraphInvolution) -> MultiGraph {
    let mut orbit_of = BTreeMap::new();
    let mut q = MultiGraph::new();
    for orbit in iota.vertex_orbits() {
        let name = orbit.iter().map(|&v| g.vertices[v].as_str()).collect::<Vec<_>>().join("|");
        let id = q.add_vertex(&name).expect("orbit names are distinct");
        for v in orbit {
            orbit_of.insert(v, id);
        }
    }
    for (e, edge) in g.edges.iter().enumerate() {
        if e <= iota.edge_map[e] {
            q.add_edge_by_index(&edge.label, orbit_of[&edge.tail], orbit_of[&edge.head])
                .expect("labels unique in source graph");
        }
    }
    q
}
