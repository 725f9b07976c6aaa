//! Cographic recognition by exhaustive search over multigraphs.
//!
//! The columns of `S` give the edge functionals on a cycle space exactly when
//! the dual matroid of `S` is the graphic matroid of some multigraph, so the
//! search runs over graphs `G` whose incidence matroid matches a
//! representation of the dual.

use std::ops::ControlFlow;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::enumerate::{connected_multigraphs, Catalog, SmallGraph};
use super::matroid::{ColumnMatroid, MAX_ELEMENTS};
use super::{SystemError, UnimodularSystem};
use crate::exactmat::{hnf, IntMatrix};
use crate::graph::MultiGraph;
use crate::homology::cycle_basis;

/// Incidence matrix (head +1, tail −1) with the last vertex row dropped.
/// Columns follow edge order; parallel edges give repeated columns and loops
/// give zero columns.
pub fn bond_system(g: &MultiGraph) -> Result<UnimodularSystem, SystemError> {
    if g.edge_count() == 0 || g.components().len() != 1 {
        return Err(SystemError::BadBondGraph);
    }
    let rows = g.vertex_count() - 1;
    let mut m = IntMatrix::zeros(rows, g.edge_count());
    for (j, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        if e.head < rows {
            m.set(e.head, j, BigInt::from(1));
        }
        if e.tail < rows {
            m.set(e.tail, j, BigInt::from(-1));
        }
    }
    UnimodularSystem::with_repeats(m)
}

/// A lattice basis of the integer kernel of `S`, as rows. Its column matroid is
/// the dual of the column matroid of `S`.
pub fn dual_representation(s: &UnimodularSystem) -> IntMatrix {
    let (h, u) = hnf(&s.matrix().transpose());
    let keep: Vec<usize> = (0..h.rows())
        .filter(|&r| h.row(r).iter().all(Zero::is_zero))
        .collect();
    u.select_rows(&keep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CographicOptions {
    /// Upper bound on candidate graphs examined before giving up.
    pub max_graphs: u64,
}

impl Default for CographicOptions {
    fn default() -> Self {
        Self {
            max_graphs: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CographicVerdict {
    Cographic,
    NotCographic,
}

/// A graph whose cycle space carries the system: column `k` is the functional
/// of edge `column_edges[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CographicWitness {
    pub graph: MultiGraph,
    pub column_edges: Vec<String>,
}

impl Serialize for CographicWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let g = &self.graph;
        let edges: Vec<[&str; 3]> = g
            .edges()
            .iter()
            .map(|e| [e.label.as_str(), g.vertices()[e.tail].as_str(), g.vertices()[e.head].as_str()])
            .collect();
        let mut st = s.serialize_struct("CographicWitness", 3)?;
        st.serialize_field("vertices", g.vertices())?;
        st.serialize_field("edges", &edges)?;
        st.serialize_field("column_edges", &self.column_edges)?;
        st.end()
    }
}

/// Candidate graphs examined for one component shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeCount {
    /// `(vertices, edges)` per component.
    pub components: Vec<(usize, usize)>,
    pub graphs: u64,
    pub passed_invariants: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub elements: usize,
    /// Rank of the dual matroid, i.e. `V − c` of every candidate graph.
    pub dual_rank: usize,
    /// Columns that are coloops of `S`; they become loops of the witness.
    pub loops: usize,
    pub catalog_size: usize,
    pub shapes: Vec<ShapeCount>,
    pub graphs_tried: u64,
    pub passed_invariants: u64,
    pub max_graphs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CographicCertificate {
    pub verdict: CographicVerdict,
    pub graph_witness: Option<CographicWitness>,
    pub search_report: SearchReport,
}

impl CographicCertificate {
    pub fn is_cographic(&self) -> bool {
        self.verdict == CographicVerdict::Cographic
    }
}

/// Decides whether `S` is a cographic system.
///
/// Candidates are loopless multigraphs split into components with
/// `V_i ≤ r + 1` vertices each, where `r` is the dual rank; every shape of
/// component sizes and edge counts is visited in a fixed order.
pub fn is_cographic(s: &UnimodularSystem, opts: &CographicOptions) -> Result<CographicCertificate, SystemError> {
    let tu = s.is_totally_unimodular();
    if let Some(minor) = tu.violating_minor {
        return Err(SystemError::NotTotallyUnimodular { det: minor.det });
    }
    if s.len() > MAX_ELEMENTS {
        return Err(SystemError::TooLarge(s.len()));
    }
    let dual = dual_representation(s);
    let dual_rank = dual.rows();
    let (loop_cols, live): (Vec<usize>, Vec<usize>) =
        (0..s.len()).partition(|&j| dual.column(j).iter().all(Zero::is_zero));
    let target = ColumnMatroid::from_matrix(&dual.select_columns(&live))?;

    let catalog = if live.is_empty() {
        Arc::new(Catalog::default())
    } else {
        loopless_catalog(dual_rank + 1, live.len())
    };
    let mut report = SearchReport {
        elements: s.len(),
        dual_rank,
        loops: loop_cols.len(),
        catalog_size: (1..=dual_rank + 1)
            .flat_map(|v| (0..=live.len()).map(move |e| (v, e)))
            .map(|(v, e)| catalog.get(v, e).len())
            .sum(),
        shapes: Vec::new(),
        graphs_tried: 0,
        passed_invariants: 0,
        max_graphs: opts.max_graphs,
    };

    let mut found: Option<(SmallGraph, Vec<usize>)> = None;
    let mut cap_hit = false;
    'shapes: for parts in partitions(dual_rank) {
        for split in edge_splits(&parts, live.len()) {
            let components: Vec<(usize, usize)> = parts.iter().map(|&p| p + 1).zip(split.iter().copied()).collect();
            let mut shape = ShapeCount {
                components: components.clone(),
                graphs: 0,
                passed_invariants: 0,
            };
            let outcome = for_each_union(&catalog, &components, &mut |g| {
                if report.graphs_tried >= opts.max_graphs {
                    cap_hit = true;
                    return ControlFlow::Break(None);
                }
                report.graphs_tried += 1;
                shape.graphs += 1;
                let candidate = graphic_matroid(g);
                if !target.invariants_match(&candidate) {
                    return ControlFlow::Continue(());
                }
                report.passed_invariants += 1;
                shape.passed_invariants += 1;
                match target.find_isomorphism(&candidate) {
                    Some(phi) => ControlFlow::Break(Some((g.clone(), phi))),
                    None => ControlFlow::Continue(()),
                }
            });
            report.shapes.push(shape);
            if let ControlFlow::Break(hit) = outcome {
                found = hit;
                break 'shapes;
            }
        }
    }
    if cap_hit {
        return Err(SystemError::SearchCapExceeded {
            cap: opts.max_graphs as usize,
        });
    }

    let Some((graph, phi)) = found else {
        return Ok(CographicCertificate {
            verdict: CographicVerdict::NotCographic,
            graph_witness: None,
            search_report: report,
        });
    };
    let witness = build_witness(s.len(), &graph, &live, &phi);
    verify_witness(s, &witness)?;
    Ok(CographicCertificate {
        verdict: CographicVerdict::Cographic,
        graph_witness: Some(witness),
        search_report: report,
    })
}

/// Catalogs only grow: one covering the largest bounds requested so far is
/// kept and reused, since its `(v, e)` entries do not depend on the bounds.
fn loopless_catalog(max_vertices: usize, max_edges: usize) -> Arc<Catalog> {
    static CACHE: OnceLock<Mutex<Option<(usize, usize, Arc<Catalog>)>>> = OnceLock::new();
    let mut slot = CACHE.get_or_init(|| Mutex::new(None)).lock().expect("catalog cache lock");
    if let Some((v, e, cat)) = slot.as_ref() {
        if *v >= max_vertices && *e >= max_edges {
            return Arc::clone(cat);
        }
    }
    let (v, e) = slot
        .as_ref()
        .map_or((max_vertices, max_edges), |(v, e, _)| ((*v).max(max_vertices), (*e).max(max_edges)));
    let cat = Arc::new(connected_multigraphs(v, e, false));
    *slot = Some((v, e, Arc::clone(&cat)));
    cat
}

fn build_witness(m: usize, g: &SmallGraph, live: &[usize], phi: &[usize]) -> CographicWitness {
    let edges = g.edges();
    let mut graph = MultiGraph::new();
    for i in 0..g.vertex_count().max(1) {
        graph.add_vertex(&format!("v{}", i + 1)).expect("fresh vertex names");
    }
    let mut column_edges = Vec::with_capacity(m);
    for k in 0..m {
        let label = format!("c{}", k + 1);
        let (a, b) = match live.iter().position(|&j| j == k) {
            Some(pos) => edges[phi[pos]],
            None => (0, 0),
        };
        graph.add_edge_by_index(&label, a, b).expect("labels are distinct");
        column_edges.push(label);
    }
    CographicWitness { graph, column_edges }
}

/// The witness's edge functionals on its cycle space must have the same
/// column matroid as `S`, column for column.
fn verify_witness(s: &UnimodularSystem, w: &CographicWitness) -> Result<(), SystemError> {
    let basis = cycle_basis(&w.graph, None).map_err(|e| SystemError::Internal(e.to_string()))?;
    let functionals = basis.coefficient_matrix();
    if functionals.rows() != s.dim() {
        return Err(SystemError::Internal(format!(
            "witness cycle space has rank {}, expected {}",
            functionals.rows(),
            s.dim()
        )));
    }
    let a = ColumnMatroid::from_matrix(s.matrix())?;
    let b = ColumnMatroid::from_matrix(&functionals)?;
    let identity: Vec<usize> = (0..s.len()).collect();
    if a.invariants_match(&b) && a.is_isomorphism(&b, &identity) {
        Ok(())
    } else {
        Err(SystemError::Internal("witness matroid differs from the input".into()))
    }
}

/// Cycle matroid of a small graph: independent sets are forests.
fn graphic_matroid(g: &SmallGraph) -> ColumnMatroid {
    let edges = g.edges();
    let n = g.vertex_count();
    let rank = n - components(g);
    ColumnMatroid::from_rank_oracle(edges.len(), rank, |mask| {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (k, &(a, b)) in edges.iter().enumerate() {
            if mask >> k & 1 == 0 {
                continue;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    })
}

fn components(g: &SmallGraph) -> usize {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if g.multiplicity(v, w) > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Partitions of `r` into positive parts, nonincreasing, starting with `[r]`.
fn partitions(r: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, r, &mut Vec::new(), &mut out);
    out
}

/// Edge counts `e_i ≥ p_i` summing to `m`, nonincreasing across equal parts.
fn edge_splits(parts: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn go(parts: &[usize], k: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == parts.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let later: usize = parts[k + 1..].iter().sum();
        let mut hi = rest.saturating_sub(later);
        if k > 0 && parts[k] == parts[k - 1] {
            hi = hi.min(cur[k - 1]);
        }
        for e in (parts[k]..=hi).rev() {
            cur.push(e);
            go(parts, k + 1, rest - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts.is_empty() {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(parts, 0, m, &mut Vec::new(), &mut out);
    out
}

/// Visits disjoint unions with one catalog graph per component; repeated
/// component shapes take catalog indices in nondecreasing order.
fn for_each_union<B>(
    catalog: &Catalog,
    components: &[(usize, usize)],
    visit: &mut impl FnMut(&SmallGraph) -> ControlFlow<B>,
) -> ControlFlow<B> {
    fn go<B>(
        catalog: &Catalog,
        components: &[(usize, usize)],
        k: usize,
        picks: &mut Vec<usize>,
        visit: &mut impl FnMut(&SmallGraph) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if k == components.len() {
            let total: usize = components.iter().map(|c| c.0).sum();
            let mut g = SmallGraph::empty(total);
            let mut offset = 0;
            for (&(v, e), &i) in components.iter().zip(picks.iter()) {
                for (a, b) in catalog.get(v, e)[i].edges() {
                    g.add_edge(a + offset, b + offset);
                }
                offset += v;
            }
            return visit(&g);
        }
        let (v, e) = components[k];
        let start = if k > 0 && components[k - 1] == components[k] {
            picks[k - 1]
        } else {
            0
        };
        for i in start..catalog.get(v, e).len() {
            picks.push(i);
            go(catalog, components, k + 1, picks, visit)?;
            picks.pop();
        }
        ControlFlow::Continue(())
    }
    go(catalog, components, 0, &mut Vec::new(), visit)
}
