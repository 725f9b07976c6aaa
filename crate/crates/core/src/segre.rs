//! The double cover of the pentagon dual graph arising from the Segre cubic
//! threefold, its hand-computed cycle data, and the end-to-end computation
//! showing that its Prym dicing is E₅.

use serde::Serialize;
use thiserror::Error;

use crate::exactmat::{rank, IntMatrix, RationalMatrix};
use crate::graph::{quotient, CochainVector, GraphInvolution, MultiGraph};
use crate::homology::cycle_basis;
use crate::prym::{
    functional_matrix, multipliers, pi_minus, prym_dicing_from_lattice, x_minus_from_cycles, x_minus_with_tree,
    HalfLattice, PrymError, VologodskyReport,
};
use crate::unimod::{
    e5, is_cographic, systems_equivalent, CographicCertificate, CographicOptions, Equivalence, SystemError,
    UnimodularSystem,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegreError {
    #[error("{stage}: {source}")]
    Prym {
        stage: &'static str,
        #[source]
        source: PrymError,
    },
    #[error("{stage}: {source}")]
    System {
        stage: &'static str,
        #[source]
        source: SystemError,
    },
    #[error("{vector}: {detail}")]
    Validation { vector: String, detail: String },
}

fn invalid(vector: impl Into<String>, detail: impl Into<String>) -> SegreError {
    SegreError::Validation {
        vector: vector.into(),
        detail: detail.into(),
    }
}

const VERTICES: [&str; 10] = ["a1", "a2", "a3", "a4", "a5", "b1", "b2", "b3", "b4", "b5"];

/// `e1 … e10`; the primed edge swaps `a` and `b` in both endpoints.
const EDGES: [(&str, &str, &str); 10] = [
    ("e1", "b3", "a2"),
    ("e2", "a4", "b2"),
    ("e3", "a5", "b3"),
    ("e4", "a5", "b4"),
    ("e5", "a5", "b1"),
    ("e6", "a4", "b3"),
    ("e7", "b3", "a1"),
    ("e8", "b2", "a5"),
    ("e9", "a1", "b4"),
    ("e10", "b2", "a1"),
];

pub const TREE: [&str; 9] = ["e6", "e7", "e8", "e9", "e10", "e10'", "e7'", "e9'", "e8'"];

/// The eleven cycles as printed, in order h1 … h9, h8', h9'.
pub const PRINTED_H: [(&str, &[(&str, i64)]); 11] = [
    ("h1", &[("e6'", 1), ("e7'", 1), ("e9'", -1), ("e6", 1), ("e7", 1), ("e9", -1)]),
    ("h2", &[("e1'", 1), ("e7'", 1), ("e9'", 1), ("e6", 1), ("e7", 1), ("e10", 1)]),
    ("h3", &[("e1", 1), ("e10'", -1), ("e9'", -1), ("e6", 1)]),
    ("h4", &[("e2", 1), ("e6", 1), ("e7", 1), ("e10", 1)]),
    ("h5", &[("e2'", 1), ("e10'", -1), ("e9'", -1), ("e6", 1), ("e7", 1), ("e9", -1)]),
    ("h6", &[("e5'", 1), ("e8'", -1), ("e10'", -1), ("e9'", -1), ("e6", 1), ("e7", 1)]),
    ("h7", &[("e5", 1), ("e9'", -1), ("e6", 1), ("e7", 1), ("e10", 1), ("e8", 1)]),
    ("h8", &[("e4", 1), ("e9", 1), ("e10", 1), ("e8", -1)]),
    ("h9", &[("e3", 1), ("e7", 1), ("e10", 1), ("e8", -1)]),
    ("h8'", &[("e4'", 1), ("e9'", 1), ("e10'", 1), ("e8'", -1)]),
    ("h9'", &[("e3'", 1), ("e7'", 1), ("e10'", 1), ("e8'", -1)]),
];

/// Each `ℓ_i` and the two cycles whose `π⁻` images it is given by.
pub const L_PAIRS: [(&str, &str, &str); 5] = [
    ("l1", "h2", "h3"),
    ("l2", "h4", "h5"),
    ("l3", "h9", "h9'"),
    ("l4", "h8", "h8'"),
    ("l5", "h6", "h7"),
];

#[derive(Debug, Clone)]
pub struct SegreFixture {
    pub cover: MultiGraph,
    pub involution: GraphInvolution,
    pub tree: Vec<String>,
    /// Named cycles in the order of [`PRINTED_H`].
    pub h_basis: Vec<(String, CochainVector)>,
    /// `ℓ_i = π⁻` of the first cycle of its pair.
    pub l_basis: Vec<(String, CochainVector)>,
}

impl SegreFixture {
    pub fn h(&self, name: &str) -> &CochainVector {
        &self.h_basis.iter().find(|(n, _)| n == name).expect("known cycle name").1
    }
}

fn primed(v: &str) -> String {
    match v.as_bytes()[0] {
        b'a' => format!("b{}", &v[1..]),
        _ => format!("a{}", &v[1..]),
    }
}

pub fn cover() -> MultiGraph {
    let mut edges: Vec<(String, String, String)> = EDGES
        .iter()
        .map(|&(l, t, h)| (l.to_string(), t.to_string(), h.to_string()))
        .collect();
    edges.extend(EDGES.iter().map(|&(l, t, h)| (format!("{l}'"), primed(t), primed(h))));
    MultiGraph::from_parts(&VERTICES, &edges).expect("fixture graph is well formed")
}

pub fn involution(g: &MultiGraph) -> GraphInvolution {
    let vertex_swaps: Vec<(String, String)> = (1..=5).map(|i| (format!("a{i}"), format!("b{i}"))).collect();
    let edge_swaps: Vec<(String, String)> = EDGES.iter().map(|&(l, _, _)| (l.to_string(), format!("{l}'"))).collect();
    GraphInvolution::from_swaps(g, &vertex_swaps, &edge_swaps).expect("fixture involution is valid")
}

/// The fixture, built and checked. The cycles are the fundamental cycles of
/// [`TREE`], matched to the printed names by their non-tree edge.
pub fn fixture() -> SegreFixture {
    let cover = cover();
    let involution = involution(&cover);
    let tree: Vec<String> = TREE.iter().map(|s| s.to_string()).collect();
    let basis = cycle_basis(&cover, Some(&tree)).expect("fixture tree spans the cover");
    let h_basis: Vec<(String, CochainVector)> = PRINTED_H
        .iter()
        .map(|(name, terms)| {
            let lead = cover.edge_id(terms[0].0).expect("printed edge exists");
            let pos = basis
                .non_tree_edges
                .iter()
                .position(|&e| e == lead)
                .expect("first printed term is the non-tree edge");
            (name.to_string(), basis.basis[pos].clone())
        })
        .collect();
    let mut f = SegreFixture {
        cover,
        involution,
        tree,
        h_basis,
        l_basis: Vec::new(),
    };
    f.l_basis = L_PAIRS
        .iter()
        .map(|(l, a, _)| (l.to_string(), pi_minus(&f.involution, f.h(a)).expect("cycles are integral")))
        .collect();
    assert!(f.involution.is_fixed_point_free(), "involution fixes a vertex or edge");
    assert_eq!(f.h_basis.len(), 11);
    f
}

/// One `ℓ_i = π⁻(h_a) = ε·π⁻(h_b)` identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub l: String,
    pub first: String,
    pub second: String,
    /// `ε ∈ {1, −1}` with `π⁻(h_first) = ε·π⁻(h_second)`.
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaperBasisReport {
    pub cycles: usize,
    pub rank: usize,
    /// Tree-edge coefficients whose printed sign differs from the cycle condition.
    pub printed_sign_differences: Vec<(String, String)>,
    pub identities: Vec<IdentityCheck>,
    pub l_rank: usize,
    pub lattice_matches_x_minus: bool,
}

/// Checks the fixture against the printed data. Failures name the vector and
/// the coordinate involved.
pub fn validate_paper_basis(f: &SegreFixture) -> Result<PaperBasisReport, SegreError> {
    let g = &f.cover;
    let mut printed_sign_differences = Vec::new();
    for ((name, h), (_, terms)) in f.h_basis.iter().zip(PRINTED_H.iter()) {
        if g.boundary(h).map_err(|e| invalid(name, e.to_string()))?.iter().any(|&b| b != 0) {
            return Err(invalid(name, "boundary is nonzero"));
        }
        let coeffs = h.integer_coefficients().ok_or_else(|| invalid(name, "not integral"))?;
        let support: Vec<String> = h.support().into_iter().map(|e| g.edge(e).label.clone()).collect();
        let mut printed: Vec<String> = terms.iter().map(|(e, _)| e.to_string()).collect();
        let mut ours = support.clone();
        printed.sort();
        ours.sort();
        if printed != ours {
            return Err(invalid(name, format!("support {ours:?} differs from printed {printed:?}")));
        }
        for (k, &(edge, c)) in terms.iter().enumerate() {
            let have = coeffs[g.edge_id(edge).expect("printed edge exists")];
            if k == 0 && have != c {
                return Err(invalid(name, format!("coefficient {have} on non-tree edge {edge}")));
            }
            if have != c {
                printed_sign_differences.push((name.clone(), edge.to_string()));
            }
        }
    }
    let rows: Vec<Vec<i64>> = f.h_basis.iter().map(|(_, h)| h.integer_coefficients().expect("integral")).collect();
    let h_rank = rank(&IntMatrix::from_rows(&rows));
    if h_rank != 11 {
        return Err(invalid("h-basis", format!("rank {h_rank}, expected 11")));
    }

    let mut identities = Vec::new();
    for ((l, a, b), (_, lvec)) in L_PAIRS.iter().zip(&f.l_basis) {
        let pa = pi_minus(&f.involution, f.h(a)).map_err(|e| invalid(*a, e.to_string()))?;
        let pb = pi_minus(&f.involution, f.h(b)).map_err(|e| invalid(*b, e.to_string()))?;
        if &pa != lvec {
            return Err(invalid(*l, format!("differs from pi_minus({a})")));
        }
        let sign = if pa == pb {
            1
        } else if pa == -&pb {
            -1
        } else {
            let j = (0..pa.len()).find(|&j| pa.doubled()[j].abs() != pb.doubled()[j].abs()).unwrap_or(0);
            return Err(invalid(*l, format!("pi_minus({a}) and pi_minus({b}) differ at {}", g.edge(j).label)));
        };
        identities.push(IdentityCheck {
            l: l.to_string(),
            first: a.to_string(),
            second: b.to_string(),
            sign,
        });
    }

    let l_rows: Vec<Vec<i64>> = f.l_basis.iter().map(|(_, v)| v.doubled().to_vec()).collect();
    let l_doubled = IntMatrix::from_rows(&l_rows);
    let l_rank = rank(&l_doubled);
    let l_lattice = HalfLattice::from_doubled_generators(g.edge_labels(), &l_doubled);
    let x = x_minus_with_tree(g, &f.involution, Some(&f.tree)).map_err(|e| SegreError::Prym {
        stage: "x_minus",
        source: e,
    })?;
    Ok(PaperBasisReport {
        cycles: f.h_basis.len(),
        rank: h_rank,
        printed_sign_differences,
        identities,
        l_rank,
        lattice_matches_x_minus: l_lattice.basis == x.basis,
    })
}

/// The matrix `a_ij = m_j·(ℓ_i)_j` over the edges `e1 … e10`.
pub fn l_matrix(f: &SegreFixture) -> IntMatrix {
    let rows: Vec<Vec<i64>> = f.l_basis.iter().map(|(_, v)| v.doubled().to_vec()).collect();
    let lattice = HalfLattice::from_doubled_generators(f.cover.edge_labels(), &IntMatrix::from_rows(&rows));
    let mult = multipliers(&lattice).expect("graph lattice has valid multipliers");
    let raw = HalfLattice {
        ambient_edges: lattice.ambient_edges,
        basis: RationalMatrix::halve(IntMatrix::from_rows(&rows)),
    };
    let full = functional_matrix(&raw, &mult);
    full.select_columns(&(0..10).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub vologodsky: VologodskyReport,
    pub torus_rank: usize,
    pub computed_system: UnimodularSystem,
    pub column_edges: Vec<String>,
    pub equivalent_to_e5: bool,
    pub transformation: Option<Equivalence>,
    pub transformation_verified: bool,
    pub e5_cographic: CographicCertificate,
    pub conclusion: String,
}

pub const CONCLUSION: &str = "non-cographic dicing obtained: system ≡ E5; E5 not cographic";

/// Runs the admissibility test, `X⁻`, the dicing system, the comparison with
/// E₅ and the cographic search on E₅.
pub fn reproduce_theorem(f: &SegreFixture, opts: &CographicOptions) -> Result<TheoremReport, SegreError> {
    let prym = |stage| move |source| SegreError::Prym { stage, source };
    let system = |stage| move |source| SegreError::System { stage, source };
    let cycles = cycle_basis(&f.cover, Some(&f.tree)).map_err(|e| prym("cycles")(e.into()))?;
    let lattice = x_minus_from_cycles(&f.cover, &f.involution, &cycles.basis).map_err(prym("x_minus"))?;
    let torus_rank = lattice.rank();
    let dicing = prym_dicing_from_lattice(&f.cover, &f.involution, lattice).map_err(prym("prym_dicing_system"))?;
    let computed = dicing.dicing.system.clone();
    let target = e5();
    let transformation = systems_equivalent(&computed, &target).map_err(system("systems_equivalent"))?;
    let transformation_verified = transformation.as_ref().is_some_and(|t| t.verify(&computed, &target));
    let e5_cographic = is_cographic(&target, opts).map_err(system("is_cographic"))?;
    let equivalent_to_e5 = transformation_verified;
    let conclusion = match (equivalent_to_e5, e5_cographic.is_cographic()) {
        (true, false) => CONCLUSION.to_string(),
        (true, true) => "no conclusion: system ≡ E5; E5 cographic".to_string(),
        (false, _) => "no conclusion: system ≢ E5".to_string(),
    };
    Ok(TheoremReport {
        vologodsky: dicing.vologodsky,
        torus_rank,
        computed_system: computed,
        column_edges: dicing.dicing.column_edges,
        equivalent_to_e5,
        transformation,
        transformation_verified,
        e5_cographic,
        conclusion,
    })
}

/// The base graph: vertex and edge orbits contracted.
pub fn base_graph(f: &SegreFixture) -> MultiGraph {
    quotient(&f.cover, &f.involution)
}
