//! Prym degeneration data of a graph with involution: the anti-invariant
//! lattice `X⁻`, the edge multipliers, the dicing system they define and the
//! admissibility test on invariant subgraphs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmat::{row_lattice_basis, IntMatrix, RationalMatrix};
use crate::graph::{CochainVector, GraphError, GraphInvolution, MultiGraph};
use crate::homology::{cycle_basis, HomologyError};
use crate::unimod::{DicingSystem, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrymError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("chain has non-integer coefficients")]
    NotIntegral,
    #[error("involution acts on {found_vertices} vertices and {found_edges} edges, graph has {vertices} and {edges}")]
    InvolutionMismatch {
        vertices: usize,
        edges: usize,
        found_vertices: usize,
        found_edges: usize,
    },
    #[error("edge {edge}: image of the coordinate is ({gcd}/2)Z, not Z or Z/2")]
    Multiplier { edge: String, gcd: BigInt },
    #[error("anti-invariant lattice has rank 0; there is nothing to dice")]
    ZeroRank,
}

fn check_involution(g: &MultiGraph, iota: &GraphInvolution) -> Result<(), PrymError> {
    if iota.vertex_map().len() != g.vertex_count() || iota.edge_map().len() != g.edge_count() {
        return Err(PrymError::InvolutionMismatch {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            found_vertices: iota.vertex_map().len(),
            found_edges: iota.edge_map().len(),
        });
    }
    Ok(())
}

/// `½(h − ι·h)` for an integral chain `h`.
pub fn pi_minus(iota: &GraphInvolution, h: &CochainVector) -> Result<CochainVector, PrymError> {
    if !h.is_integral() {
        return Err(PrymError::NotIntegral);
    }
    let image = iota.apply(h)?;
    let doubled = h
        .doubled()
        .iter()
        .zip(image.doubled())
        .map(|(a, b)| (a - b) / 2)
        .collect();
    Ok(CochainVector::from_doubled(doubled))
}

/// A lattice in `(½ℤ)^E`, rows of `basis` in Hermite form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfLattice {
    pub ambient_edges: Vec<String>,
    pub basis: RationalMatrix,
}

impl HalfLattice {
    /// Lattice spanned by the given vectors, each stored doubled.
    pub fn from_doubled_generators(ambient_edges: Vec<String>, generators: &IntMatrix) -> Self {
        let basis = if generators.rows() == 0 {
            IntMatrix::zeros(0, ambient_edges.len())
        } else {
            row_lattice_basis(generators)
        };
        Self {
            ambient_edges,
            basis: RationalMatrix::halve(basis),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Basis rows multiplied by two.
    pub fn doubled(&self) -> IntMatrix {
        self.basis.doubled()
    }

    pub fn vectors(&self) -> Vec<CochainVector> {
        let d = self.doubled();
        (0..d.rows())
            .map(|r| {
                CochainVector::from_doubled(
                    d.row(r)
                        .iter()
                        .map(|x| x.to_i64().expect("graph coordinates fit in i64"))
                        .collect(),
                )
            })
            .collect()
    }
}

/// `X⁻ = π⁻(H₁(Γ, ℤ))`, generated by `π⁻` of the fundamental cycles of the
/// default spanning forest.
pub fn x_minus(g: &MultiGraph, iota: &GraphInvolution) -> Result<HalfLattice, PrymError> {
    x_minus_with_tree(g, iota, None)
}

pub fn x_minus_with_tree(g: &MultiGraph, iota: &GraphInvolution, tree: Option<&[String]>) -> Result<HalfLattice, PrymError> {
    check_involution(g, iota)?;
    let cycles = cycle_basis(g, tree)?;
    x_minus_from_cycles(g, iota, &cycles.basis)
}

/// The lattice generated by `π⁻` of the given integral chains.
pub fn x_minus_from_cycles(g: &MultiGraph, iota: &GraphInvolution, cycles: &[CochainVector]) -> Result<HalfLattice, PrymError> {
    check_involution(g, iota)?;
    let rows = cycles
        .iter()
        .map(|h| pi_minus(iota, h).map(|v| v.doubled().to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    let generators = if rows.is_empty() {
        IntMatrix::zeros(0, g.edge_count())
    } else {
        IntMatrix::from_rows(&rows)
    };
    Ok(HalfLattice::from_doubled_generators(g.edge_labels(), &generators))
}

/// Torus rank of the degenerate Prym: `rank X⁻`.
pub fn torus_rank(g: &MultiGraph, iota: &GraphInvolution) -> Result<usize, PrymError> {
    Ok(x_minus(g, iota)?.rank())
}

/// `m_j ∈ {0, 1, 2}` per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplierVector {
    pub edges: Vec<String>,
    pub values: Vec<u8>,
}

impl MultiplierVector {
    pub fn get(&self, j: usize) -> u8 {
        self.values[j]
    }

    /// Edges whose coordinate vanishes on the lattice.
    pub fn vanishing(&self) -> Vec<String> {
        self.edges
            .iter()
            .zip(&self.values)
            .filter(|(_, &m)| m == 0)
            .map(|(e, _)| e.clone())
            .collect()
    }
}

/// The image of `z_j` on `X` is `(g/2)ℤ` with `g` the gcd of column `j` of
/// the doubled basis: `g = 1` gives `m_j = 2`, `g = 2` gives `m_j = 1`,
/// `g = 0` gives `m_j = 0`.
pub fn multipliers(x: &HalfLattice) -> Result<MultiplierVector, PrymError> {
    let d = x.doubled();
    let values = (0..d.cols())
        .map(|j| {
            let g = d.column(j).iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            match g.to_u8() {
                Some(0) => Ok(0),
                Some(1) => Ok(2),
                Some(2) => Ok(1),
                _ => Err(PrymError::Multiplier {
                    edge: x.ambient_edges[j].clone(),
                    gcd: g,
                }),
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(MultiplierVector {
        edges: x.ambient_edges.clone(),
        values,
    })
}

/// Everything computed on the way to the dicing system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrymDicing {
    pub lattice: HalfLattice,
    pub multipliers: MultiplierVector,
    pub dicing: DicingSystem,
    pub vologodsky: VologodskyReport,
    /// Set when the admissibility test fails: the cell decomposition may then
    /// depend on the family and not only on the special fibre.
    pub family_dependent: bool,
}

/// Column `j` is `m_j·z_j` on the Hermite basis of `X⁻`; zero columns are
/// dropped and columns equal up to sign merged.
pub fn prym_dicing_system(g: &MultiGraph, iota: &GraphInvolution) -> Result<PrymDicing, PrymError> {
    let lattice = x_minus(g, iota)?;
    prym_dicing_from_lattice(g, iota, lattice)
}

pub fn prym_dicing_from_lattice(g: &MultiGraph, iota: &GraphInvolution, lattice: HalfLattice) -> Result<PrymDicing, PrymError> {
    if lattice.rank() == 0 {
        return Err(PrymError::ZeroRank);
    }
    let mult = multipliers(&lattice)?;
    let full = functional_matrix(&lattice, &mult);
    let dicing = DicingSystem::from_full_matrix(full, lattice.ambient_edges.clone())?;
    let vologodsky = vologodsky_check(g, iota)?;
    Ok(PrymDicing {
        family_dependent: !vologodsky.passes(),
        lattice,
        multipliers: mult,
        dicing,
        vologodsky,
    })
}

/// `m_j·z_j(b_i)` for every basis row `b_i` and edge `j`, before any merging.
pub fn functional_matrix(x: &HalfLattice, mult: &MultiplierVector) -> IntMatrix {
    let d = x.doubled();
    let mut out = IntMatrix::zeros(d.rows(), d.cols());
    for r in 0..d.rows() {
        for c in 0..d.cols() {
            out.set(r, c, d.get(r, c) * BigInt::from(mult.get(c)) / 2);
        }
    }
    out
}

/// Two disjoint connected invariant vertex sets joined by at least four edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VologodskyWitness {
    pub subgraph_0: Vec<String>,
    pub subgraph_1: Vec<String>,
    pub connecting_edges: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Admissibility {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VologodskyReport {
    pub verdict: Admissibility,
    pub witness: Option<VologodskyWitness>,
    /// Number of connected invariant vertex sets examined.
    pub invariant_subgraphs: usize,
}

impl VologodskyReport {
    pub fn passes(&self) -> bool {
        self.verdict == Admissibility::Pass
    }
}

/// Largest number of vertex orbits the subset search accepts.
pub const MAX_ORBITS: usize = 24;

/// Searches unions of vertex orbits (the invariant vertex sets) whose induced
/// subgraphs are connected, for a disjoint pair joined by four or more edges.
/// Pairs are tried in increasing order of their orbit bitmasks, so the
/// witness is the first one in that order.
pub fn vologodsky_check(g: &MultiGraph, iota: &GraphInvolution) -> Result<VologodskyReport, PrymError> {
    check_involution(g, iota)?;
    let orbits = iota.vertex_orbits();
    let k = orbits.len();
    if k > MAX_ORBITS {
        return Err(PrymError::System(SystemError::TooLarge(k)));
    }
    let mut orbit_of = vec![0usize; g.vertex_count()];
    for (o, members) in orbits.iter().enumerate() {
        for &v in members {
            orbit_of[v] = o;
        }
    }
    let mut between = vec![vec![0usize; k]; k];
    for e in g.edges() {
        let (a, b) = (orbit_of[e.tail], orbit_of[e.head]);
        if a != b {
            between[a][b] += 1;
            between[b][a] += 1;
        }
    }
    let connected: Vec<u32> = (1..1u32 << k)
        .filter(|&mask| induced_connected(g, &orbit_of, mask))
        .collect();
    let crossing = |s: u32, t: u32| -> usize {
        let mut n = 0;
        for a in (0..k).filter(|&a| s >> a & 1 == 1) {
            for b in (0..k).filter(|&b| t >> b & 1 == 1) {
                n += between[a][b];
            }
        }
        n
    };
    for (i, &s) in connected.iter().enumerate() {
        for &t in &connected[i + 1..] {
            if s & t != 0 || crossing(s, t) < 4 {
                continue;
            }
            let names = |mask: u32| -> Vec<String> {
                (0..g.vertex_count())
                    .filter(|&v| mask >> orbit_of[v] & 1 == 1)
                    .map(|v| g.vertices()[v].clone())
                    .collect()
            };
            let inside = |v: usize, mask: u32| mask >> orbit_of[v] & 1 == 1;
            let connecting_edges = g
                .edges()
                .iter()
                .filter(|e| (inside(e.tail, s) && inside(e.head, t)) || (inside(e.tail, t) && inside(e.head, s)))
                .map(|e| e.label.clone())
                .collect();
            return Ok(VologodskyReport {
                verdict: Admissibility::Fail,
                witness: Some(VologodskyWitness {
                    subgraph_0: names(s),
                    subgraph_1: names(t),
                    connecting_edges,
                }),
                invariant_subgraphs: connected.len(),
            });
        }
    }
    Ok(VologodskyReport {
        verdict: Admissibility::Pass,
        witness: None,
        invariant_subgraphs: connected.len(),
    })
}

fn induced_connected(g: &MultiGraph, orbit_of: &[usize], mask: u32) -> bool {
    let inside: Vec<usize> = (0..g.vertex_count()).filter(|&v| mask >> orbit_of[v] & 1 == 1).collect();
    let Some(&start) = inside.first() else {
        return false;
    };
    let mut seen = vec![false; g.vertex_count()];
    seen[start] = true;
    let mut stack = vec![start];
    let adj = g.adjacency();
    while let Some(v) = stack.pop() {
        for &(w, _) in &adj[v] {
            if !seen[w] && mask >> orbit_of[w] & 1 == 1 {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    inside.iter().all(|&v| seen[v])
}

/// Checks `ι(v) = −v` on every basis vector.
pub fn is_anti_invariant(iota: &GraphInvolution, x: &HalfLattice) -> Result<bool, PrymError> {
    for v in x.vectors() {
        if iota.apply(&v)? != -&v {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::unimod::UnimodularSystem;

    fn load(text: &str) -> (MultiGraph, GraphInvolution) {
        let (g, iota) = parse_graph(text).unwrap();
        let iota = iota.unwrap_or_else(|| GraphInvolution::identity(&g));
        (g, iota)
    }

    const SWAPPED_LOOPS: &str = "vertex v\nedge l1 v v\nedge l2 v v\niota_e l1 l2 +\n";
    const DOUBLE_BANANA: &str = "vertex u\nvertex v\nedge e1 u v\nedge e2 u v\nedge f1 v u\nedge f2 v u\n\
                                 iota_v u v\niota_e e1 f1\niota_e e2 f2\n";

    #[test]
    fn invariant_cycle_maps_to_zero() {
        let (g, iota) = load(DOUBLE_BANANA);
        let h = CochainVector::from_terms(&g, &[("e1", 1), ("f1", 1)]).unwrap();
        assert!(pi_minus(&iota, &h).unwrap().is_zero());
    }

    #[test]
    fn anti_invariant_chain_is_fixed() {
        let (g, iota) = load(SWAPPED_LOOPS);
        let h = CochainVector::from_terms(&g, &[("l1", 1), ("l2", -1)]).unwrap();
        assert_eq!(pi_minus(&iota, &h).unwrap(), h);
    }

    #[test]
    fn half_integral_input_rejected() {
        let (_, iota) = load(SWAPPED_LOOPS);
        assert_eq!(
            pi_minus(&iota, &CochainVector::from_doubled(vec![1, 0])),
            Err(PrymError::NotIntegral)
        );
    }

    #[test]
    fn trivial_involution_gives_zero_lattice() {
        let (g, _) = load("vertex a\nvertex b\nedge x a b\nedge y a b\nedge z b a\n");
        let iota = GraphInvolution::identity(&g);
        let x = x_minus(&g, &iota).unwrap();
        assert_eq!(x.rank(), 0);
        assert_eq!(torus_rank(&g, &iota).unwrap(), 0);
        assert!(multipliers(&x).unwrap().values.iter().all(|&m| m == 0));
        assert_eq!(prym_dicing_system(&g, &iota), Err(PrymError::ZeroRank));
    }

    #[test]
    fn swapped_loops() {
        let (g, iota) = load(SWAPPED_LOOPS);
        let x = x_minus(&g, &iota).unwrap();
        assert_eq!(x.rank(), 1);
        assert_eq!(x.doubled(), IntMatrix::from_rows(&[[1, -1]]));
        let p = prym_dicing_system(&g, &iota).unwrap();
        assert_eq!(p.multipliers.values, vec![2, 2]);
        assert_eq!(p.dicing.system, UnimodularSystem::new(IntMatrix::from_rows(&[[1]])).unwrap());
    }

    #[test]
    fn double_banana_gives_the_unit_system() {
        let (g, iota) = load(DOUBLE_BANANA);
        let p = prym_dicing_system(&g, &iota).unwrap();
        assert_eq!(p.lattice.rank(), 1);
        assert_eq!(p.dicing.system.matrix(), &IntMatrix::from_rows(&[[1]]));
        assert_eq!(p.dicing.merged.len(), 3);
        assert!(p.vologodsky.passes());
    }

    #[test]
    fn full_integer_lattice_has_unit_multipliers() {
        let x = HalfLattice::from_doubled_generators(vec!["a".into(), "b".into()], &IntMatrix::from_rows(&[[2, 0], [0, 2]]));
        assert_eq!(multipliers(&x).unwrap().values, vec![1, 1]);
    }

    #[test]
    fn odd_gcd_above_one_is_an_error() {
        let x = HalfLattice::from_doubled_generators(vec!["a".into()], &IntMatrix::from_rows(&[[3]]));
        assert!(matches!(multipliers(&x), Err(PrymError::Multiplier { .. })));
    }

    #[test]
    fn two_invariant_triangles_fail() {
        let text = "vertex x\nvertex y\nvertex z\nvertex p\nvertex q\nvertex r\n\
                    edge xy x y\nedge xz x z\nedge yz y z\n\
                    edge pq p q\nedge pr p r\nedge qr q r\n\
                    edge c1 x p\nedge c2 x p\nedge c3 y q\nedge c4 z r\n\
                    iota_v y z\niota_v q r\n\
                    iota_e xy xz\niota_e pq pr\niota_e c3 c4\n\
                    iota_e yz yz\niota_e qr qr\n";
        let (g, iota) = load(text);
        let rep = vologodsky_check(&g, &iota).unwrap();
        assert_eq!(rep.verdict, Admissibility::Fail);
        let w = rep.witness.unwrap();
        // {x} against everything else comes first in orbit-mask order
        assert_eq!(w.subgraph_0, vec!["x"]);
        assert_eq!(w.subgraph_1, vec!["y", "z", "p", "q", "r"]);
        assert_eq!(w.connecting_edges, vec!["xy", "xz", "c1", "c2"]);
    }

    #[test]
    fn few_edges_always_pass() {
        let (g, iota) = load(DOUBLE_BANANA);
        let small = MultiGraph::from_parts(&["u", "v"], &[("e1", "u", "v"), ("f1", "v", "u")]).unwrap();
        let iota_small = GraphInvolution::from_swaps(&small, &[("u", "v")], &[("e1", "f1")]).unwrap();
        assert!(vologodsky_check(&small, &iota_small).unwrap().passes());
        assert!(vologodsky_check(&g, &iota).unwrap().passes());
    }

    #[test]
    fn lattice_is_anti_invariant() {
        let (g, iota) = load(DOUBLE_BANANA);
        let x = x_minus(&g, &iota).unwrap();
        assert!(is_anti_invariant(&iota, &x).unwrap());
    }
}
