//! Equivalence of systems under a change of lattice basis (`U ∈ GL_n(ℤ)`)
//! combined with a signed relabelling of the vectors.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matroid::ColumnMatroid;
use super::{SystemError, UnimodularSystem};
use crate::exactmat::{det, inverse_rational, IntMatrix};

/// Where column `j` of `A` goes: `U·A_j = sign·B_target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignedTarget {
    pub target: usize,
    pub sign: i8,
}

/// A witness `U·A·σ = B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub u: IntMatrix,
    pub columns: Vec<SignedTarget>,
}

impl Equivalence {
    /// The signed permutation matrix `σ` with `(A·σ)_k = sign_j·A_j` for `j ↦ k`.
    pub fn sigma_matrix(&self) -> IntMatrix {
        let m = self.columns.len();
        let mut p = IntMatrix::zeros(m, m);
        for (j, t) in self.columns.iter().enumerate() {
            p.set(j, t.target, BigInt::from(t.sign));
        }
        p
    }

    /// Re-checks the witness by direct multiplication.
    pub fn verify(&self, a: &UnimodularSystem, b: &UnimodularSystem) -> bool {
        let Ok(d) = det(&self.u) else { return false };
        if d.abs() != BigInt::one() {
            return false;
        }
        let mut seen = vec![false; b.len()];
        for t in &self.columns {
            if t.target >= seen.len() || seen[t.target] || !matches!(t.sign, 1 | -1) {
                return false;
            }
            seen[t.target] = true;
        }
        let lhs = self
            .u
            .mul(a.matrix())
            .and_then(|ua| ua.mul(&self.sigma_matrix()));
        lhs.is_ok_and(|m| &m == b.matrix())
    }

    /// The inverse witness `U⁻¹·B·σ⁻¹ = A`.
    pub fn inverse(&self) -> Option<Equivalence> {
        let inv = inverse_rational(&self.u)?;
        let u = to_integer_matrix(&inv)?;
        let mut columns = vec![SignedTarget { target: 0, sign: 1 }; self.columns.len()];
        for (j, t) in self.columns.iter().enumerate() {
            columns[t.target] = SignedTarget {
                target: j,
                sign: t.sign,
            };
        }
        Some(Equivalence { u, columns })
    }

    /// `other ∘ self`: a witness from `A` to `C` given `A ≡ B` and `B ≡ C`.
    pub fn then(&self, other: &Equivalence) -> Option<Equivalence> {
        let u = other.u.mul(&self.u).ok()?;
        let columns = self
            .columns
            .iter()
            .map(|t| {
                let next = other.columns[t.target];
                SignedTarget {
                    target: next.target,
                    sign: t.sign * next.sign,
                }
            })
            .collect();
        Some(Equivalence { u, columns })
    }
}

fn to_integer_matrix(m: &[Vec<BigRational>]) -> Option<IntMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let entries = m
        .iter()
        .flatten()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect::<Option<Vec<_>>>()?;
    IntMatrix::new(rows, cols, entries).ok()
}

fn rat_mul(a: &[Vec<BigRational>], b: &IntMatrix) -> Vec<Vec<BigRational>> {
    a.iter()
        .map(|row| {
            (0..b.cols())
                .map(|c| {
                    row.iter()
                        .enumerate()
                        .fold(BigRational::zero(), |acc, (k, x)| {
                            acc + x * BigRational::from_integer(b.get(k, c).clone())
                        })
                })
                .collect()
        })
        .collect()
}

/// First column basis in lexicographic (greedy) order.
fn greedy_basis(m: &ColumnMatroid) -> Vec<usize> {
    let mut basis = Vec::new();
    let mut mask = 0u32;
    for e in 0..m.size() {
        if m.is_independent(mask | 1 << e) {
            mask |= 1 << e;
            basis.push(e);
        }
    }
    basis
}

/// Finds `U ∈ GL_n(ℤ)` and a signed column bijection `σ` with `U·A·σ = B`.
///
/// Every lattice equivalence induces an isomorphism of column matroids, so
/// the search walks those isomorphisms; for each one the column signs are
/// forced up to independent flips of connected blocks, and `U` is recovered
/// from a column basis and checked for integrality.
pub fn systems_equivalent(a: &UnimodularSystem, b: &UnimodularSystem) -> Result<Option<Equivalence>, SystemError> {
    if a.dim() != b.dim() {
        return Err(SystemError::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.len() != b.len() {
        return Ok(None);
    }
    let ma = ColumnMatroid::from_matrix(a.matrix())?;
    let mb = ColumnMatroid::from_matrix(b.matrix())?;
    if !ma.invariants_match(&mb) {
        return Ok(None);
    }
    let beta = greedy_basis(&ma);
    let a_beta_inv = inverse_rational(&a.matrix().select_columns(&beta)).expect("basis columns are invertible");
    // R = A_β⁻¹·A: coordinates of every column of A in the basis β.
    let r = rat_mul(&a_beta_inv, a.matrix());

    let try_map = |phi: &[usize]| -> Option<Equivalence> {
        let gamma: Vec<usize> = beta.iter().map(|&e| phi[e]).collect();
        let b_gamma = b.matrix().select_columns(&gamma);
        let b_gamma_inv = inverse_rational(&b_gamma)?;
        let c = rat_mul(&b_gamma_inv, b.matrix());
        solve_signs(&r, &c, phi, &beta).into_iter().find_map(|signs| {
            // U = B_γ · diag(signs on β) · A_β⁻¹
            let mut scaled = b_gamma.clone();
            for (i, &e) in beta.iter().enumerate() {
                if signs[e] < 0 {
                    for row in 0..scaled.rows() {
                        let v = -scaled.get(row, i);
                        scaled.set(row, i, v);
                    }
                }
            }
            let u = to_integer_matrix(&rat_mul_left(&scaled, &a_beta_inv))?;
            let eq = Equivalence {
                u,
                columns: phi
                    .iter()
                    .zip(&signs)
                    .map(|(&target, &sign)| SignedTarget { target, sign })
                    .collect(),
            };
            eq.verify(a, b).then_some(eq)
        })
    };

    let identity: Vec<usize> = (0..ma.size()).collect();
    if ma.is_isomorphism(&mb, &identity) {
        if let Some(eq) = try_map(&identity) {
            return Ok(Some(eq));
        }
    }
    Ok(ma.for_each_isomorphism(&mb, |phi| match try_map(phi) {
        Some(eq) => ControlFlow::Break(eq),
        None => ControlFlow::Continue(()),
    }))
}

fn rat_mul_left(a: &IntMatrix, b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    (0..a.rows())
        .map(|r| {
            (0..b.first().map_or(0, Vec::len))
                .map(|c| {
                    (0..a.cols()).fold(BigRational::zero(), |acc, k| {
                        acc + BigRational::from_integer(a.get(r, k).clone()) * &b[k][c]
                    })
                })
                .collect()
        })
        .collect()
}

/// All sign vectors `s` (one per column of `A`) with
/// `s_{β_i}·R_{ij} = s_j·C_{i,φ(j)}` for every row `i` and column `j`.
fn solve_signs(r: &[Vec<BigRational>], c: &[Vec<BigRational>], phi: &[usize], beta: &[usize]) -> Vec<Vec<i8>> {
    let n = r.len();
    let m = phi.len();
    // Nodes 0..m are columns; row i is tied to column β_i.
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); m];
    for (i, &bi) in beta.iter().enumerate().take(n) {
        for j in 0..m {
            let (x, y) = (&r[i][j], &c[i][phi[j]]);
            match (x.is_zero(), y.is_zero()) {
                (true, true) => continue,
                (false, false) if x == y || *x == -y => {
                    let rel = if x == y { 1 } else { -1 };
                    adj[bi].push((j, rel));
                    adj[j].push((bi, rel));
                }
                _ => return Vec::new(),
            }
        }
    }
    // Two-colour each component; remember one root per component.
    let mut sign = vec![0i8; m];
    let mut roots = Vec::new();
    for start in 0..m {
        if sign[start] != 0 {
            continue;
        }
        roots.push(start);
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, rel) in &adj[v] {
                let want = sign[v] * rel;
                if sign[w] == 0 {
                    sign[w] = want;
                    queue.push_back(w);
                } else if sign[w] != want {
                    return Vec::new();
                }
            }
        }
    }
    let mut component = vec![0usize; m];
    for (k, &root) in roots.iter().enumerate() {
        let mut queue = VecDeque::from([root]);
        let mut seen = vec![false; m];
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            component[v] = k;
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    // The first component's orientation only flips U globally; keep it fixed.
    let free = roots.len().saturating_sub(1).min(16);
    (0..1u32 << free)
        .map(|flips| {
            (0..m)
                .map(|v| {
                    let k = component[v];
                    if k > 0 && k <= free && flips >> (k - 1) & 1 == 1 {
                        -sign[v]
                    } else {
                        sign[v]
                    }
                })
                .collect()
        })
        .collect()
}
