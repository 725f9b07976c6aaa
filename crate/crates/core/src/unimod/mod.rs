//! Unimodular systems: total unimodularity, the constant system E₅, lattice
//! equivalence of systems, and cographic recognition with certificates.

mod cographic;
pub mod enumerate;
mod equiv;
pub mod matroid;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmat::{self, det_small, IntMatrix, MatrixError};

pub use cographic::{
    bond_system, dual_representation, is_cographic, CographicCertificate, CographicOptions,
    CographicVerdict, CographicWitness, SearchReport, ShapeCount,
};
pub use equiv::{systems_equivalent, Equivalence, SignedTarget};
pub use matroid::{matroid_equivalent, ColumnMatroid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("vectors span a rank-{rank} subspace of a {dim}-dimensional space")]
    NotSpanning { dim: usize, rank: usize },
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("columns {0} and {1} are equal up to sign")]
    RepeatedColumn(usize, usize),
    #[error("systems live in dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("system is not totally unimodular (minor det = {det})")]
    NotTotallyUnimodular { det: BigInt },
    #[error("graph must be connected with at least one edge")]
    BadBondGraph,
    #[error("cographic search exceeded its cap of {cap} candidate graphs")]
    SearchCapExceeded { cap: usize },
    #[error("matroid ground set of {0} elements is too large")]
    TooLarge(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A spanning system of integer vectors, stored as the columns of an `n×m` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnimodularSystem {
    matrix: IntMatrix,
    repeats_allowed: bool,
}

impl UnimodularSystem {
    /// Validates rank `n`, no zero columns and no two columns equal up to sign.
    pub fn new(matrix: IntMatrix) -> Result<Self, SystemError> {
        Self::check_rank(&matrix)?;
        let cols: Vec<Vec<BigInt>> = (0..matrix.cols()).map(|c| matrix.column(c)).collect();
        for (j, col) in cols.iter().enumerate() {
            if col.iter().all(Zero::is_zero) {
                return Err(SystemError::ZeroColumn(j));
            }
        }
        let keys: Vec<Vec<BigInt>> = cols.iter().map(|c| sign_normalized(c)).collect();
        for (i, j) in (0..keys.len()).tuple_combinations() {
            if keys[i] == keys[j] {
                return Err(SystemError::RepeatedColumn(i, j));
            }
        }
        Ok(Self {
            matrix,
            repeats_allowed: false,
        })
    }

    /// Like [`UnimodularSystem::new`] but keeps zero and repeated columns, as
    /// needed for full matroid ground sets (e.g. parallel edges of a bond system).
    pub fn with_repeats(matrix: IntMatrix) -> Result<Self, SystemError> {
        Self::check_rank(&matrix)?;
        Ok(Self {
            matrix,
            repeats_allowed: true,
        })
    }

    fn check_rank(matrix: &IntMatrix) -> Result<(), SystemError> {
        let rank = exactmat::rank(matrix);
        if rank != matrix.rows() {
            return Err(SystemError::NotSpanning {
                dim: matrix.rows(),
                rank,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn len(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.cols() == 0
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn repeats_allowed(&self) -> bool {
        self.repeats_allowed
    }

    pub fn is_totally_unimodular(&self) -> TuCertificate {
        is_totally_unimodular(&self.matrix)
    }
}

/// The column with its first nonzero entry made positive.
pub(crate) fn sign_normalized(col: &[BigInt]) -> Vec<BigInt> {
    match col.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => col.iter().map(|v| -v).collect(),
        _ => col.to_vec(),
    }
}

/// The rank-5 system E₅ on ten vectors, `[I₅ | A]`.
pub fn e5() -> UnimodularSystem {
    let m = IntMatrix::from_rows(&[
        [1, 0, 0, 0, 0, 1, 0, 0, 1, 1],
        [0, 1, 0, 0, 0, 1, 1, 0, 0, 1],
        [0, 0, 1, 0, 0, 0, 1, 1, 0, 1],
        [0, 0, 0, 1, 0, 0, 0, 1, 1, 1],
        [0, 0, 0, 0, 1, 1, 1, 1, 1, 1],
    ]);
    UnimodularSystem::new(m).expect("E5 is a valid system")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TuVerdict {
    Tu,
    NotTu,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(serialize_with = "crate::report::big_as_number")]
    pub det: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TuCertificate {
    pub verdict: TuVerdict,
    pub violating_minor: Option<Minor>,
    pub minors_checked: u64,
}

impl TuCertificate {
    pub fn is_tu(&self) -> bool {
        self.verdict == TuVerdict::Tu
    }
}

/// Checks every square minor, by increasing size and then lexicographic index
/// sets, and reports the first one outside {−1, 0, 1}.
pub fn is_totally_unimodular(m: &IntMatrix) -> TuCertificate {
    let unit = |d: &BigInt| d.abs() <= BigInt::one();
    let mut checked = 0u64;
    let small = m.to_i64_rows();
    for k in 1..=m.rows().min(m.cols()) {
        match &small {
            Some(rows) => {
                let col_sets: Vec<Vec<usize>> = (0..m.cols()).combinations(k).collect();
                let mut buf = vec![vec![0i64; k]; k];
                for rs in (0..m.rows()).combinations(k) {
                    for cs in &col_sets {
                        for (bi, &r) in rs.iter().enumerate() {
                            for (bj, &c) in cs.iter().enumerate() {
                                buf[bi][bj] = rows[r][c];
                            }
                        }
                        checked += 1;
                        let d = match det_small(&buf) {
                            Some(d) => BigInt::from(d),
                            None => exactmat::det(&m.submatrix(&rs, cs)).expect("square"),
                        };
                        if !unit(&d) {
                            return TuCertificate {
                                verdict: TuVerdict::NotTu,
                                violating_minor: Some(Minor {
                                    rows: rs,
                                    cols: cs.clone(),
                                    det: d,
                                }),
                                minors_checked: checked,
                            };
                        }
                    }
                }
            }
            None => {
                for sub in exactmat::square_submatrices(m, k).expect("k in range") {
                    checked += 1;
                    let d = exactmat::det(&sub.matrix).expect("square");
                    if !unit(&d) {
                        return TuCertificate {
                            verdict: TuVerdict::NotTu,
                            violating_minor: Some(Minor {
                                rows: sub.rows,
                                cols: sub.cols,
                                det: d,
                            }),
                            minors_checked: checked,
                        };
                    }
                }
            }
        }
    }
    TuCertificate {
        verdict: TuVerdict::Tu,
        violating_minor: None,
        minors_checked: checked,
    }
}

/// Whether the hyperplanes `{x : x·r ∈ ℤ}` cut out a lattice, which holds
/// exactly when the system is totally unimodular.
pub fn dicing_is_lattice(s: &UnimodularSystem) -> bool {
    s.is_totally_unimodular().is_tu()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergedColumn {
    pub edge: String,
    pub kept: String,
    pub sign: i8,
}

/// A dicing system built from edge functionals, with bookkeeping of which
/// edges became which columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DicingSystem {
    pub system: UnimodularSystem,
    /// Every edge functional before zero columns are dropped and duplicates merged.
    pub full_matrix: IntMatrix,
    pub column_edges: Vec<String>,
    pub dropped_zero: Vec<String>,
    pub merged: Vec<MergedColumn>,
}

impl DicingSystem {
    pub(crate) fn from_full_matrix(full: IntMatrix, labels: Vec<String>) -> Result<Self, SystemError> {
        let mut kept: Vec<(usize, Vec<BigInt>)> = Vec::new();
        let mut dropped_zero = Vec::new();
        let mut merged = Vec::new();
        for (j, label) in labels.iter().enumerate() {
            let col = full.column(j);
            if col.iter().all(Zero::is_zero) {
                dropped_zero.push(label.clone());
                continue;
            }
            let neg: Vec<BigInt> = col.iter().map(|x| -x).collect();
            if let Some((k, _)) = kept.iter().find(|(_, c)| *c == col) {
                merged.push(MergedColumn {
                    edge: label.clone(),
                    kept: labels[*k].clone(),
                    sign: 1,
                });
            } else if let Some((k, _)) = kept.iter().find(|(_, c)| *c == neg) {
                merged.push(MergedColumn {
                    edge: label.clone(),
                    kept: labels[*k].clone(),
                    sign: -1,
                });
            } else {
                kept.push((j, col));
            }
        }
        let columns: Vec<Vec<BigInt>> = kept.iter().map(|(_, c)| c.clone()).collect();
        let column_edges = kept.iter().map(|(j, _)| labels[*j].clone()).collect();
        let system = UnimodularSystem::new(IntMatrix::from_columns(full.rows(), &columns))?;
        Ok(Self {
            system,
            full_matrix: full,
            column_edges,
            dropped_zero,
            merged,
        })
    }
}
