//! Exact integer and half-integer matrices.
//!
//! Everything here is exact: entries are [`BigInt`], elimination is
//! fraction-free, and the only rationals that ever appear are halves.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("entry count {found} does not match {rows}x{cols}")]
    Shape { rows: usize, cols: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("cannot multiply {0}x{1} by {2}x{3}")]
    Incompatible(usize, usize, usize, usize),
    #[error("minor size {k} out of range for a {rows}x{cols} matrix")]
    MinorSize { k: usize, rows: usize, cols: usize },
    #[error("denominator must be 1 or 2, got {0}")]
    Denominator(BigInt),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape {
                rows,
                cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small-integer rows. Panics on ragged input, so it
    /// is meant for literals and tests; use [`IntMatrix::new`] for data.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(
            rows.iter().all(|r| r.as_ref().len() == cols),
            "ragged matrix literal"
        );
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)))
            .collect();
        Self {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, x) in col.iter().enumerate() {
                m.entries[r * cols + c] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Incompatible(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    /// All entries as `i64`, row by row, if every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.row_vecs())
    }
}

/// The plain-text matrix format: `rows cols` followed by one line per row.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line = self.row(r).iter().map(ToString::to_string).join(" ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let m = RationalMatrix::from_str(s)?;
        if !m.is_integral() {
            return Err(MatrixError::Parse {
                line: 1,
                msg: "expected an integer matrix, found denominator 2".into(),
            });
        }
        Ok(m.numerator)
    }
}

/// Matrix over ½ℤ: an integer numerator and a denominator of 1 or 2.
///
/// Kept in canonical form: denominator 2 only when some numerator entry is odd.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    numerator: IntMatrix,
    denominator: u8,
}

impl RationalMatrix {
    pub fn new(numerator: IntMatrix, denominator: BigInt) -> Result<Self, MatrixError> {
        let d = match denominator.to_u8() {
            Some(d @ (1 | 2)) => d,
            _ => return Err(MatrixError::Denominator(denominator)),
        };
        Ok(Self::canonical(numerator, d))
    }

    pub fn integral(m: IntMatrix) -> Self {
        Self {
            numerator: m,
            denominator: 1,
        }
    }

    /// The matrix `doubled / 2`.
    pub fn halve(doubled: IntMatrix) -> Self {
        Self::canonical(doubled, 2)
    }

    fn canonical(mut numerator: IntMatrix, denominator: u8) -> Self {
        if denominator == 2 && numerator.entries.iter().all(|x| x.is_even()) {
            for x in &mut numerator.entries {
                *x /= 2;
            }
            return Self {
                numerator,
                denominator: 1,
            };
        }
        Self {
            numerator,
            denominator,
        }
    }

    pub fn numerator(&self) -> &IntMatrix {
        &self.numerator
    }

    pub fn denominator(&self) -> u8 {
        self.denominator
    }

    pub fn is_integral(&self) -> bool {
        self.denominator == 1
    }

    pub fn rows(&self) -> usize {
        self.numerator.rows
    }

    pub fn cols(&self) -> usize {
        self.numerator.cols
    }

    /// Twice the matrix, which is always integral.
    pub fn doubled(&self) -> IntMatrix {
        if self.denominator == 2 {
            return self.numerator.clone();
        }
        let mut m = self.numerator.clone();
        for x in &mut m.entries {
            *x *= 2;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        BigRational::new(
            self.numerator.get(r, c).clone(),
            BigInt::from(self.denominator),
        )
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/{}", self.numerator, self.denominator)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 2 {
            writeln!(f, "denominator 2")?;
        }
        write!(f, "{}", self.numerator)
    }
}

impl FromStr for RationalMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, msg: &str| MatrixError::Parse {
            line,
            msg: msg.to_string(),
        };

        let (mut line_no, mut header) = lines.next().ok_or_else(|| err(1, "empty matrix file"))?;
        let mut denominator = BigInt::one();
        if let Some(rest) = header.strip_prefix("denominator") {
            denominator = rest
                .trim()
                .parse()
                .map_err(|_| err(line_no, "bad denominator"))?;
            (line_no, header) = lines
                .next()
                .ok_or_else(|| err(line_no, "missing dimension line"))?;
        }
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| err(line_no, "expected `rows cols`"))?;
        let [rows, cols] = dims[..] else {
            return Err(err(line_no, "expected `rows cols`"));
        };

        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (n, line) = lines
                .next()
                .ok_or_else(|| err(line_no + 1, "missing matrix row"))?;
            let row: Vec<BigInt> = line
                .split_whitespace()
                .map(BigInt::from_str)
                .collect::<Result<_, _>>()
                .map_err(|_| err(n, "non-integer entry"))?;
            if row.len() != cols {
                return Err(err(n, &format!("expected {cols} entries, found {}", row.len())));
            }
            entries.extend(row);
            line_no = n;
        }
        if let Some((n, _)) = lines.next() {
            return Err(err(n, "trailing data after matrix"));
        }
        RationalMatrix::new(IntMatrix::new(rows, cols, entries)?, denominator)
            .map_err(|e| err(1, &e.to_string()))
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        m.entries.swap(a * m.cols + c, b * m.cols + c);
    }
}

/// Replaces rows (a, b) by (p·a + q·b, r·a + s·b).
fn combine_rows(m: &mut IntMatrix, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
    for c in 0..m.cols {
        let x = &m.entries[a * m.cols + c];
        let y = &m.entries[b * m.cols + c];
        let nx = p * x + q * y;
        let ny = r * x + s * y;
        m.entries[a * m.cols + c] = nx;
        m.entries[b * m.cols + c] = ny;
    }
}

/// Row `target -= factor * row source`.
fn sub_row_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for c in 0..m.cols {
        let v = &m.entries[source * m.cols + c] * factor;
        m.entries[target * m.cols + c] -= v;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols {
        let v = -&m.entries[r * m.cols + c];
        m.entries[r * m.cols + c] = v;
    }
}

/// Row Hermite normal form: returns `(H, U)` with `H = U·M` and `U` unimodular.
///
/// `H` is in row echelon form with positive pivots, every entry above a pivot
/// reduced into `[0, pivot)`, and zero rows at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        // Fold every lower entry of this column into the pivot row via gcd steps.
        for r in pivot_row + 1..m.rows {
            let b = h.get(r, col).clone();
            if b.is_zero() {
                continue;
            }
            let a = h.get(pivot_row, col).clone();
            if a.is_zero() {
                swap_rows(&mut h, pivot_row, r);
                swap_rows(&mut u, pivot_row, r);
                continue;
            }
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let a_g = &a / &g;
            let b_g = &b / &g;
            // [x y; -b/g a/g] has determinant 1.
            let nb = -b_g;
            combine_rows(&mut h, pivot_row, r, &x, &y, &nb, &a_g);
            combine_rows(&mut u, pivot_row, r, &x, &y, &nb, &a_g);
        }
        if h.get(pivot_row, col).is_zero() {
            continue;
        }
        if h.get(pivot_row, col).is_negative() {
            negate_row(&mut h, pivot_row);
            negate_row(&mut u, pivot_row);
        }
        let pivot = h.get(pivot_row, col).clone();
        for r in 0..pivot_row {
            let q = h.get(r, col).div_floor(&pivot);
            sub_row_multiple(&mut h, r, pivot_row, &q);
            sub_row_multiple(&mut u, r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Rank over ℚ.
pub fn rank(m: &IntMatrix) -> usize {
    if let Some(rows) = m.to_i64_rows() {
        if let Some(r) = rank_small(&rows) {
            return r;
        }
    }
    let (h, _) = hnf(m);
    (0..h.rows).filter(|&r| h.row(r).iter().any(|x| !x.is_zero())).count()
}

/// The nonzero rows of the Hermite form: a basis of the row lattice.
pub fn row_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(m);
    let keep: Vec<usize> = (0..h.rows)
        .filter(|&r| h.row(r).iter().any(|x| !x.is_zero()))
        .collect();
    h.select_rows(&keep)
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                return Ok(BigInt::zero());
            };
            swap_rows(&mut a, k, p);
            sign = -sign;
        }
        let akk = a.get(k, k).clone();
        for i in k + 1..n {
            let aik = a.get(i, k).clone();
            for j in k + 1..n {
                let v = (&akk * a.get(i, j) - &aik * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
            a.set(i, k, BigInt::zero());
        }
        prev = akk;
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// Bareiss determinant in `i128` with overflow checks; `None` on overflow.
pub(crate) fn det_small(m: &[Vec<i64>]) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        let akk = a[k][k];
        for i in k + 1..n {
            let aik = a[i][k];
            for j in k + 1..n {
                let num = akk
                    .checked_mul(a[i][j])?
                    .checked_sub(aik.checked_mul(a[k][j])?)?;
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = akk;
    }
    sign.checked_mul(a[n - 1][n - 1])
}

/// Rank of a small matrix by fraction-free elimination in `i128`; `None` on overflow.
pub(crate) fn rank_small(m: &[Vec<i64>]) -> Option<usize> {
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let pv = a[rank][c];
        for r in rank + 1..rows {
            let f = a[r][c];
            if f == 0 {
                continue;
            }
            let mut g = 0i128;
            for j in c..cols {
                let v = pv.checked_mul(a[r][j])?.checked_sub(f.checked_mul(a[rank][j])?)?;
                a[r][j] = v;
                g = g.gcd(&v);
            }
            if g > 1 {
                for x in &mut a[r][c..] {
                    *x /= g;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Some(rank)
}

/// Exact inverse over ℚ, or `None` when singular or non-square.
pub fn inverse_rational(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            (0..2 * n)
                .map(|c| {
                    if c < n {
                        BigRational::from_integer(m.get(r, c).clone())
                    } else if c - n == r {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let pv = a[c][c].clone();
        for x in &mut a[c] {
            *x /= &pv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let v = &f * &a[c][j];
                    a[r][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// One `k×k` submatrix together with the row and column indices that select it.
#[derive(Debug, Clone)]
pub struct SquareSubmatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub matrix: IntMatrix,
}

/// Lazily enumerates all `k×k` submatrices, row sets outermost, both index sets
/// in lexicographic order.
pub fn square_submatrices(
    m: &IntMatrix,
    k: usize,
) -> Result<impl Iterator<Item = SquareSubmatrix> + '_, MatrixError> {
    if k > m.rows.min(m.cols) {
        return Err(MatrixError::MinorSize {
            k,
            rows: m.rows,
            cols: m.cols,
        });
    }
    let col_sets: Vec<Vec<usize>> = (0..m.cols).combinations(k).collect();
    Ok((0..m.rows).combinations(k).flat_map(move |rows| {
        col_sets.clone().into_iter().map(move |cols| SquareSubmatrix {
            matrix: m.submatrix(&rows, &cols),
            rows: rows.clone(),
            cols,
        })
    }))
}
