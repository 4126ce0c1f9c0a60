//! Exact linear algebra over the rationals.
//!
//! Dense matrices of [`BigRational`] entries with deterministic Gauss-Jordan
//! elimination: the pivot of each column is the first nonzero entry at or
//! below the current row. Every basis returned from this module is therefore
//! reproducible for a fixed input.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("right-hand side is not in the image of the matrix")]
pub struct NoSolution;

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of [`QMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: QMatrix,
    /// Pivot columns, strictly increasing; `pivots[i]` is the pivot of row `i`.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut free = Vec::with_capacity(self.matrix.cols - self.pivots.len());
        let mut p = self.pivots.iter().peekable();
        for c in 0..self.matrix.cols {
            if p.peek() == Some(&&c) {
                p.next();
            } else {
                free.push(c);
            }
        }
        free
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<Q>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        QMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column has wrong length");
            for (r, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, c, x.clone());
                }
            }
        }
        m
    }

    /// Convenience constructor from small integer entries.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        Self::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.get(r, c);
                if !x.is_zero() {
                    t.set(c, r, x.clone());
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            if !inv.is_one() {
                for c in col..m.cols {
                    let x = m.get(row, c);
                    if !x.is_zero() {
                        let y = x * &inv;
                        m.set(row, c, y);
                    }
                }
            }
            let pivot_row: Vec<(usize, Q)> = (col..m.cols)
                .filter_map(|c| {
                    let x = m.get(row, c);
                    (!x.is_zero()).then(|| (c, x.clone()))
                })
                .collect();
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (c, x) in &pivot_row {
                    let y = m.get(r, *c) - &factor * x;
                    m.set(r, *c, y);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of the null space, one vector per free column (that column set to 1).
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        kernel_from_rref(&self.rref())
    }

    /// A particular solution of `self * x = b` (free variables set to zero).
    pub fn solve(&self, b: &[Q]) -> Result<Vec<Q>, NoSolution> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for (r, br) in b.iter().enumerate() {
            for c in 0..self.cols {
                let x = self.get(r, c);
                if !x.is_zero() {
                    aug.set(r, c, x.clone());
                }
            }
            aug.set(r, self.cols, br.clone());
        }
        let red = aug.rref();
        if red.pivots.last() == Some(&self.cols) {
            return Err(NoSolution);
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in red.pivots.iter().enumerate() {
            x[p] = red.matrix.get(i, self.cols).clone();
        }
        Ok(x)
    }
}

pub(crate) fn kernel_from_rref(red: &Rref) -> Vec<Vec<Q>> {
    let cols = red.matrix.cols;
    red.free_columns()
        .into_iter()
        .map(|f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &p) in red.pivots.iter().enumerate() {
                let x = red.matrix.get(i, f);
                if !x.is_zero() {
                    v[p] = -x.clone();
                }
            }
            v
        })
        .collect()
}

/// Quotient of `Q^n` by a subspace, with a fixed set of representatives.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    space_dim: usize,
    reduced: Rref,
    free: Vec<usize>,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// Ambient indices of the representative unit vectors.
    pub fn complement_indices(&self) -> &[usize] {
        &self.free
    }

    /// Dimension of the subspace being quotiented out.
    pub fn subspace_dim(&self) -> usize {
        self.reduced.rank()
    }

    /// Representative vectors: standard basis vectors at the non-pivot columns.
    pub fn representatives(&self) -> Vec<Vec<Q>> {
        self.free
            .iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.space_dim];
                v[f] = Q::one();
                v
            })
            .collect()
    }

    /// Coordinates of `v` in the quotient with respect to [`Self::representatives`].
    pub fn project(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.space_dim);
        let mut w = v.to_vec();
        for (i, &p) in self.reduced.pivots.iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let factor = w[p].clone();
            for (c, x) in self.reduced.matrix.row(i).iter().enumerate() {
                if !x.is_zero() {
                    w[c] -= &factor * x;
                }
            }
        }
        self.free.iter().map(|&f| w[f].clone()).collect()
    }

    /// True iff `v` lies in the subspace.
    pub fn contains(&self, v: &[Q]) -> bool {
        self.project(v).iter().all(Zero::is_zero)
    }
}

/// Quotient of `Q^space_dim` by the span of `subspace`.
pub fn quotient_basis(space_dim: usize, subspace: &[Vec<Q>]) -> QuotientBasis {
    let m = QMatrix::from_rows(space_dim, subspace);
    let reduced = m.rref();
    let free = reduced.free_columns();
    QuotientBasis {
        space_dim,
        reduced,
        free,
    }
}

/// Dimension of the span of a list of vectors of length `dim`.
pub fn span_dim(dim: usize, vectors: &[Vec<Q>]) -> usize {
    QMatrix::from_rows(dim, vectors).rank()
}

/// A maximal linearly independent sub-list (first occurrences win).
pub fn independent_subset(dim: usize, vectors: &[Vec<Q>]) -> Vec<usize> {
    let m = QMatrix::from_columns(dim, vectors);
    m.rref().pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rref_identity() {
        let r = QMatrix::identity(2).rref();
        assert_eq!(r.matrix, QMatrix::identity(2));
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let r = QMatrix::from_i64(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r.matrix, QMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_exact_fractions() {
        let m = QMatrix::from_rows(2, &[vec![qf(1, 2), qf(1, 3)], vec![qf(1, 4), qf(1, 6)]]);
        let r = m.rref();
        let expected = QMatrix::from_rows(2, &[vec![q(1), qf(2, 3)], vec![q(0), q(0)]]);
        assert_eq!(r.matrix, expected);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn one_third_round_trips() {
        let m = QMatrix::from_rows(1, &[vec![qf(1, 3)]]);
        assert_eq!(m.get(0, 0), &qf(1, 3));
        assert_eq!(m.solve(&[qf(1, 9)]).unwrap(), vec![qf(1, 3)]);
    }

    #[test]
    fn kernel_cases() {
        assert!(QMatrix::identity(3).kernel_basis().is_empty());
        assert_eq!(QMatrix::zeros(1, 3).kernel_basis().len(), 3);
        let k = QMatrix::from_i64(&[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![v(&[-1, 1])]);
    }

    #[test]
    fn solve_cases() {
        let b = v(&[5, -7]);
        assert_eq!(QMatrix::identity(2).solve(&b).unwrap(), b);
        assert_eq!(QMatrix::zeros(2, 2).solve(&b), Err(NoSolution));
        assert_eq!(
            QMatrix::from_i64(&[&[1, 2]]).solve(&v(&[3])).unwrap(),
            v(&[3, 0])
        );
    }

    #[test]
    fn quotient_cases() {
        let qb = quotient_basis(3, &[v(&[1, 1, 0])]);
        assert_eq!(qb.dim(), 2);
        assert_eq!(qb.representatives(), vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert!(qb.contains(&v(&[2, 2, 0])));
        assert_eq!(qb.project(&v(&[1, 0, 0])), v(&[-1, 0]));
        let full = quotient_basis(2, &[v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(full.dim(), 0);
        let none = quotient_basis(2, &[]);
        assert_eq!(none.representatives(), vec![v(&[1, 0]), v(&[0, 1])]);
    }

    #[test]
    fn independent_columns() {
        let idx = independent_subset(2, &[v(&[1, 0]), v(&[2, 0]), v(&[0, 1])]);
        assert_eq!(idx, vec![0, 2]);
    }
}
