//! Dense exact matrices with fraction-free elimination.
//!
//! Rank and determinant run Bareiss elimination over the coefficient domain
//! (no fractions ever formed beyond what the entries already carry);
//! nullspaces use exact Gauss-Jordan over a field. Pivots are always the
//! first nonzero entry in column order, so results are deterministic.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use super::{DeltaPoly, DeltaRational, ExactDomain, Field, Rational, Ring};

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc.add_ref(&self[(i, k)].mul_ref(&rhs[(k, j)]));
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl<T: ExactDomain> Matrix<T> {
    /// Exact rank by fraction-free Bareiss elimination with row swaps.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = T::one();
        let mut rank = 0;
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            // first nonzero entry in column order
            let Some(r) = (pivot_row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if r != pivot_row {
                m.swap_rows(r, pivot_row);
            }
            for i in pivot_row + 1..m.rows {
                for j in col + 1..m.cols {
                    let t = m[(pivot_row, col)]
                        .mul_ref(&m[(i, j)])
                        .sub_ref(&m[(i, col)].mul_ref(&m[(pivot_row, j)]));
                    m[(i, j)] = t.exact_div(&prev);
                }
                m[(i, col)] = T::zero();
            }
            prev = m[(pivot_row, col)].clone();
            pivot_row += 1;
            rank += 1;
        }
        rank
    }

    /// Exact determinant by Bareiss elimination.
    pub fn det(&self) -> Result<T, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut m = self.clone();
        let mut prev = T::one();
        let mut negate = false;
        for k in 0..n - 1 {
            let Some(r) = (k..n).find(|&r| !m[(r, k)].is_zero()) else {
                return Ok(T::zero());
            };
            if r != k {
                m.swap_rows(r, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m[(k, k)]
                        .mul_ref(&m[(i, j)])
                        .sub_ref(&m[(i, k)].mul_ref(&m[(k, j)]));
                    m[(i, j)] = t.exact_div(&prev);
                }
                m[(i, k)] = T::zero();
            }
            prev = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        Ok(if negate { det.neg_ref() } else { det })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            if p != r {
                m.swap_rows(p, r);
            }
            let inv = m[(r, col)].inv();
            for j in col..m.cols {
                m[(r, j)] = m[(r, j)].mul_ref(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, col)].is_zero() {
                    let factor = m[(i, col)].clone();
                    for j in col..m.cols {
                        let t = m[(i, j)].sub_ref(&factor.mul_ref(&m[(r, j)]));
                        m[(i, j)] = t;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right nullspace, one vector per free column in ascending
    /// column order; empty exactly when the matrix has full column rank.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (rref, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !pivot_set[c]) {
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = rref[(row, free)].neg_ref();
            }
            basis.push(v);
        }
        basis
    }
}

impl Matrix<DeltaPoly> {
    /// Entry-wise exact evaluation at a rational point.
    pub fn eval(&self, at: &Rational) -> Matrix<Rational> {
        self.map(|p| p.eval(at))
    }

    /// View over the fraction field ℚ(d).
    pub fn to_fractions(&self) -> Matrix<DeltaRational> {
        self.map(|p| DeltaRational::from(p))
    }

    /// True when every entry is the zero polynomial.
    pub fn is_identically_zero(&self) -> bool {
        self.data.iter().all(DeltaPoly::is_zero)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::DeltaPoly;

    fn rat(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn rational_matrix(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Independent oracle: determinant by cofactor expansion along the first
    /// row. Exponential, test-only.
    fn cofactor_det<T: Ring>(m: &Matrix<T>) -> T {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return T::one();
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = T::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let minor_rows: Vec<Vec<T>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[(i, c)].clone())
                        .collect()
                })
                .collect();
            let minor = Matrix::from_rows(minor_rows).unwrap();
            let term = m[(0, j)].mul_ref(&cofactor_det(&minor));
            acc = if j % 2 == 0 {
                acc.add_ref(&term)
            } else {
                acc.sub_ref(&term)
            };
        }
        acc
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::<Rational>::identity(3).rank(), 3);
        assert_eq!(rational_matrix(&[&[1, 1], &[1, 1]]).rank(), 1);
        // [[d,1],[1,d]] has determinant d^2 - 1, nonzero in the fraction field
        let d = DeltaPoly::delta();
        let m = Matrix::from_rows(vec![
            vec![d.clone(), DeltaPoly::one()],
            vec![DeltaPoly::one(), d.clone()],
        ])
        .unwrap();
        assert_eq!(m.to_fractions().rank(), 2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_examples() {
        assert!(Matrix::<Rational>::identity(2).nullspace().is_empty());

        let ns = rational_matrix(&[&[1, 1], &[1, 1]]).nullspace();
        assert_eq!(ns.len(), 1);
        // proportional to (1, -1)
        assert_eq!(ns[0][0].add_ref(&ns[0][1]), rat(0));
        assert!(!ns[0][0].is_zero());

        // full rank 3x3: hand elimination gives det = -1
        let m = rational_matrix(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]);
        assert!(m.nullspace().is_empty());
        assert_eq!(m.rank(), 3);
        assert_eq!(m.det().unwrap(), rat(-1));
    }

    #[test]
    fn det_examples_against_cofactor_oracle() {
        let d = DeltaPoly::delta();
        let one = DeltaPoly::one();
        let zero = DeltaPoly::zero();

        let m2 = Matrix::from_rows(vec![
            vec![d.clone(), one.clone()],
            vec![one.clone(), d.clone()],
        ])
        .unwrap();
        let expected2 = &(&d * &d) - &one; // d^2 - 1 by 2x2 cofactor expansion
        assert_eq!(m2.det().unwrap(), expected2);
        assert_eq!(cofactor_det(&m2), expected2);

        let m3 = Matrix::from_rows(vec![
            vec![d.clone(), one.clone(), zero.clone()],
            vec![one.clone(), d.clone(), one.clone()],
            vec![zero.clone(), one.clone(), d.clone()],
        ])
        .unwrap();
        let expected3 = cofactor_det(&m3); // brute-force oracle
        assert_eq!(expected3.to_string(), "d^3 - 2*d");
        assert_eq!(m3.det().unwrap(), expected3);

        assert_eq!(Matrix::<Rational>::identity(4).det().unwrap(), rat(1));
    }

    #[test]
    fn det_errors_on_non_square() {
        let m = rational_matrix(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(m.det(), Err(MatrixError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn bareiss_agrees_with_cofactor_on_random_rational_matrices() {
        let mut rng = crate::rng::SplitMix64::new(7);
        for _ in 0..40 {
            let n = 1 + rng.below(4);
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|_| (0..n).map(|_| rat(rng.small_int(4))).collect())
                .collect();
            let m = Matrix::from_rows(rows).unwrap();
            let det = m.det().unwrap();
            assert_eq!(det, cofactor_det(&m));
            // det != 0 iff full rank
            assert_eq!(!det.is_zero(), m.rank() == n);
            // rank + nullity = cols
            assert_eq!(m.rank() + m.nullspace().len(), n);
        }
    }
}
