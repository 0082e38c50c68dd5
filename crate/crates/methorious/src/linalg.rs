//! Dense exact linear algebra over the scalar field.
//!
//! Determinants use fraction-free Bareiss elimination to control expression
//! swell in the exponential-constant entries; inverses and linear solves use
//! Gauss-Jordan with exact division.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expalg::Scalar;

/// A dense row-major matrix of scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Matrix::zero(n, n);
        for i in 0..n {
            out[(i, i)] = Scalar::one();
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Fraction-free Bareiss determinant; exact over the scalar field.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let mut m = self.clone();
        let mut denom = Scalar::one();
        let mut sign_negative = false;
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&r| !m[(r, k)].is_zero());
                match swap {
                    Some(r) => {
                        for j in 0..n {
                            let a = m[(k, j)].clone();
                            let b = m[(r, j)].clone();
                            m[(k, j)] = b;
                            m[(r, j)] = a;
                        }
                        sign_negative = !sign_negative;
                    }
                    None => return Scalar::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[(k, k)] * &m[(i, j)]) - &(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = &num / &denom;
                }
                m[(i, k)] = Scalar::zero();
            }
            denom = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        if sign_negative {
            -&det
        } else {
            det
        }
    }

    /// Gauss-Jordan inverse.
    ///
    /// # Errors
    /// [`Error::SingularProblem`] if the matrix is singular.
    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Matrix::identity(n);
        for k in 0..n {
            let pivot_row =
                (k..n).find(|&r| !m[(r, k)].is_zero()).ok_or(Error::SingularProblem)?;
            if pivot_row != k {
                for j in 0..n {
                    let a = m[(k, j)].clone();
                    m[(k, j)] = m[(pivot_row, j)].clone();
                    m[(pivot_row, j)] = a;
                    let b = inv[(k, j)].clone();
                    inv[(k, j)] = inv[(pivot_row, j)].clone();
                    inv[(pivot_row, j)] = b;
                }
            }
            let pivot = m[(k, k)].clone();
            let pinv = pivot.inv().map_err(|_| Error::SingularProblem)?;
            for j in 0..n {
                m[(k, j)] = &m[(k, j)] * &pinv;
                inv[(k, j)] = &inv[(k, j)] * &pinv;
            }
            for i in 0..n {
                if i != k && !m[(i, k)].is_zero() {
                    let factor = m[(i, k)].clone();
                    for j in 0..n {
                        let t = &m[(i, j)] - &(&factor * &m[(k, j)]);
                        m[(i, j)] = t;
                        let t = &inv[(i, j)] - &(&factor * &inv[(k, j)]);
                        inv[(i, j)] = t;
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    acc = &acc + &(&self[(i, j)] * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let pivot_row = (row..self.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot_row else { continue };
            if p != row {
                for j in 0..self.cols {
                    let a = m[(row, j)].clone();
                    m[(row, j)] = m[(p, j)].clone();
                    m[(p, j)] = a;
                }
            }
            let pinv = m[(row, col)].inv().expect("nonzero pivot");
            for i in row + 1..self.rows {
                if !m[(i, col)].is_zero() {
                    let factor = &m[(i, col)] * &pinv;
                    for j in col..self.cols {
                        let t = &m[(i, j)] - &(&factor * &m[(row, j)]);
                        m[(i, j)] = t;
                    }
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}
