//! Small dense linear algebra kernels: Cholesky, partially pivoted LU and a
//! cyclic Jacobi eigensolver for symmetric matrices.
//!
//! Matrices here are at most a few thousand rows (the FDM oracle) or a few
//! dozen (Galerkin systems), so plain row-major storage is sufficient.

use crate::error::{Error, Result};
use crate::scalar::{dot, Real};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Grows a square matrix by one row and column filled with zeros.
    pub fn grow_square(&mut self) {
        assert_eq!(self.rows, self.cols, "grow_square on a non-square matrix");
        let n = self.rows;
        let mut data = vec![T::zero(); (n + 1) * (n + 1)];
        for i in 0..n {
            data[i * (n + 1)..i * (n + 1) + n].copy_from_slice(self.row(i));
        }
        self.rows = n + 1;
        self.cols = n + 1;
        self.data = data;
    }

    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Lower-triangular Cholesky factor `L` with `A = L L^T`.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    l: DenseMatrix<T>,
}

impl<T: Real> Cholesky<T> {
    /// Returns `None` when a pivot is not strictly positive (the matrix is not
    /// numerically positive definite).
    pub fn factor(a: &DenseMatrix<T>) -> Option<Self> {
        let n = a.rows();
        assert_eq!(n, a.cols(), "Cholesky of a non-square matrix");
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let lj = &l.data[j * n..j * n + j];
            let d = a.get(j, j) - dot(lj, lj);
            if !(d > T::zero()) || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l.set(j, j, djj);
            for i in j + 1..n {
                let s = a.get(i, j) - dot(&l.data[i * n..i * n + j], &l.data[j * n..j * n + j]);
                l.set(i, j, s / djj);
            }
        }
        Some(Self { l })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.l.rows();
        let mut y = b.to_vec();
        for i in 0..n {
            let s = dot(&self.l.row(i)[..i], &y[..i]);
            y[i] = (y[i] - s) / self.l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s = s - self.l.get(k, i) * y[k];
            }
            y[i] = s / self.l.get(i, i);
        }
        y
    }

    /// Cheap reciprocal condition estimate `(min L_ii / max L_ii)^2`.
    pub fn rcond_estimate(&self) -> T {
        let n = self.l.rows();
        let (lo, hi) = (0..n).fold((T::infinity(), T::zero()), |(lo, hi), i| {
            let d = self.l.get(i, i);
            (lo.min(d), hi.max(d))
        });
        if n == 0 {
            return T::one();
        }
        let r = lo / hi;
        r * r
    }

    pub fn factor_l(&self) -> &DenseMatrix<T> {
        &self.l
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Fails with [`Error::SingularOperator`] when a pivot falls below
    /// `n * eps * max|A|`.
    pub fn factor(a: &DenseMatrix<T>) -> Result<Self> {
        let n = a.rows();
        assert_eq!(n, a.cols(), "LU of a non-square matrix");
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = a.max_abs() * T::epsilon() * T::from_count(n.max(1));
        for k in 0..n {
            let (p, pmax) = (k..n).fold((k, T::zero()), |(bi, bv), i| {
                let v = lu.get(i, k).abs();
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            });
            if !(pmax > tiny) {
                return Err(Error::SingularOperator);
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let m = lu.get(i, k) / pivot;
                lu.set(i, k, m);
                if m != T::zero() {
                    let (upper, lower) = lu.data.split_at_mut(i * n);
                    let row_k = &upper[k * n + k + 1..k * n + n];
                    let row_i = &mut lower[k + 1..n];
                    for (x, &u) in row_i.iter_mut().zip(row_k) {
                        *x = *x - m * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.rows();
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s = dot(&self.lu.row(i)[..i], &y[..i]);
            y[i] = y[i] - s;
        }
        for i in (0..n).rev() {
            let s = dot(&self.lu.row(i)[i + 1..], &y[i + 1..]);
            y[i] = (y[i] - s) / self.lu.get(i, i);
        }
        y
    }
}

/// Eigen-decomposition of a symmetric matrix: `A = V diag(values) V^T`,
/// with eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: DenseMatrix<T>,
}

impl<T: Real> SymmetricEigen<T> {
    /// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
    pub fn new(a: &DenseMatrix<T>) -> Self {
        let n = a.rows();
        assert_eq!(n, a.cols(), "eigen-decomposition of a non-square matrix");
        let mut m = a.clone();
        let mut v = DenseMatrix::identity(n);
        let scale = a.max_abs();
        for _sweep in 0..100 {
            let off: T = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m.get(i, j) * m.get(i, j))
                .sum();
            if off.sqrt() <= T::epsilon() * scale * T::lit(1e-2) || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = m.get(p, q);
                    if apq == T::zero() {
                        continue;
                    }
                    let app = m.get(p, p);
                    let aqq = m.get(q, q);
                    let theta = (aqq - app) / (T::lit(2.0) * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let mkp = m.get(k, p);
                        let mkq = m.get(k, q);
                        m.set(k, p, c * mkp - s * mkq);
                        m.set(k, q, s * mkp + c * mkq);
                    }
                    for k in 0..n {
                        let mpk = m.get(p, k);
                        let mqk = m.get(q, k);
                        m.set(p, k, c * mpk - s * mqk);
                        m.set(q, k, s * mpk + c * mqk);
                    }
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
        Self {
            values: (0..n).map(|i| m.get(i, i)).collect(),
            vectors: v,
        }
    }

    /// Minimum-norm least-squares solution of `A x = b`, discarding
    /// eigenvalues with `|lambda| <= rcond * max|lambda|`.
    pub fn pseudo_solve(&self, b: &[T], rcond: T) -> Vec<T> {
        let n = self.values.len();
        let lmax = self.values.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let cutoff = rcond * lmax;
        let mut x = vec![T::zero(); n];
        for (k, &lambda) in self.values.iter().enumerate() {
            if lambda.abs() <= cutoff || lambda == T::zero() {
                continue;
            }
            let coef = (0..n).fold(T::zero(), |s, i| s + self.vectors.get(i, k) * b[i]) / lambda;
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = *xi + coef * self.vectors.get(i, k);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spd(n: usize) -> DenseMatrix<f64> {
        DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                4.0 + i as f64
            } else {
                1.0 / (1.0 + (i as f64 - j as f64).abs())
            }
        })
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let a = spd(6);
        let x: Vec<f64> = (0..6).map(|i| i as f64 - 2.5).collect();
        let b = a.matvec(&x).unwrap();
        let chol = Cholesky::factor(&a).unwrap();
        for (u, v) in chol.solve(&b).iter().zip(&x) {
            assert_relative_eq!(u, v, epsilon = 1e-13);
        }
        assert!(chol.rcond_estimate() > 0.1);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = spd(4);
        a.set(2, 2, -1.0);
        assert!(Cholesky::factor(&a).is_none());
    }

    #[test]
    fn lu_solves_nonsymmetric_system() {
        let a = DenseMatrix::from_fn(5, 5, |i, j| {
            ((i * 7 + j * 3) % 5) as f64 + if i == j { 0.5 } else { 0.0 }
        });
        let x = vec![1.0, -2.0, 0.5, 3.0, -1.0];
        let b = a.matvec(&x).unwrap();
        let lu = Lu::factor(&a).unwrap();
        for (u, v) in lu.solve(&b).iter().zip(&x) {
            assert_relative_eq!(u, v, epsilon = 1e-12);
        }
    }

    #[test]
    fn lu_reports_singular() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| (i + j) as f64);
        assert_eq!(Lu::factor(&a).unwrap_err(), Error::SingularOperator);
    }

    #[test]
    fn jacobi_reconstructs_matrix() {
        let a = spd(5);
        let eig = SymmetricEigen::new(&a);
        for i in 0..5 {
            for j in 0..5 {
                let r: f64 = (0..5)
                    .map(|k| eig.vectors.get(i, k) * eig.values[k] * eig.vectors.get(j, k))
                    .sum();
                assert_relative_eq!(r, a.get(i, j), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pseudo_solve_gives_minimum_norm_solution() {
        // Rank-one matrix [[1,1],[1,1]]: min-norm solution of A x = [2,2] is [1,1].
        let a = DenseMatrix::from_fn(2, 2, |_, _| 1.0);
        let x = SymmetricEigen::new(&a).pseudo_solve(&[2.0, 2.0], 1e-12);
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn grow_square_preserves_entries() {
        let mut a = spd(3);
        let before = a.clone();
        a.grow_square();
        assert_eq!(a.rows(), 4);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.get(i, j), before.get(i, j));
            }
            assert_eq!(a.get(i, 3), 0.0);
        }
    }
}
