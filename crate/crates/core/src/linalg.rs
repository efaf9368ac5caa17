//! Small dense real matrices and a one-sided Jacobi SVD.
//!
//! Every rank decision in the crate goes through [`Svd`]: a singular value
//! counts as nonzero when it is strictly above the absolute threshold.
//! The matrices here are at most a few dozen rows, so the quadratic-per-sweep
//! Jacobi iteration is cheap and gives singular values to high relative
//! accuracy, including exact zeros for structurally null columns.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use libm::sqrt;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row slices; all rows must share a length.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |r, c| rows[r][c])
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    /// Single column from a slice.
    pub fn column_vector(v: &[f64]) -> Self {
        Self::from_fn(v.len(), 1, |r, _| v[r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, c: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    /// `[self; rhs]`. Column counts must agree.
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    /// `[self, rhs]`. Row counts must agree.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        Matrix::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self[(r, c)]
            } else {
                rhs[(r, c - self.cols)]
            }
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |r, c| self[(r, cols[c])])
    }

    pub fn svd(&self) -> Svd {
        Svd::new(self)
    }

    /// Largest `|a_ij - b_ij|`.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        self.sub(rhs).max_abs()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Thin singular value decomposition `A = U diag(sigma) V^T`.
///
/// `sigma` has one entry per column of `A`, sorted descending; `v` is the full
/// `n x n` orthogonal factor. Columns of `u` belonging to zero singular values
/// are zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

const MAX_SWEEPS: usize = 80;

impl Svd {
    /// One-sided (Hestenes) Jacobi iteration on the columns of `a`.
    pub fn new(a: &Matrix) -> Svd {
        let (m, n) = (a.rows, a.cols);
        // column-major working copy
        let mut w: Vec<Vec<f64>> = (0..n).map(|c| a.column(c)).collect();
        let mut v: Vec<Vec<f64>> = (0..n)
            .map(|c| {
                let mut e = vec![0.0; n];
                e[c] = 1.0;
                e
            })
            .collect();

        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                    for i in 0..m {
                        alpha += w[p][i] * w[p][i];
                        beta += w[q][i] * w[q][i];
                        gamma += w[p][i] * w[q][i];
                    }
                    if gamma == 0.0 || gamma.abs() <= f64::EPSILON * sqrt(alpha * beta) {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + sqrt(1.0 + zeta * zeta));
                    let c = 1.0 / sqrt(1.0 + t * t);
                    let s = c * t;
                    for i in 0..m {
                        let (wp, wq) = (w[p][i], w[q][i]);
                        w[p][i] = c * wp - s * wq;
                        w[q][i] = s * wp + c * wq;
                    }
                    for i in 0..n {
                        let (vp, vq) = (v[p][i], v[q][i]);
                        v[p][i] = c * vp - s * vq;
                        v[q][i] = s * vp + c * vq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }

        let norms: Vec<f64> = w.iter().map(|col| sqrt(col.iter().map(|x| x * x).sum())).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

        let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
        let u = Matrix::from_fn(m, n, |r, c| {
            let j = order[c];
            if norms[j] > 0.0 {
                w[j][r] / norms[j]
            } else {
                0.0
            }
        });
        let v = Matrix::from_fn(n, n, |r, c| v[order[c]][r]);
        Svd { u, sigma, v }
    }

    /// Number of singular values strictly above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.sigma.iter().filter(|&&s| s > tol).count()
    }

    /// Orthonormal basis (columns) of the kernel.
    pub fn null_space(&self, tol: f64) -> Matrix {
        let r = self.rank(tol);
        let idx: Vec<usize> = (r..self.sigma.len()).collect();
        self.v.select_columns(&idx)
    }

    /// Orthonormal basis (columns) of the orthocomplement of the kernel.
    pub fn row_space(&self, tol: f64) -> Matrix {
        let idx: Vec<usize> = (0..self.rank(tol)).collect();
        self.v.select_columns(&idx)
    }

    /// Orthonormal basis (columns) of the image.
    pub fn range(&self, tol: f64) -> Matrix {
        let idx: Vec<usize> = (0..self.rank(tol)).collect();
        self.u.select_columns(&idx)
    }

    /// Product of the singular values above `tol`, as a natural logarithm.
    pub fn log_pseudo_determinant(&self, tol: f64) -> f64 {
        self.sigma.iter().filter(|&&s| s > tol).map(|&s| libm::log(s)).sum()
    }

    /// Moore–Penrose pseudo-inverse with singular values at or below `tol` dropped.
    pub fn pseudo_inverse(&self, tol: f64) -> Matrix {
        let (m, n) = (self.u.rows, self.v.rows);
        let mut out = Matrix::zeros(n, m);
        for (k, &s) in self.sigma.iter().enumerate() {
            if s <= tol {
                continue;
            }
            for i in 0..n {
                let vik = self.v[(i, k)] / s;
                for j in 0..m {
                    out[(i, j)] += vik * self.u[(j, k)];
                }
            }
        }
        out
    }

    /// Singular values lying within a factor of ten of `tol`.
    pub fn near_threshold(&self, tol: f64) -> Vec<f64> {
        self.sigma.iter().copied().filter(|&s| crate::tol::near_threshold(s, tol)).collect()
    }
}

/// Orthonormal basis of the orthogonal complement of the column span of `basis`.
pub fn orthogonal_complement(basis: &Matrix, tol: f64) -> Matrix {
    basis.transpose().svd().null_space(tol)
}

/// Largest deviation of `q^T q` from the identity.
pub fn orthonormality_defect(q: &Matrix) -> f64 {
    q.transpose().matmul(q).max_abs_diff(&Matrix::identity(q.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_diagonal() {
        let a = Matrix::from_rows(&[&[3.0, 0.0], &[0.0, -2.0], &[0.0, 0.0]]);
        let svd = a.svd();
        assert!((svd.sigma[0] - 3.0).abs() < 1e-14);
        assert!((svd.sigma[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn svd_reconstructs_wide_and_tall() {
        for (m, n) in [(4, 6), (6, 4), (5, 5), (0, 3), (3, 0)] {
            let a = Matrix::from_fn(m, n, |r, c| libm::sin((1 + r * 7 + c * 3) as f64));
            let svd = a.svd();
            let sig = Matrix::from_fn(n, n, |r, c| if r == c { svd.sigma[r] } else { 0.0 });
            let back = svd.u.matmul(&sig).matmul(&svd.v.transpose());
            assert!(back.max_abs_diff(&a) < 1e-12, "{m}x{n}");
            assert!(orthonormality_defect(&svd.v) < 1e-12);
        }
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = Matrix::from_rows(&[&[1.0, 1.0, 0.0], &[2.0, 2.0, 0.0]]);
        let svd = a.svd();
        assert_eq!(svd.rank(1e-10), 1);
        let ns = svd.null_space(1e-10);
        assert_eq!(ns.cols(), 2);
        assert!(a.matmul(&ns).max_abs() < 1e-14);
    }

    #[test]
    fn pseudo_inverse_of_full_rank_is_inverse() {
        let a = Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let pinv = a.svd().pseudo_inverse(1e-12);
        assert!(a.matmul(&pinv).max_abs_diff(&Matrix::identity(2)) < 1e-14);
    }

    #[test]
    fn complement_is_orthogonal() {
        let b = Matrix::column_vector(&[1.0 / libm::sqrt(2.0), 1.0 / libm::sqrt(2.0), 0.0]);
        let c = orthogonal_complement(&b, 1e-12);
        assert_eq!(c.cols(), 2);
        assert!(b.transpose().matmul(&c).max_abs() < 1e-15);
        assert!(orthonormality_defect(&c) < 1e-14);
    }
}
