//! Dense linear algebra: a row-major matrix, a one-sided Jacobi SVD,
//! numerical rank, and the nullspace projector built from an error vector.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Absolute threshold below which an error vector counts as zero.
pub const DEFAULT_SVD_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone, PartialEq)]
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

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// A single-column matrix.
    pub fn column_vector(v: &[f64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        Ok(out)
    }

    /// `(self | v)`: the matrix with `v` appended as a last column.
    pub fn append_column(&self, v: &[f64]) -> Result<Matrix> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        let mut out = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            out.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            out[(i, self.cols)] = v[i];
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(dot(v, v))
}

pub fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Singular value decomposition `A = U · diag(σ) · Vᵀ`.
///
/// `sigma` and the columns of `v` are sorted by descending singular value.
/// `v` is always a full `c×c` orthogonal matrix, so columns belonging to zero
/// singular values span the nullspace of `A`. `u` is the thin `r×c` factor;
/// columns for zero singular values are left at zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &Matrix) -> Svd {
    let (r, c) = (a.rows, a.cols);
    // Work on columns, stored contiguously.
    let mut w: Vec<Vec<f64>> = (0..c).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..c)
        .map(|j| {
            let mut e = vec![0.0; c];
            e[j] = 1.0;
            e
        })
        .collect();

    let fro = norm2(&a.data);
    let floor = f64::EPSILON * fro;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..c {
            for q in (p + 1)..c {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                // Columns already below the noise floor are left alone.
                if libm::sqrt(alpha.min(beta)) <= floor {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = cs * t;
                rotate(&mut w, p, q, cs, sn);
                rotate(&mut v, p, q, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..c).collect();
    let norms: Vec<f64> = w.iter().map(|col| norm2(col)).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut u = Matrix::zeros(r, c);
    let mut vm = Matrix::zeros(c, c);
    let mut sigma = Vec::with_capacity(c);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        if s > 0.0 {
            for i in 0..r {
                u[(i, k)] = w[j][i] / s;
            }
        }
        vm.set_column(k, &v[j]);
    }
    Svd { u, sigma, v: vm }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, cs: f64, sn: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = cs * a - sn * b;
        *y = sn * a + cs * b;
    }
}

/// Default relative rank tolerance `max(r, c) · ε`.
pub fn default_rank_tolerance(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Number of singular values strictly above `rel_tol · σ_max`.
pub fn numerical_rank(m: &Matrix, rel_tol: f64) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let sigma = svd(m).sigma;
    let smax = sigma[0];
    if smax == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// `true` iff appending `e` as a column raises the numerical rank of `m`,
/// i.e. `e` lies outside the column space of `m`.
pub fn rank_condition(m: &Matrix, e: &[f64]) -> Result<bool> {
    let augmented = m.append_column(e)?;
    let base = numerical_rank(m, default_rank_tolerance(m.rows, m.cols));
    let grown = numerical_rank(&augmented, default_rank_tolerance(augmented.rows, augmented.cols));
    Ok(base != grown)
}

/// The `(n−1)×n` matrix `B` whose rows form an orthonormal basis of the
/// orthogonal complement of `span{e}`. Its nullspace is exactly `span{e}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    rows: Matrix,
    source_error: Vec<f64>,
    svd_tolerance: f64,
}

impl ProjectionMatrix {
    /// Reassembles a projector from stored parts (for example a certificate).
    /// The rows are taken as given; `B·e ≈ 0` is not re-checked here.
    pub fn from_parts(rows: Matrix, source_error: Vec<f64>, svd_tolerance: f64) -> Result<Self> {
        let n = source_error.len();
        if n < 2 {
            return Err(Error::DimensionTooSmall { len: n });
        }
        if rows.cols() != n || rows.rows() != n - 1 {
            return Err(Error::DimensionMismatch { expected: n - 1, found: rows.rows() });
        }
        Ok(Self { rows, source_error, svd_tolerance })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rows
    }

    pub fn source_error(&self) -> &[f64] {
        &self.source_error
    }

    pub fn svd_tolerance(&self) -> f64 {
        self.svd_tolerance
    }

    /// Dimension `n` of the ambient space.
    pub fn dim(&self) -> usize {
        self.source_error.len()
    }

    /// `B·x`, the coordinates of `x` in the complement of `span{e}`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.rows.mul_vec(x)
    }
}

/// Builds `B` from the full SVD of `e` viewed as an `n×1` matrix: the rows of
/// `B` are the left singular vectors belonging to zero singular values.
pub fn nullspace_projector(e: &[f64], svd_tolerance: f64) -> Result<ProjectionMatrix> {
    let n = e.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { len: n });
    }
    if !(norm2(e) > svd_tolerance) {
        return Err(Error::ZeroErrorVector);
    }
    // The full left factor of the n×1 matrix e is the full right factor of eᵀ.
    let et = Matrix::from_row_major(1, n, e.to_vec())?;
    let dec = svd(&et);
    let mut b = Matrix::zeros(n - 1, n);
    for k in 1..n {
        for i in 0..n {
            b[(k - 1, i)] = dec.v[(i, k)];
        }
    }
    Ok(ProjectionMatrix { rows: b, source_error: e.to_vec(), svd_tolerance })
}
