//! Independent oracles shared by the integration tests. Nothing here calls
//! into the SVD, the optimizer, or the norm code under test.
#![allow(dead_code)]

use deniable_core::models::ParamModel;
use deniable_core::{Dataset, Matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact rank of an integer matrix by rational Gaussian elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, pivot);
        for r in 0..n_rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[rank][col];
                for c in col..n_cols {
                    let sub = &factor * &a[rank][c];
                    a[r][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Least squares `min ‖A x − b‖₂` via the normal equations `AᵀA x = Aᵀb`,
/// solved by Gaussian elimination with partial pivoting.
pub fn normal_equations(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let d = a[0].len();
    let mut m = vec![vec![0.0; d + 1]; d];
    for (row, &y) in a.iter().zip(b) {
        for i in 0..d {
            for j in 0..d {
                m[i][j] += row[i] * row[j];
            }
            m[i][d] += row[i] * y;
        }
    }
    for col in 0..d {
        let pivot = (col..d).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, pivot);
        for r in col + 1..d {
            let f = m[r][col] / m[col][col];
            for c in col..=d {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; d];
    for i in (0..d).rev() {
        let s: f64 = (i + 1..d).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][d] - s) / m[i][i];
    }
    x
}

/// `[1 | X]` as plain rows.
pub fn design_rows(x: &Matrix) -> Vec<Vec<f64>> {
    (0..x.rows()).map(|i| std::iter::once(1.0).chain(x.row(i).iter().copied()).collect()).collect()
}

/// 2-norm condition number of `A`, from the eigenvalues of `AᵀA` found by
/// cyclic Jacobi rotations.
pub fn condition_number(a: &[Vec<f64>]) -> f64 {
    let d = a[0].len();
    let mut s = vec![vec![0.0; d]; d];
    for row in a {
        for i in 0..d {
            for j in 0..d {
                s[i][j] += row[i] * row[j];
            }
        }
    }
    for _ in 0..100 {
        let mut off = 0.0;
        for p in 0..d {
            for q in p + 1..d {
                off += s[p][q] * s[p][q];
                if s[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..d {
                    let (skp, skq) = (s[k][p], s[k][q]);
                    s[k][p] = c * skp - sn * skq;
                    s[k][q] = sn * skp + c * skq;
                }
                for k in 0..d {
                    let (spk, sqk) = (s[p][k], s[q][k]);
                    s[p][k] = c * spk - sn * sqk;
                    s[q][k] = sn * spk + c * sqk;
                }
            }
        }
        if off < 1e-30 {
            break;
        }
    }
    let eig: Vec<f64> = (0..d).map(|i| s[i][i]).collect();
    let max = eig.iter().cloned().fold(f64::MIN, f64::max);
    let min = eig.iter().cloned().fold(f64::MAX, f64::min);
    (max / min).sqrt()
}

pub fn uniform_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.random_range(lo..hi)).collect();
    Matrix::from_row_major(rows, cols, data).unwrap()
}

/// A point uniformly distributed in the Euclidean ball of `radius` around `center`.
pub fn ball_sample(rng: &mut impl Rng, center: &[f64], radius: f64) -> Vec<f64> {
    let d = center.len();
    let dir: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
    let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
    center.iter().zip(&dir).map(|(c, v)| c + r * v / len).collect()
}

/// Two independent linear regressions sharing inputs:
/// `f_j(x, p) = p[j·(m+1)] + Σ p[j·(m+1)+1+i]·x_i` for `j = 0, 1`.
pub struct TwoOutputLinear {
    pub input_dim: usize,
}

impl ParamModel for TwoOutputLinear {
    fn param_dim(&self) -> usize {
        2 * (self.input_dim + 1)
    }
    fn input_dim(&self) -> usize {
        self.input_dim
    }
    fn output_dim(&self) -> usize {
        2
    }
    fn evaluate(&self, x: &[f64], p: &[f64], out: &mut [f64]) {
        let w = self.input_dim + 1;
        for (j, o) in out.iter_mut().enumerate() {
            let block = &p[j * w..(j + 1) * w];
            *o = block[0] + x.iter().zip(&block[1..]).map(|(a, b)| a * b).sum::<f64>();
        }
    }
}

/// `f(x, p) = p₀·x₁ + p₁²·x₂ + p₀·p₁`, with its gradient worked out by hand.
pub struct QuadraticModel;

impl ParamModel for QuadraticModel {
    fn param_dim(&self) -> usize {
        2
    }
    fn input_dim(&self) -> usize {
        2
    }
    fn evaluate(&self, x: &[f64], p: &[f64], out: &mut [f64]) {
        out[0] = p[0] * x[0] + p[1] * p[1] * x[1] + p[0] * p[1];
    }
    fn analytic_gradient(&self, x: &[f64], p: &[f64], _output: usize, grad: &mut [f64]) -> deniable_core::Result<()> {
        grad[0] = x[0] + p[1];
        grad[1] = 2.0 * p[1] * x[1] + p[0];
        Ok(())
    }
}

pub fn dataset(x: Matrix, y: Matrix) -> Dataset {
    Dataset::new(x, y).unwrap()
}
