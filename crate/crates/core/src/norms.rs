//! The crafted norm family and the standard regression error metrics.
//!
//! For a source error vector `e`, the crafted norm is
//!
//! ```text
//! ‖x‖ = 3/2 · b(x) + α/2 · |xᵀ w1|,     b(x) = ‖B x‖,     α = b(w1) / 2
//! ```
//!
//! where `B` is the [`ProjectionMatrix`] with nullspace `span{e}` and `w1` is
//! a random direction with `‖w1‖₁ = 1`. The seminorm `b` vanishes exactly on
//! `span{e}`; the `w1` term turns it into a full norm.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::linalg::{self, dot, norm1, norm2, Matrix, ProjectionMatrix};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Relative threshold for accepting a `w1` candidate.
pub const W1_ACCEPT_TOL: f64 = 1e-8;
/// Retry budget for `w1` rejection sampling.
pub const MAX_W1_ATTEMPTS: usize = 1000;

const W1_NORMALIZATION_TOL: f64 = 1e-12;

/// Norm applied to `B·x` inside the seminorm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InnerNorm {
    #[default]
    Euclidean,
    OneNorm,
}

impl InnerNorm {
    pub fn apply(self, v: &[f64]) -> f64 {
        match self {
            InnerNorm::Euclidean => norm2(v),
            InnerNorm::OneNorm => norm1(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CraftedNorm {
    projector: ProjectionMatrix,
    w1: Vec<f64>,
    alpha: f64,
    inner: InnerNorm,
    seed: u64,
}

fn seminorm_raw(projector: &ProjectionMatrix, inner: InnerNorm, x: &[f64]) -> Result<f64> {
    if x.len() != projector.dim() {
        return Err(Error::DimensionMismatch { expected: projector.dim(), found: x.len() });
    }
    Ok(inner.apply(&projector.apply(x)?))
}

/// Whether `w1` is a usable direction: not orthogonal to `e` and not inside
/// `span{e}`.
pub fn accept_w1(e: &[f64], projector: &ProjectionMatrix, inner: InnerNorm, w1: &[f64]) -> Result<bool> {
    let along = dot(e, w1).abs();
    let off = seminorm_raw(projector, inner, w1)?;
    Ok(along > W1_ACCEPT_TOL * norm2(e) && off > W1_ACCEPT_TOL)
}

/// Rejection-samples `w1` from `candidates`, normalizing each candidate to
/// unit one-norm before testing it.
pub fn pick_w1_from<F>(
    e: &[f64],
    projector: &ProjectionMatrix,
    inner: InnerNorm,
    mut candidates: F,
) -> Result<Vec<f64>>
where
    F: FnMut() -> Vec<f64>,
{
    let n = e.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { len: n });
    }
    for _ in 0..MAX_W1_ATTEMPTS {
        let mut w = candidates();
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: w.len() });
        }
        let l1 = norm1(&w);
        if !(l1 > 0.0) || !l1.is_finite() {
            continue;
        }
        w.iter_mut().for_each(|v| *v /= l1);
        if accept_w1(e, projector, inner, &w)? {
            return Ok(w);
        }
    }
    Err(Error::RejectionExhausted { attempts: MAX_W1_ATTEMPTS })
}

/// Draws `w1` uniformly on the unit sphere (then one-norm normalized),
/// deterministically from `seed`.
pub fn pick_w1(e: &[f64], projector: &ProjectionMatrix, inner: InnerNorm, seed: u64) -> Result<Vec<f64>> {
    let mut rng = StreamRng::seed_from_u64(seed);
    let n = e.len();
    pick_w1_from(e, projector, inner, || (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
}

/// Builds the crafted norm for the source error `e`.
pub fn make_crafted_norm(e: &[f64], seed: u64, inner: InnerNorm, svd_tolerance: f64) -> Result<CraftedNorm> {
    let projector = linalg::nullspace_projector(e, svd_tolerance)?;
    let w1 = pick_w1(e, &projector, inner, seed)?;
    CraftedNorm::with_w1(projector, w1, inner, seed)
}

impl CraftedNorm {
    /// Uses the given `w1` and sets `α = b(w1)/2`.
    pub fn with_w1(projector: ProjectionMatrix, w1: Vec<f64>, inner: InnerNorm, seed: u64) -> Result<Self> {
        let alpha = seminorm_raw(&projector, inner, &w1)? / 2.0;
        Self::from_parts(projector, w1, alpha, inner, seed)
    }

    /// Reassembles a norm from stored parts, checking its invariants.
    pub fn from_parts(
        projector: ProjectionMatrix,
        w1: Vec<f64>,
        alpha: f64,
        inner: InnerNorm,
        seed: u64,
    ) -> Result<Self> {
        if w1.len() != projector.dim() {
            return Err(Error::DimensionMismatch { expected: projector.dim(), found: w1.len() });
        }
        if (norm1(&w1) - 1.0).abs() > W1_NORMALIZATION_TOL {
            return Err(Error::InvalidArguments("w1 must have unit one-norm"));
        }
        if !accept_w1(projector.source_error(), &projector, inner, &w1)? {
            return Err(Error::InvalidArguments("w1 is degenerate for this error vector"));
        }
        let b_w1 = seminorm_raw(&projector, inner, &w1)?;
        if !(alpha > 0.0 && alpha <= b_w1) {
            return Err(Error::InvalidArguments("alpha must lie in (0, b(w1)]"));
        }
        Ok(Self { projector, w1, alpha, inner, seed })
    }

    pub fn projector(&self) -> &ProjectionMatrix {
        &self.projector
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn inner(&self) -> InnerNorm {
        self.inner
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.projector.dim()
    }

    /// The seminorm `b(x) = ‖B·x‖`.
    pub fn seminorm(&self, x: &[f64]) -> Result<f64> {
        seminorm_raw(&self.projector, self.inner, x)
    }

    /// `3/2 · b(x) + α/2 · |xᵀ w1|`.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let b = self.seminorm(x)?;
        Ok(1.5 * b + 0.5 * self.alpha * dot(x, &self.w1).abs())
    }

    /// The `n×n` matrix `C` stacking `3/2·B` over `α/2·w1ᵀ`, so that
    /// `‖C·x‖₁` equals [`value`](Self::value) for the one-norm variant.
    pub fn mae_transform(&self) -> Result<Matrix> {
        if self.inner != InnerNorm::OneNorm {
            return Err(Error::VariantMismatch);
        }
        let n = self.dim();
        let b = self.projector.matrix();
        let mut c = Matrix::zeros(n, n);
        for i in 0..n - 1 {
            for (dst, src) in c.row_mut(i).iter_mut().zip(b.row(i)) {
                *dst = 1.5 * src;
            }
        }
        for (dst, w) in c.row_mut(n - 1).iter_mut().zip(&self.w1) {
            *dst = 0.5 * self.alpha * w;
        }
        Ok(c)
    }
}

/// `Σⱼ ‖E[:, j]‖_{e_j}`, one crafted norm per column.
pub fn crafted_matrix_norm(norms: &[CraftedNorm], e: &Matrix) -> Result<f64> {
    if norms.len() != e.cols() {
        return Err(Error::LengthMismatch { expected: e.cols(), found: norms.len() });
    }
    let mut total = 0.0;
    for (j, norm) in norms.iter().enumerate() {
        total += norm.value(&e.column(j))?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Mse,
    Rmse,
    Mae,
}

pub fn standard_metric(kind: Metric, y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.is_empty() {
        return Err(Error::EmptyInput);
    }
    if y.len() != yhat.len() {
        return Err(Error::DimensionMismatch { expected: y.len(), found: yhat.len() });
    }
    let n = y.len() as f64;
    let diffs = y.iter().zip(yhat).map(|(a, b)| a - b);
    Ok(match kind {
        Metric::Mse => diffs.map(|d| d * d).sum::<f64>() / n,
        Metric::Rmse => libm::sqrt(diffs.map(|d| d * d).sum::<f64>() / n),
        Metric::Mae => diffs.map(f64::abs).sum::<f64>() / n,
    })
}
