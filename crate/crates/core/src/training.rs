//! Derivative-free training: Nelder–Mead minimization of `‖e(p)‖` for a
//! standard or crafted loss.

use alloc::vec::Vec;

use crate::linalg::{norm1, norm2, Matrix};
use crate::models::{residuals, Dataset, ParamModel};
use crate::norms::{crafted_matrix_norm, CraftedNorm};
use crate::{Error, Result};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// The error metric applied to the residual matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum LossSpec {
    /// Euclidean (Frobenius) norm of all residuals.
    TwoNorm,
    OneNorm,
    Mse,
    Rmse,
    Mae,
    /// Crafted norm of a single-output residual vector.
    Crafted(CraftedNorm),
    /// Column-wise sum of crafted norms for a `k`-output model.
    CraftedMatrix(Vec<CraftedNorm>),
}

impl LossSpec {
    /// Checks that the loss can be applied to an `n×k` residual matrix.
    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        let check = |norm: &CraftedNorm| {
            if norm.dim() == n {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: n, found: norm.dim() })
            }
        };
        match self {
            LossSpec::Crafted(norm) => {
                if k != 1 {
                    return Err(Error::DimensionMismatch { expected: 1, found: k });
                }
                check(norm)
            }
            LossSpec::CraftedMatrix(norms) => {
                if norms.len() != k {
                    return Err(Error::LengthMismatch { expected: k, found: norms.len() });
                }
                norms.iter().try_for_each(check)
            }
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, e: &Matrix) -> Result<f64> {
        let all = e.as_slice();
        let count = all.len() as f64;
        if all.is_empty() {
            return Err(Error::EmptyInput);
        }
        match self {
            LossSpec::TwoNorm => Ok(norm2(all)),
            LossSpec::OneNorm => Ok(norm1(all)),
            LossSpec::Mse => Ok(all.iter().map(|v| v * v).sum::<f64>() / count),
            LossSpec::Rmse => Ok(libm::sqrt(all.iter().map(|v| v * v).sum::<f64>() / count)),
            LossSpec::Mae => Ok(norm1(all) / count),
            LossSpec::Crafted(norm) => {
                self.validate(e.rows(), e.cols())?;
                norm.value(all)
            }
            LossSpec::CraftedMatrix(norms) => crafted_matrix_norm(norms, e),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub start: Vec<f64>,
    pub max_iters: usize,
    /// Initial simplex edge, relative to `max(1, |start_i|)`.
    pub simplex_scale: f64,
    /// Stop once the simplex function-value spread falls below this...
    pub convergence_tol: f64,
    /// ...and every vertex lies within this distance (∞-norm) of the best.
    pub param_tol: f64,
    /// Seed the start point was derived from, kept for replay.
    pub seed: u64,
}

impl OptimizerConfig {
    pub const DEFAULT_MAX_ITERS: usize = 20_000;
    pub const DEFAULT_SIMPLEX_SCALE: f64 = 0.05;
    pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-13;
    pub const DEFAULT_PARAM_TOL: f64 = 1e-10;

    pub fn new(start: Vec<f64>) -> Self {
        Self {
            start,
            max_iters: Self::DEFAULT_MAX_ITERS,
            simplex_scale: Self::DEFAULT_SIMPLEX_SCALE,
            convergence_tol: Self::DEFAULT_CONVERGENCE_TOL,
            param_tol: Self::DEFAULT_PARAM_TOL,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.start.is_empty() {
            return Err(Error::EmptyInput);
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArguments("max_iters must be at least 1"));
        }
        if !(self.simplex_scale > 0.0) || !(self.convergence_tol > 0.0) || !(self.param_tol > 0.0) {
            return Err(Error::InvalidArguments("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub params: Vec<f64>,
    pub final_loss: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex descent from `config.start`.
pub fn minimize<F>(objective: F, config: &OptimizerConfig) -> Result<FittedModel>
where
    F: FnMut(&[f64]) -> f64,
{
    minimize_traced(objective, config, |_, _| {})
}

/// [`minimize`], reporting `(iteration, best value)` after every iteration.
pub fn minimize_traced<F, T>(mut objective: F, config: &OptimizerConfig, mut trace: T) -> Result<FittedModel>
where
    F: FnMut(&[f64]) -> f64,
    T: FnMut(usize, f64),
{
    config.validate()?;
    let f0 = objective(&config.start);
    if !f0.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    // Non-finite values are treated as +∞ so the simplex moves away from them.
    let mut eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() { f64::INFINITY } else { v }
    };

    // A converged simplex can stall on a kink, so restart around the best
    // vertex until a fresh simplex stops improving.
    let mut best = (config.start.clone(), f0);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iters {
        let (x, fx, used, done) = simplex_run(&mut eval, &best.0, best.1, config, iterations, &mut trace);
        iterations += used;
        let improved = best.1 - fx >= config.convergence_tol;
        best = (x, fx);
        converged = done;
        if !done || !improved {
            break;
        }
    }
    Ok(FittedModel { params: best.0, final_loss: best.1, iterations, converged })
}

fn simplex_run<F, T>(
    eval: &mut F,
    start: &[f64],
    f_start: f64,
    config: &OptimizerConfig,
    offset: usize,
    trace: &mut T,
) -> (Vec<f64>, f64, usize, bool)
where
    F: FnMut(&[f64]) -> f64,
    T: FnMut(usize, f64),
{
    let d = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((start.to_vec(), f_start));
    for i in 0..d {
        let mut x = start.to_vec();
        x[i] += config.simplex_scale * x[i].abs().max(1.0);
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = alloc::vec![0.0; d];
    let point = |c: &[f64], toward: &[f64], coef: f64| -> Vec<f64> {
        c.iter().zip(toward).map(|(ci, ti)| ci + coef * (ti - ci)).collect()
    };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[d].1 - simplex[0].1 < config.convergence_tol && simplex_extent(&simplex) <= config.param_tol {
            converged = true;
            break;
        }
        if offset + iterations >= config.max_iters {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..d] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / d as f64;
            }
        }
        let worst = simplex[d].0.clone();
        let f_worst = simplex[d].1;

        let xr = point(&centroid, &worst, -REFLECT);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = point(&centroid, &xr, EXPAND);
            let fe = eval(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc, accept) = if fr < f_worst {
                let xc = point(&centroid, &xr, CONTRACT);
                let fc = eval(&xc);
                let ok = fc <= fr;
                (xc, fc, ok)
            } else {
                let xc = point(&centroid, &worst, CONTRACT);
                let fc = eval(&xc);
                let ok = fc < f_worst;
                (xc, fc, ok)
            };
            if accept {
                simplex[d] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x = point(&best, &vertex.0, SHRINK);
                    let fx = eval(&x);
                    *vertex = (x, fx);
                }
            }
        }
        let best = simplex.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        trace(offset + iterations, best);
    }

    let (params, final_loss) = simplex.swap_remove(0);
    (params, final_loss, iterations, converged)
}

fn simplex_extent(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .flat_map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

/// Trains `model` on `data` by minimizing `loss(residuals(p))`.
pub fn fit<M: ParamModel + ?Sized>(
    model: &M,
    data: &Dataset,
    loss: &LossSpec,
    config: &OptimizerConfig,
) -> Result<FittedModel> {
    if config.start.len() != model.param_dim() {
        return Err(Error::DimensionMismatch { expected: model.param_dim(), found: config.start.len() });
    }
    // Surfaces dimension errors before the optimizer swallows them as NaN.
    let e0 = residuals(model, data, &config.start)?;
    loss.validate(e0.rows(), e0.cols())?;
    minimize(
        |p| residuals(model, data, p).and_then(|e| loss.evaluate(&e)).unwrap_or(f64::NAN),
        config,
    )
}
