use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{norm2, rank_condition, Matrix, DEFAULT_SVD_TOLERANCE};
use crate::models::{jacobian, residuals, Dataset, JacobianMethod, ParamModel};
use crate::norms::{make_crafted_norm, CraftedNorm, InnerNorm};
use crate::rng::{self, label};
use crate::training::{fit, FittedModel, LossSpec, OptimizerConfig};
use crate::{Error, Result};

/// Fresh decoys drawn before a rank-condition failure is surfaced.
pub const MAX_DECOY_ATTEMPTS: usize = 10;
/// Standard deviation of the seeded start-point perturbation around `p*`.
pub const START_PERTURBATION: f64 = 1e-2;
/// Largest accepted gap between stored and recomputed residuals.
pub const TAMPER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDescriptor {
    pub kind: String,
    pub param_dim: usize,
    pub input_dim: usize,
    pub output_dim: usize,
}

impl ModelDescriptor {
    pub fn of<M: ParamModel + ?Sized>(model: &M) -> Self {
        Self {
            kind: String::from(model.kind()),
            param_dim: model.param_dim(),
            input_dim: model.input_dim(),
            output_dim: model.output_dim(),
        }
    }
}

/// Everything a third party needs to replay a denial: the decoy data, one
/// crafted norm per output column, the residual at `p*`, and the optimizer
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct DenialCertificate {
    pub decoy: Dataset,
    pub norms: Vec<CraftedNorm>,
    pub residual: Matrix,
    pub optimizer_config: OptimizerConfig,
    pub model: ModelDescriptor,
    pub rank_condition_ok: Vec<bool>,
    pub seed: u64,
}

impl DenialCertificate {
    /// The loss the decoy is retrained under.
    pub fn loss(&self) -> LossSpec {
        match self.norms.as_slice() {
            [single] => LossSpec::Crafted(single.clone()),
            many => LossSpec::CraftedMatrix(many.to_vec()),
        }
    }

    /// Crafted loss of the stored residual, i.e. the loss value at `p*`.
    pub fn loss_at_optimum(&self) -> Result<f64> {
        self.loss().evaluate(&self.residual)
    }
}

fn perturbed_start(p_star: &[f64], seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, label::OPTIMIZER_START);
    p_star
        .iter()
        .map(|p| p + START_PERTURBATION * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Builds the crafted norms under which `decoy` retrains to `p_star`.
pub fn craft_denial<M: ParamModel + ?Sized>(
    model: &M,
    p_star: &[f64],
    decoy: &Dataset,
    seed: u64,
    inner: InnerNorm,
) -> Result<DenialCertificate> {
    let residual = residuals(model, decoy, p_star)?;
    let k = residual.cols();
    let w1_seed = rng::substream_seed(seed, label::W1);
    let mut norms = Vec::with_capacity(k);
    let mut rank_ok = Vec::with_capacity(k);
    for j in 0..k {
        let e = residual.column(j);
        if !(norm2(&e) > DEFAULT_SVD_TOLERANCE) {
            return Err(Error::ZeroResidual { column: j });
        }
        let m = jacobian(model, decoy, p_star, j, JacobianMethod::Auto)?;
        if !rank_condition(&m, &e)? {
            return Err(Error::RankConditionViolated { column: j });
        }
        rank_ok.push(true);
        norms.push(make_crafted_norm(&e, rng::trial_seed(w1_seed, j as u64), inner, DEFAULT_SVD_TOLERANCE)?);
    }
    let optimizer_config = OptimizerConfig::new(perturbed_start(p_star, seed)).with_seed(seed);
    Ok(DenialCertificate {
        decoy: decoy.clone(),
        norms,
        residual,
        optimizer_config,
        model: ModelDescriptor::of(model),
        rank_condition_ok: rank_ok,
        seed,
    })
}

/// [`craft_denial`] with fresh decoys from `next_decoy(attempt)` whenever the
/// rank condition fails, up to [`MAX_DECOY_ATTEMPTS`] draws. Returns the
/// certificate and the number of draws used.
pub fn craft_denial_with_retries<M, G>(
    model: &M,
    p_star: &[f64],
    mut next_decoy: G,
    seed: u64,
    inner: InnerNorm,
) -> Result<(DenialCertificate, usize)>
where
    M: ParamModel + ?Sized,
    G: FnMut(usize) -> Result<Dataset>,
{
    let mut last = Error::RankConditionViolated { column: 0 };
    for attempt in 0..MAX_DECOY_ATTEMPTS {
        let decoy = next_decoy(attempt)?;
        match craft_denial(model, p_star, &decoy, seed, inner) {
            Ok(cert) => return Ok((cert, attempt + 1)),
            Err(err @ Error::RankConditionViolated { .. }) => last = err,
            Err(err) => return Err(err),
        }
    }
    Err(last)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub refit: FittedModel,
    pub max_abs_diff: f64,
    pub passed: bool,
}

/// Retrains the model on the certificate's decoy under its crafted loss and
/// compares the result against `p_star`.
pub fn verify_denial<M: ParamModel + ?Sized>(
    certificate: &DenialCertificate,
    model: &M,
    p_star: &[f64],
    tolerance: f64,
) -> Result<VerificationReport> {
    let recomputed = residuals(model, &certificate.decoy, p_star)?;
    if (recomputed.rows(), recomputed.cols()) != (certificate.residual.rows(), certificate.residual.cols()) {
        return Err(Error::DimensionMismatch {
            expected: recomputed.rows() * recomputed.cols(),
            found: certificate.residual.rows() * certificate.residual.cols(),
        });
    }
    let mut deviation = recomputed
        .as_slice()
        .iter()
        .zip(certificate.residual.as_slice())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if certificate.norms.len() != recomputed.cols() {
        return Err(Error::LengthMismatch { expected: recomputed.cols(), found: certificate.norms.len() });
    }
    for (j, norm) in certificate.norms.iter().enumerate() {
        let col = recomputed.column(j);
        for (a, b) in col.iter().zip(norm.projector().source_error()) {
            deviation = deviation.max((a - b).abs());
        }
    }
    if !(deviation <= TAMPER_TOLERANCE) {
        return Err(Error::CertificateTampered { max_deviation: deviation });
    }

    let refit = fit(model, &certificate.decoy, &certificate.loss(), &certificate.optimizer_config)?;
    let max_abs_diff = refit.params.iter().zip(p_star).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(VerificationReport { passed: max_abs_diff <= tolerance, max_abs_diff, refit })
}
