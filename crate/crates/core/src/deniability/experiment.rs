//! The regression denial experiment: train a linear model on noisy data,
//! then deny that data with an unrelated decoy and check the refit.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::certificate::{craft_denial_with_retries, verify_denial, DenialCertificate, VerificationReport};
use super::decoy::{generate_decoy, Attribute, DistributionSpec};
use crate::linalg::Matrix;
use crate::models::{predictions, Dataset, LinearRegression};
use crate::norms::InnerNorm;
use crate::rng::{self, label};
use crate::training::{fit, LossSpec, OptimizerConfig};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Number of regression parameters `d` (inputs `m = d − 1`).
    pub param_dim: usize,
    pub records: usize,
    /// Pass threshold on the largest per-coordinate deviation.
    pub tolerance: f64,
    pub inner: InnerNorm,
    /// True parameters are drawn uniformly from `[-range, range]`.
    pub param_range: f64,
    /// Rate of the exponential noise added to the true responses.
    pub noise_rate: f64,
    /// Inputs and decoy responses are uniform on `1..=value_max`.
    pub value_max: i64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            param_dim: 6,
            records: 10,
            tolerance: 5e-3,
            inner: InnerNorm::Euclidean,
            param_range: 6.0,
            noise_rate: 5.0,
            value_max: 8,
        }
    }
}

impl ExperimentConfig {
    pub fn input_spec(&self) -> DistributionSpec {
        DistributionSpec::repeat(Attribute::DiscreteUniform { lo: 1, hi: self.value_max }, self.param_dim - 1)
    }

    pub fn response_spec(&self) -> DistributionSpec {
        DistributionSpec::repeat(Attribute::DiscreteUniform { lo: 1, hi: self.value_max }, 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub seed: u64,
    /// Parameters used to generate the genuine training data.
    pub p_true: Vec<f64>,
    /// Model fitted to the genuine data; the one being denied.
    pub p_star: Vec<f64>,
    pub training: Dataset,
    pub certificate: DenialCertificate,
    pub decoy_attempts: usize,
    pub verification: VerificationReport,
}

/// Runs one seeded trial end to end.
pub fn run_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialOutcome> {
    let model = LinearRegression::with_param_dim(config.param_dim)?;
    let d = config.param_dim;

    let mut model_rng = rng::stream(seed, label::MODEL);
    let p_true: Vec<f64> =
        (0..d).map(|_| model_rng.random_range(-config.param_range..config.param_range)).collect();

    let mut train_rng = rng::stream(seed, label::TRAINING);
    let inputs = config.input_spec().sample_matrix(config.records, &mut train_rng)?;
    let noise = DistributionSpec::repeat(Attribute::Exponential { rate: config.noise_rate }, 1)
        .sample_matrix(config.records, &mut train_rng)?;
    let clean = predictions(&model, &Dataset::new(inputs.clone(), Matrix::zeros(config.records, 1))?, &p_true)?;
    let mut y = clean;
    for i in 0..config.records {
        y[(i, 0)] += noise[(i, 0)];
    }
    let training = Dataset::new(inputs, y)?;

    let trained = fit(&model, &training, &LossSpec::TwoNorm, &OptimizerConfig::new(vec![0.0; d]).with_seed(seed))?;
    let p_star = trained.params;

    let decoy_seed = rng::substream_seed(seed, label::DECOY);
    let (input_spec, response_spec) = (config.input_spec(), config.response_spec());
    let (certificate, decoy_attempts) = craft_denial_with_retries(
        &model,
        &p_star,
        |attempt| generate_decoy(&input_spec, &response_spec, config.records, rng::trial_seed(decoy_seed, attempt as u64)),
        seed,
        config.inner,
    )?;
    let verification = verify_denial(&certificate, &model, &p_star, config.tolerance)?;
    Ok(TrialOutcome { seed, p_true, p_star, training, certificate, decoy_attempts, verification })
}
