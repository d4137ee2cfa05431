use alloc::vec;

use super::decoy::DistributionSpec;
use crate::models::{predictions, Dataset, ParamModel};
use crate::rng::{self, label};
use crate::training::{fit, FittedModel, LossSpec, OptimizerConfig};
use crate::{Error, Result};

/// Two different training sets that both fit to the same parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryDemo {
    pub datasets: [Dataset; 2],
    pub refits: [FittedModel; 2],
}

/// Shows that training is not injective: samples two distinct input
/// matrices, labels both with the model's own predictions at `p_star`, and
/// refits each under the two-norm. Both refits land on `p_star`, so nothing
/// in the model singles out either dataset.
pub fn adversary_recover<M: ParamModel + ?Sized>(
    model: &M,
    p_star: &[f64],
    input_spec: &DistributionSpec,
    n: usize,
    seed: u64,
) -> Result<AdversaryDemo> {
    if n <= model.param_dim() {
        return Err(Error::InvalidArguments("need more records than parameters"));
    }
    if p_star.len() != model.param_dim() {
        return Err(Error::DimensionMismatch { expected: model.param_dim(), found: p_star.len() });
    }
    if input_spec.len() != model.input_dim() {
        return Err(Error::DimensionMismatch { expected: model.input_dim(), found: input_spec.len() });
    }
    let mut rng = rng::stream(seed, label::ADVERSARY);
    let first_inputs = input_spec.sample_matrix(n, &mut rng)?;
    let mut second_inputs = input_spec.sample_matrix(n, &mut rng)?;
    while second_inputs == first_inputs {
        second_inputs = input_spec.sample_matrix(n, &mut rng)?;
    }

    let label_with_model = |inputs| -> Result<Dataset> {
        let unlabeled = Dataset::new(inputs, crate::linalg::Matrix::zeros(n, model.output_dim()))?;
        let y = predictions(model, &unlabeled, p_star)?;
        Dataset::new(unlabeled.inputs().clone(), y)
    };
    let first = label_with_model(first_inputs)?;
    let second = label_with_model(second_inputs)?;

    let config = OptimizerConfig::new(vec![0.0; model.param_dim()]).with_seed(seed);
    let refit_first = fit(model, &first, &LossSpec::TwoNorm, &config)?;
    let refit_second = fit(model, &second, &LossSpec::TwoNorm, &config)?;
    Ok(AdversaryDemo { datasets: [first, second], refits: [refit_first, refit_second] })
}
