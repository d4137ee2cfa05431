use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::linalg::Matrix;
use crate::models::Dataset;
use crate::rng;
use crate::{Error, Result};

/// Marginal distribution of one attribute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Attribute {
    /// Integers `lo..=hi`, equally likely.
    DiscreteUniform { lo: i64, hi: i64 },
    Exponential { rate: f64 },
    ContinuousUniform { lo: f64, hi: f64 },
}

impl Attribute {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Attribute::DiscreteUniform { lo, hi } => lo <= hi,
            Attribute::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            Attribute::ContinuousUniform { lo, hi } => lo <= hi && lo.is_finite() && hi.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NonPositiveSupport)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Attribute::DiscreteUniform { lo, hi } => rng.random_range(lo..=hi) as f64,
            Attribute::Exponential { rate } => Exp::new(rate).expect("validated rate").sample(rng),
            Attribute::ContinuousUniform { lo, hi } if lo == hi => lo,
            Attribute::ContinuousUniform { lo, hi } => rng.random_range(lo..hi),
        }
    }
}

/// Independent attributes making up one record.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    pub attributes: Vec<Attribute>,
}

impl DistributionSpec {
    pub fn new(attributes: Vec<Attribute>) -> Self {
        Self { attributes }
    }

    /// `count` copies of the same attribute.
    pub fn repeat(attribute: Attribute, count: usize) -> Self {
        Self { attributes: alloc::vec![attribute; count] }
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        self.attributes.iter().try_for_each(Attribute::validate)
    }

    /// Draws `n` i.i.d. records into an `n×len` matrix.
    pub fn sample_matrix<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Matrix> {
        self.validate()?;
        let mut m = Matrix::zeros(n, self.len());
        for i in 0..n {
            for (slot, attr) in m.row_mut(i).iter_mut().zip(&self.attributes) {
                *slot = attr.sample(rng);
            }
        }
        Ok(m)
    }
}

/// Samples a decoy dataset: inputs from `input_spec`, responses from
/// `response_spec`, drawn from separate streams so responses are independent
/// of the inputs.
pub fn generate_decoy(
    input_spec: &DistributionSpec,
    response_spec: &DistributionSpec,
    n: usize,
    seed: u64,
) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let inputs = input_spec.sample_matrix(n, &mut rng::stream(seed, "decoy-inputs"))?;
    let responses = response_spec.sample_matrix(n, &mut rng::stream(seed, "decoy-responses"))?;
    Dataset::new(inputs, responses)
}
