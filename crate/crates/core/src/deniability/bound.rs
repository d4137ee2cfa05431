use core::f64::consts::LN_2;

use super::decoy::{Attribute, DistributionSpec};
use crate::{Error, Result};

/// Default quantization step for continuous attributes, `2⁻²⁰`.
pub const DEFAULT_RESOLUTION: f64 = 1.0 / 1_048_576.0;

/// Entropy of one record in bits, summed over independent attributes.
///
/// Continuous attributes are quantized at `resolution`, so the result counts
/// bits in the same unit as a serialized model. Quantized entropies are
/// floored at zero.
pub fn entropy_per_record(spec: &DistributionSpec, resolution: f64) -> Result<f64> {
    if spec.is_empty() {
        return Err(Error::InvalidArguments("distribution needs at least one attribute"));
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidArguments("resolution must be positive"));
    }
    let mut bits = 0.0;
    for attr in &spec.attributes {
        attr.validate()?;
        bits += match *attr {
            Attribute::DiscreteUniform { lo, hi } => libm::log2((hi - lo) as f64 + 1.0),
            Attribute::ContinuousUniform { lo, hi } => {
                if hi <= lo {
                    return Err(Error::NonPositiveSupport);
                }
                libm::log2((hi - lo) / resolution).max(0.0)
            }
            Attribute::Exponential { rate } => {
                ((1.0 - libm::log(rate) + libm::log(1.0 / resolution)) / LN_2).max(0.0)
            }
        };
    }
    Ok(bits)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeniabilityReport {
    pub k_bits: u64,
    pub entropy_per_record_bits: f64,
    pub n: u64,
    /// `k_bits / H`; deniable iff `n` strictly exceeds it.
    pub threshold: f64,
    pub deniable: bool,
}

/// A model of `k_bits` trained on `n` records of `h_bits` entropy each is
/// deniable iff `n > k_bits / h_bits`.
pub fn deniability_check(k_bits: u64, h_bits: f64, n: u64) -> Result<DeniabilityReport> {
    if k_bits == 0 {
        return Err(Error::InvalidArguments("k_bits must be positive"));
    }
    if !(h_bits > 0.0 && h_bits.is_finite()) {
        return Err(Error::InvalidArguments("entropy must be positive and finite"));
    }
    if n == 0 {
        return Err(Error::InvalidArguments("n must be at least 1"));
    }
    let threshold = k_bits as f64 / h_bits;
    Ok(DeniabilityReport {
        k_bits,
        entropy_per_record_bits: h_bits,
        n,
        threshold,
        deniable: n as f64 > threshold,
    })
}
