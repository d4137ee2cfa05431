//! Distribution spec strings for `bound --dist`.
//!
//! Comma-separated terms, each an attribute with an optional repeat count:
//! `du:LO:HI` (discrete uniform), `cu:LO:HI` (continuous uniform) or
//! `exp:RATE`, followed by `× N` or `* N`. Example: `du:1:8 × 10, exp:5`.

use deniable_core::deniability::{Attribute, DistributionSpec};

use crate::error::{CliError, Result};

fn num<T: std::str::FromStr>(s: &str, term: &str) -> Result<T> {
    s.trim().parse().map_err(|_| CliError::format(format!("bad number {s:?} in {term:?}")))
}

fn parse_attribute(term: &str) -> Result<Attribute> {
    let parts: Vec<&str> = term.trim().split(':').map(str::trim).collect();
    match parts.as_slice() {
        ["du", lo, hi] => Ok(Attribute::DiscreteUniform { lo: num(lo, term)?, hi: num(hi, term)? }),
        ["cu", lo, hi] => Ok(Attribute::ContinuousUniform { lo: num(lo, term)?, hi: num(hi, term)? }),
        ["exp", rate] => Ok(Attribute::Exponential { rate: num(rate, term)? }),
        _ => Err(CliError::format(format!("unknown distribution term {term:?}"))),
    }
}

pub fn parse_distribution(text: &str) -> Result<DistributionSpec> {
    let mut attributes = Vec::new();
    for term in text.split(',').filter(|t| !t.trim().is_empty()) {
        let (attr, count) = match term.split_once(['×', '*']) {
            Some((a, c)) => (a, num::<usize>(c, term)?),
            None => (term, 1),
        };
        let attr = parse_attribute(attr)?;
        attributes.extend(std::iter::repeat_n(attr, count));
    }
    if attributes.is_empty() {
        return Err(CliError::format("empty distribution spec"));
    }
    Ok(DistributionSpec::new(attributes))
}
