//! Crafted error norms for plausible deniability of trained models.
//!
//! Given a parameterized model `f(x, p)` with fitted parameters `p*` and an
//! arbitrary decoy dataset, this crate builds an error norm under which the
//! decoy data retrains (locally) to exactly `p*`. It also carries the
//! supporting pieces: a small dense linear-algebra kernel, a derivative-free
//! optimizer, the entropy bound that decides whether a model can leak its
//! training data at all, and an adversarial non-uniqueness demonstration.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! threading live in the `deniable-fit` companion crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod deniability;
mod error;
pub mod linalg;
pub mod models;
pub mod norms;
pub mod rng;
pub mod training;

pub use error::{Error, Result};
pub use linalg::{Matrix, ProjectionMatrix};
pub use models::{Dataset, LinearRegression, ParamModel};
pub use norms::{CraftedNorm, InnerNorm, Metric};
pub use training::{FittedModel, LossSpec, OptimizerConfig};
