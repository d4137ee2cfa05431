//! Deniability workflows: the entropy bound, decoy generation, denial
//! certificates, and the adversarial non-uniqueness demonstration.

mod adversary;
mod bound;
mod certificate;
mod decoy;
mod experiment;

pub use adversary::{adversary_recover, AdversaryDemo};
pub use bound::{deniability_check, entropy_per_record, DeniabilityReport, DEFAULT_RESOLUTION};
pub use certificate::{
    craft_denial, craft_denial_with_retries, verify_denial, DenialCertificate, ModelDescriptor,
    VerificationReport, MAX_DECOY_ATTEMPTS, START_PERTURBATION, TAMPER_TOLERANCE,
};
pub use decoy::{generate_decoy, Attribute, DistributionSpec};
pub use experiment::{run_trial, ExperimentConfig, TrialOutcome};
