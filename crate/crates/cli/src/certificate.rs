//! JSON encoding of denial certificates, schema `denial-cert/1`.
//!
//! Floats are written as shortest round-trip decimals, so a certificate read
//! back from disk replays verification bit for bit.

use deniable_core::deniability::{DenialCertificate, ModelDescriptor, VerificationReport};
use deniable_core::linalg::ProjectionMatrix;
use deniable_core::{CraftedNorm, Dataset, InnerNorm, Matrix, OptimizerConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA: &str = "denial-cert/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Euclidean,
    OneNorm,
}

impl From<InnerNorm> for Variant {
    fn from(v: InnerNorm) -> Self {
        match v {
            InnerNorm::Euclidean => Variant::Euclidean,
            InnerNorm::OneNorm => Variant::OneNorm,
        }
    }
}

impl From<Variant> for InnerNorm {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Euclidean => InnerNorm::Euclidean,
            Variant::OneNorm => InnerNorm::OneNorm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormJson {
    /// Rows of the projector `B`, in order.
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    pub w1: Vec<f64>,
    pub alpha: f64,
    pub variant: Variant,
    pub svd_tolerance: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetJson {
    pub inputs: Vec<Vec<f64>>,
    pub responses: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerJson {
    pub start: Vec<f64>,
    pub max_iters: usize,
    pub simplex_scale: f64,
    pub convergence_tol: f64,
    pub param_tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub kind: String,
    pub param_dim: usize,
    pub input_dim: usize,
    pub output_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub schema: String,
    pub seed: u64,
    pub model: ModelJson,
    pub decoy: DatasetJson,
    /// Residual matrix at `p*`, one row per record.
    pub residual: Vec<Vec<f64>>,
    pub norms: Vec<NormJson>,
    pub optimizer: OptimizerJson,
    pub rank_condition_ok: Vec<bool>,
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn matrix_from(rows: &[Vec<f64>], cols: usize) -> Result<Matrix> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::format(format!("ragged matrix: expected {cols} columns")));
    }
    Ok(Matrix::from_row_major(rows.len(), cols, rows.concat())?)
}

fn width(rows: &[Vec<f64>]) -> usize {
    rows.first().map_or(0, Vec::len)
}

impl From<&DenialCertificate> for CertificateJson {
    fn from(c: &DenialCertificate) -> Self {
        let norms = c
            .norms
            .iter()
            .map(|n| NormJson {
                b: rows_of(n.projector().matrix()),
                w1: n.w1().to_vec(),
                alpha: n.alpha(),
                variant: n.inner().into(),
                svd_tolerance: n.projector().svd_tolerance(),
                seed: n.seed(),
            })
            .collect();
        let o = &c.optimizer_config;
        CertificateJson {
            schema: SCHEMA.to_owned(),
            seed: c.seed,
            model: ModelJson {
                kind: c.model.kind.clone(),
                param_dim: c.model.param_dim,
                input_dim: c.model.input_dim,
                output_dim: c.model.output_dim,
            },
            decoy: DatasetJson { inputs: rows_of(c.decoy.inputs()), responses: rows_of(c.decoy.responses()) },
            residual: rows_of(&c.residual),
            norms,
            optimizer: OptimizerJson {
                start: o.start.clone(),
                max_iters: o.max_iters,
                simplex_scale: o.simplex_scale,
                convergence_tol: o.convergence_tol,
                param_tol: o.param_tol,
                seed: o.seed,
            },
            rank_condition_ok: c.rank_condition_ok.clone(),
        }
    }
}

impl CertificateJson {
    pub fn into_certificate(self) -> Result<DenialCertificate> {
        if self.schema != SCHEMA {
            return Err(CliError::format(format!("unsupported schema {:?}, expected {SCHEMA:?}", self.schema)));
        }
        if self.rank_condition_ok.iter().any(|ok| !ok) {
            return Err(CliError::format("certificate records a failed rank condition"));
        }
        let k = self.model.output_dim;
        let decoy = Dataset::new(
            matrix_from(&self.decoy.inputs, self.model.input_dim)?,
            matrix_from(&self.decoy.responses, k)?,
        )?;
        let residual = matrix_from(&self.residual, k)?;
        if self.norms.len() != k {
            return Err(deniable_core::Error::LengthMismatch { expected: k, found: self.norms.len() }.into());
        }
        let norms = self
            .norms
            .into_iter()
            .enumerate()
            .map(|(j, n)| {
                let b = matrix_from(&n.b, width(&n.b))?;
                let projector = ProjectionMatrix::from_parts(b, residual.column(j), n.svd_tolerance)?;
                Ok(CraftedNorm::from_parts(projector, n.w1, n.alpha, n.variant.into(), n.seed)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let o = self.optimizer;
        let optimizer_config = OptimizerConfig {
            start: o.start,
            max_iters: o.max_iters,
            simplex_scale: o.simplex_scale,
            convergence_tol: o.convergence_tol,
            param_tol: o.param_tol,
            seed: o.seed,
        };
        Ok(DenialCertificate {
            decoy,
            norms,
            residual,
            optimizer_config,
            model: ModelDescriptor {
                kind: self.model.kind,
                param_dim: self.model.param_dim,
                input_dim: self.model.input_dim,
                output_dim: self.model.output_dim,
            },
            rank_condition_ok: self.rank_condition_ok,
            seed: self.seed,
        })
    }
}

pub fn to_json(cert: &DenialCertificate) -> Result<String> {
    Ok(serde_json::to_string_pretty(&CertificateJson::from(cert))?)
}

pub fn from_json(text: &str) -> Result<DenialCertificate> {
    serde_json::from_str::<CertificateJson>(text)?.into_certificate()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub refit: Vec<f64>,
    pub max_abs_diff: f64,
    pub passed: bool,
    pub final_loss: f64,
    pub iterations: usize,
    pub converged: bool,
    pub tolerance: f64,
}

impl VerificationJson {
    pub fn new(report: &VerificationReport, tolerance: f64) -> Self {
        Self {
            refit: report.refit.params.clone(),
            max_abs_diff: report.max_abs_diff,
            passed: report.passed,
            final_loss: report.refit.final_loss,
            iterations: report.refit.iterations,
            converged: report.refit.converged,
            tolerance,
        }
    }
}
