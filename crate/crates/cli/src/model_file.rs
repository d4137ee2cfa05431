//! Model descriptor files: `{"kind": "linear-regression", "params": [...]}`.

use deniable_core::LinearRegression;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const LINEAR_REGRESSION: &str = "linear-regression";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub kind: String,
    pub params: Vec<f64>,
}

impl ModelFile {
    pub fn linear(params: Vec<f64>) -> Self {
        Self { kind: LINEAR_REGRESSION.to_owned(), params }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.kind != LINEAR_REGRESSION {
            return Err(CliError::format(format!("unsupported model kind {:?}", file.kind)));
        }
        if file.params.is_empty() || file.params.iter().any(|p| !p.is_finite()) {
            return Err(CliError::format("model params must be a non-empty list of finite numbers"));
        }
        Ok(file)
    }

    pub fn model(&self) -> LinearRegression {
        LinearRegression::new(self.params.len() - 1)
    }
}
