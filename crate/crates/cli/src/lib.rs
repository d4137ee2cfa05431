//! File formats and command-line front end for `deniable-core`.

pub mod certificate;
pub mod commands;
pub mod csv_io;
pub mod dist;
mod error;
pub mod model_file;

pub use error::{CliError, Result};
