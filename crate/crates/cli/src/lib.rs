//! Scenario files, command-line driver and output formats for the
//! `ramsey-allee-core` model crate.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod csv;
pub mod figures;
pub mod run;
pub mod svg;

use std::path::PathBuf;

pub use commands::{execute, Command, Report, RunOptions};
pub use config::{emit_config, parse_config, ConfigError, InitialConsumption, ScenarioConfig};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("model: {0}")]
    Model(#[from] ramsey_allee_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Reads and parses a scenario file.
pub fn load_config(path: &std::path::Path) -> Result<ScenarioConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_config(&text)?)
}
